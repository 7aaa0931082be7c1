#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <thread>
#include <vector>

namespace wreathcycle {

/// Seed used when neither a flag nor WREATHCYCLE_SEED provides one.
inline constexpr std::uint64_t kDefaultSeed = 20241016;

/// Mixes (master seed, stream tag, index) into a seed for an independent stream.
/// Streams depend only on these three values, never on scheduling.
std::uint64_t derive_seed(std::uint64_t master, std::string_view tag, std::uint64_t index);

/// Thin wrapper over mt19937_64 with distribution helpers whose output is
/// fixed by this library rather than by the standard library vendor.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng for_stream(std::uint64_t master, std::string_view tag, std::uint64_t index) {
    return Rng(derive_seed(master, tag, index));
  }

  std::uint64_t bits() { return engine_(); }

  /// Uniform on the open interval (0, 1).
  double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

  /// Unit-rate exponential.
  double exponential();

  /// Poisson by sequential inversion. Intended for means up to a few units.
  std::uint32_t poisson(double mean);

  /// Uniform random permutation of 0..m-1 (Fisher-Yates).
  std::vector<std::uint32_t> permutation(std::size_t m);

 private:
  std::mt19937_64 engine_;
};

/// Evaluates fn(i) for i in [0, count) on up to `threads` workers and returns
/// the results in index order. Results never depend on the worker count as
/// long as fn(i) depends only on i.
template <class Fn>
auto parallel_map(std::size_t count, unsigned threads, Fn&& fn) {
  using Result = decltype(fn(std::size_t{}));
  std::vector<Result> out(count);
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  constexpr std::size_t kChunk = 256;
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::size_t begin = next.fetch_add(kChunk);
      if (begin >= count) return;
      const std::size_t end = std::min(count, begin + kChunk);
      for (std::size_t i = begin; i < end; ++i) out[i] = fn(i);
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (unsigned t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  return out;
}

/// Worker count used when a caller does not choose one.
unsigned default_threads();

}  // namespace wreathcycle
