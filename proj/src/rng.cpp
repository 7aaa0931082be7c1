#include "wreathcycle/rng.hpp"

#include <cmath>
#include <numeric>

namespace wreathcycle {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::string_view tag, std::uint64_t index) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ fnv1a(tag));
  return splitmix64(h ^ splitmix64(index + 0x632BE59BD9B4E019ull));
}

std::uint64_t Rng::below(std::uint64_t bound) {
  // Lemire's multiply-shift with rejection.
  std::uint64_t x = engine_();
  __uint128_t m = static_cast<__uint128_t>(x) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      x = engine_();
      m = static_cast<__uint128_t>(x) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double Rng::exponential() { return -std::log(uniform()); }

std::uint32_t Rng::poisson(double mean) {
  if (mean <= 0) return 0;
  double p = std::exp(-mean);
  double cdf = p;
  const double u = uniform();
  std::uint32_t k = 0;
  while (u > cdf && p > 0) {
    ++k;
    p *= mean / k;
    cdf += p;
  }
  return k;
}

std::vector<std::uint32_t> Rng::permutation(std::size_t m) {
  std::vector<std::uint32_t> out(m);
  std::iota(out.begin(), out.end(), 0u);
  for (std::size_t i = m; i > 1; --i) {
    const std::size_t j = below(i);
    std::swap(out[i - 1], out[j]);
  }
  return out;
}

unsigned default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace wreathcycle
