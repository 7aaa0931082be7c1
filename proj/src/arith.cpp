#include "wreathcycle/arith.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wreathcycle/rng.hpp"

namespace wreathcycle {
namespace {

std::uint64_t floor_power(double x, double u) {
  const double v = std::pow(x, u);
  const double r = std::round(v);
  // pow of integers is occasionally one ulp short of an exact integer result.
  if (std::abs(v - r) <= 1e-9 * std::max(1.0, r)) return static_cast<std::uint64_t>(r);
  return static_cast<std::uint64_t>(std::floor(v));
}

double prime_weight(std::uint64_t p, double log_x, const GridFunction& rho) {
  const double v = std::log(static_cast<double>(p)) / log_x;
  if (v <= 1.0) return 1.0;
  return rho(v);
}

// Sum of a contiguous block in a fixed pairwise order.
double pairwise_sum(const double* data, std::size_t count) {
  if (count <= 8) {
    double s = 0;
    for (std::size_t i = 0; i < count; ++i) s += data[i];
    return s;
  }
  const std::size_t half = count / 2;
  return pairwise_sum(data, half) + pairwise_sum(data + half, count - half);
}

}  // namespace

SpfTable::SpfTable(std::uint64_t limit) : limit_(limit) {
  if (limit < 2) throw std::invalid_argument("sieve limit must be at least 2");
  if (limit > 0xFFFFFFFFull) throw std::invalid_argument("sieve limit exceeds 32-bit factors");
  spf_.assign(limit + 1, 0);
  std::vector<std::uint32_t> primes;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (spf_[i] == 0) {
      spf_[i] = static_cast<std::uint32_t>(i);
      primes.push_back(static_cast<std::uint32_t>(i));
    }
    for (std::uint32_t p : primes) {
      const std::uint64_t ip = i * p;
      if (p > spf_[i] || ip > limit) break;
      spf_[ip] = p;
    }
  }
}

std::vector<std::pair<std::uint64_t, unsigned>> SpfTable::factorize(std::uint64_t n) const {
  if (n == 0 || n > limit_) throw std::out_of_range("factorize: n outside the sieve");
  std::vector<std::pair<std::uint64_t, unsigned>> out;
  while (n > 1) {
    const std::uint64_t p = spf_[n];
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  return out;
}

SpfTable build_spf(std::uint64_t limit) { return SpfTable(limit); }

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) {
  while (b != 0) {
    a %= b;
    std::swap(a, b);
  }
  return a;
}

std::uint64_t divisor_count(std::uint64_t i) {
  if (i == 0) throw std::invalid_argument("divisor_count requires i >= 1");
  std::uint64_t count = 1;
  for (std::uint64_t p = 2; p * p <= i; ++p) {
    unsigned e = 0;
    while (i % p == 0) {
      i /= p;
      ++e;
    }
    count *= e + 1;
  }
  if (i > 1) count *= 2;
  return count;
}

std::uint64_t totient(std::uint64_t l) {
  if (l == 0) throw std::invalid_argument("totient requires l >= 1");
  std::uint64_t result = l;
  for (std::uint64_t p = 2; p * p <= l; ++p) {
    if (l % p != 0) continue;
    while (l % p == 0) l /= p;
    result -= result / p;
  }
  if (l > 1) result -= result / l;
  return result;
}

double multiplicative_weight(std::uint64_t n, double x, const GridFunction& rho,
                             const SpfTable& table) {
  const double log_x = std::log(x);
  double w = 1.0;
  while (n > 1) {
    const std::uint64_t p = table.smallest_factor(n);
    n /= p;
    w *= prime_weight(p, log_x, rho);
  }
  return w;
}

double multiplicative_mean(double x, double u, const GridFunction& rho, const SpfTable& table,
                           unsigned threads) {
  if (!(x >= 2) || !(u > 0)) throw std::invalid_argument("multiplicative_mean needs x >= 2, u > 0");
  const std::uint64_t upper = floor_power(x, u);
  if (upper > table.limit()) throw std::out_of_range("floor(x^u) exceeds the sieve capacity");
  if (u > 1 && rho.u_max() < u - 1e-12) throw std::invalid_argument("rho must cover [0, u]");
  if (upper < 1) return 1.0;

  const double log_x = std::log(x);
  // Weights of small primes are memoized; larger primes are evaluated on demand.
  const std::uint64_t memo_limit = std::min<std::uint64_t>(upper, 1u << 22);
  std::vector<double> memo(memo_limit + 1, 1.0);
  for (std::uint64_t p = 2; p <= memo_limit; ++p) {
    if (table.is_prime(p)) memo[p] = prime_weight(p, log_x, rho);
  }

  constexpr std::uint64_t kBlock = 1u << 16;
  const std::uint64_t blocks = (upper + kBlock - 1) / kBlock;
  const auto block_sums = parallel_map(blocks, threads, [&](std::size_t b) {
    const std::uint64_t begin = 1 + b * kBlock;
    const std::uint64_t end = std::min(upper, begin + kBlock - 1);
    std::vector<double> values;
    values.reserve(end - begin + 1);
    for (std::uint64_t n = begin; n <= end; ++n) {
      double w = 1.0;
      std::uint64_t m = n;
      while (m > 1) {
        const std::uint64_t p = table.smallest_factor(m);
        m /= p;
        w *= p <= memo_limit ? memo[p] : prime_weight(p, log_x, rho);
      }
      values.push_back(w);
    }
    return pairwise_sum(values.data(), values.size());
  });
  return pairwise_sum(block_sums.data(), block_sums.size()) / static_cast<double>(upper);
}

double multiplicative_mean(double x, double u, const GridFunction& rho,
                           const MeanOptions& options) {
  const std::uint64_t upper = floor_power(x, u);
  if (upper > options.capacity) throw std::out_of_range("floor(x^u) exceeds the sieve capacity");
  const SpfTable table(std::max<std::uint64_t>(upper, 2));
  return multiplicative_mean(x, u, rho, table, options.threads);
}

}  // namespace wreathcycle
