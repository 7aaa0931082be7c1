#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "wreathcycle/grid_function.hpp"

namespace wreathcycle {

/// Smallest-prime-factor table for 2..limit, built by a linear sieve.
class SpfTable {
 public:
  explicit SpfTable(std::uint64_t limit);

  std::uint64_t limit() const { return limit_; }

  /// Smallest prime factor of n, for 2 <= n <= limit.
  std::uint32_t smallest_factor(std::uint64_t n) const { return spf_[n]; }
  bool is_prime(std::uint64_t n) const { return n >= 2 && spf_[n] == n; }

  /// (prime, exponent) pairs in increasing prime order; empty for n = 1.
  std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n) const;

 private:
  std::uint64_t limit_;
  std::vector<std::uint32_t> spf_;
};

SpfTable build_spf(std::uint64_t limit);

/// Number of divisors of i (i >= 1).
std::uint64_t divisor_count(std::uint64_t i);

/// Euler's totient of l (l >= 1).
std::uint64_t totient(std::uint64_t l);

std::uint64_t gcd(std::uint64_t a, std::uint64_t b);

struct MeanOptions {
  std::uint64_t capacity = 100'000'000;
  unsigned threads = 1;
};

/// Average of f_x(n) over 1 <= n <= floor(x^u), where f_x is the totally
/// multiplicative function with f_x(p) = rho(log p / log x) on primes.
/// rho is read by linear interpolation and must cover [0, u].
double multiplicative_mean(double x, double u, const GridFunction& rho,
                           const MeanOptions& options = {});

/// Same, reusing a prebuilt table (its limit must cover floor(x^u)).
double multiplicative_mean(double x, double u, const GridFunction& rho, const SpfTable& table,
                           unsigned threads = 1);

/// f_x(n) for a single n, by walking the factorization of n.
double multiplicative_weight(std::uint64_t n, double x, const GridFunction& rho,
                             const SpfTable& table);

}  // namespace wreathcycle
