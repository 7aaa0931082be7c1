#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "wreathcycle/arith.hpp"
#include "wreathcycle/limit_samplers.hpp"
#include "wreathcycle/partition.hpp"
#include "wreathcycle/perm.hpp"
#include "wreathcycle/rng.hpp"

namespace wreathcycle {

/// Feller coupling sequence 1 xi_2 ... xi_n 1 with P(xi_i = 1) = 1/i.
struct FellerDraw {
  std::vector<std::uint8_t> bits;      // n + 1 entries, bits[0] = bits[n] = 1
  std::vector<std::uint32_t> counts;   // counts[k-1] = number of k-spaces
  std::size_t n() const { return counts.size(); }
};

FellerDraw sample_feller(std::size_t n, Rng& rng);

/// Arrivals x_1 > x_2 > ... of the rate-1/t Poisson process on (cutoff, 1].
struct ArrivalSet {
  std::vector<double> times;
  double cutoff;
};

ArrivalSet sample_log_poisson(double cutoff, Rng& rng);

/// Index-aligned pieces of the rounding coupling: position i of `discrete`
/// (possibly zero) is paired with position i of `continuous`.
struct AlignedPieces {
  std::vector<std::uint64_t> discrete_units;  // discrete part times n
  std::vector<double> discrete;
  std::vector<double> continuous;
  double continuous_tail;
};

/// Rounds y_i = floor(n x_i) / n and returns the aligned parts of
/// Sigma_n = (1 - y_1, y_1 - y_2, ...) and Sigma = (1 - x_1, x_1 - x_2, ...).
/// The last continuous part stops at the cutoff, whose mass becomes the tail.
AlignedPieces round_aligned(const ArrivalSet& arrivals, std::size_t n);

/// (Sigma_n, Sigma) as sorted partitions; zero-length discrete parts are dropped.
std::pair<Partition, Partition> round_coupling(const ArrivalSet& arrivals, std::size_t n);

/// The pairing g(i, j) = 2^{i-1} (2j - 1), a bijection from pairs of
/// positive integers onto the positive integers. Throws std::overflow_error
/// when the value does not fit in 64 bits.
std::uint64_t pairing_index(std::uint64_t i, std::uint64_t j);

/// f(a, b_1, b_2, ...): the parts a_i (b_i)_j, sorted. Tail mass is
/// a.tail + sum_i a_i b_i.tail.
Partition combine_f(const Partition& a, std::span<const Partition> bs);

struct CoupledPair {
  Partition discrete;
  Partition continuous;
  double linf;
  double l1;
};

/// Cutoff used for arrival sets when rounding to 1/n: min(eps, 1/(4n)).
double default_cutoff(double eps, std::size_t n);

/// Couples normalized cycle lengths of a uniform element of S_k^n x| S_n with
/// the square-cutting partition: the top permutation and every block product
/// are rounding couplings of independent arrival sets.
CoupledPair sample_coupled_pair(std::size_t k, std::size_t n, double eps, Rng& rng);

/// Couples normalized cycle lengths of a uniform element of Gamma^n x| S_n
/// with A = (U B, (1-U) A). Block partitions are shared exactly between sides.
CoupledPair sample_coupled_pair(const BlockGroupSpec& spec, std::size_t n, double eps, Rng& rng);

struct LcmPair {
  double log_o;  // log lcm of the wreath element's cycle lengths
  double log_p;  // log lcm of the top permutation's cycle lengths
};

/// One uniform top permutation drives both sides. `table` must cover k*n.
LcmPair sample_coupled_lcm(const BlockGroupSpec& spec, std::size_t n, Rng& rng,
                           const SpfTable& table);

}  // namespace wreathcycle
