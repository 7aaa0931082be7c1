#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "wreathcycle/arith.hpp"
#include "wreathcycle/rng.hpp"

namespace wreathcycle {

/// Multiset of cycle lengths, stored in nonincreasing order.
class CycleType {
 public:
  CycleType() = default;
  explicit CycleType(std::vector<std::uint64_t> lengths);

  std::span<const std::uint64_t> lengths() const { return lengths_; }
  std::uint64_t total() const { return total_; }
  std::size_t count() const { return lengths_.size(); }
  /// Number of cycles of exactly this length.
  std::size_t count_of(std::uint64_t length) const;

  friend bool operator==(const CycleType&, const CycleType&) = default;

 private:
  std::vector<std::uint64_t> lengths_;
  std::uint64_t total_ = 0;
};

/// Bijection of {0, ..., m-1}, stored as its image list. All indices are zero-based;
/// the one-line and cycle factories accept the customary one-based notation.
class Perm {
 public:
  Perm() = default;
  explicit Perm(std::vector<std::uint32_t> images);

  static Perm identity(std::size_t m);
  /// One-line notation with one-based images, e.g. {2, 1, 3}.
  static Perm from_one_line(std::initializer_list<std::uint32_t> one_based);
  /// Product of disjoint cycles in one-based notation, e.g. from_cycles(3, {{3, 1, 2}}).
  static Perm from_cycles(std::size_t m,
                          std::initializer_list<std::initializer_list<std::uint32_t>> cycles);

  std::size_t size() const { return images_.size(); }
  std::uint32_t operator()(std::uint32_t i) const { return images_[i]; }
  std::span<const std::uint32_t> images() const { return images_; }

  Perm inverse() const;
  CycleType cycle_type() const;

  friend bool operator==(const Perm&, const Perm&) = default;

 private:
  std::vector<std::uint32_t> images_;
};

/// (outer o inner)(x) = outer(inner(x)).
Perm compose(const Perm& outer, const Perm& inner);

/// Uniform sample from S_m.
Perm sample_perm(std::size_t m, Rng& rng);

/// Support of the block distribution: the full symmetric group, the cyclic
/// rotation group, or an explicit list sampled uniformly with replacement.
class BlockGroupSpec {
 public:
  enum class Kind { Full, Cyclic, Explicit };

  static BlockGroupSpec full(std::size_t k);
  static BlockGroupSpec cyclic(std::size_t k);
  static BlockGroupSpec explicit_set(std::vector<Perm> support);

  Kind kind() const { return kind_; }
  std::size_t block_size() const { return k_; }
  std::span<const Perm> support() const { return support_; }

  Perm sample(Rng& rng) const;

 private:
  BlockGroupSpec(Kind kind, std::size_t k, std::vector<Perm> support)
      : kind_(kind), k_(k), support_(std::move(support)) {}

  Kind kind_;
  std::size_t k_;
  std::vector<Perm> support_;
};

/// sigma = (g_1, ..., g_n; h) acting on n blocks of size k. Point b*k + j
/// (block b, offset j) maps to c*k + g_c(j) where c = h^{-1}(b): the
/// within-block arrangement followed by moving block c to position h(c).
class WreathElement {
 public:
  WreathElement(std::vector<Perm> blocks, Perm top);

  std::size_t block_size() const { return k_; }
  std::size_t block_count() const { return top_.size(); }
  std::size_t degree() const { return k_ * top_.size(); }
  std::span<const Perm> blocks() const { return blocks_; }
  const Perm& top() const { return top_; }

  /// Image of a zero-based point.
  std::uint64_t apply(std::uint64_t point) const;

  /// The element as a permutation of {0, ..., kn-1}.
  Perm to_perm() const;

 private:
  std::size_t k_;
  std::vector<Perm> blocks_;
  Perm top_;
  Perm top_inverse_;
};

WreathElement sample_wreath(const BlockGroupSpec& spec, std::size_t n, Rng& rng);

/// Cycle type assembled from the block structure: every m-cycle
/// (e, h(e), ..., h^{m-1}(e)) of the top permutation contributes m*G for each
/// cycle length G of g_e o g_{h(e)} o ... o g_{h^{m-1}(e)}.
CycleType cycle_type_blockwise(const WreathElement& w);

/// log lcm of the cycle lengths via per-prime maximum exponents.
double log_lcm(const CycleType& ct, const SpfTable& table);
double log_lcm(const CycleType& ct);

/// log lcm(1, ..., k).
double log_lcm_upto(std::uint64_t k);

}  // namespace wreathcycle
