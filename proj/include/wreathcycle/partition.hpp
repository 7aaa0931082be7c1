#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace wreathcycle {

/// Truncated random partition of unity: finitely many known parts in
/// nonincreasing order plus the mass left unexplored by the sampler.
class Partition {
 public:
  /// The trivial partition (1).
  Partition() : parts_{1.0} {}

  /// Sorts `parts`, drops exact zeros, and checks sum(parts) + tail_mass = 1
  /// within 1e-12.
  Partition(std::vector<double> parts, double tail_mass);

  std::span<const double> parts() const { return parts_; }
  double tail_mass() const { return tail_mass_; }
  std::size_t size() const { return parts_.size(); }

  /// The r-th largest part (r >= 1), zero beyond the known parts.
  double largest(std::size_t r = 1) const {
    return r >= 1 && r <= parts_.size() ? parts_[r - 1] : 0.0;
  }

 private:
  std::vector<double> parts_;
  double tail_mass_ = 0;
};

enum class Norm { L1, LInf };

/// Distance between sorted, zero-padded part sequences. Tail masses are added
/// as worst-case slack: both tails for L1, the larger tail for L-infinity.
double partition_distance(const Partition& p, const Partition& q, Norm norm);

}  // namespace wreathcycle
