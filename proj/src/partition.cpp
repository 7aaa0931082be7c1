#include "wreathcycle/partition.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace wreathcycle {

Partition::Partition(std::vector<double> parts, double tail_mass)
    : parts_(std::move(parts)), tail_mass_(tail_mass) {
  if (!(tail_mass_ >= 0) || !std::isfinite(tail_mass_)) {
    throw std::invalid_argument("tail mass must be finite and nonnegative");
  }
  std::erase(parts_, 0.0);
  long double sum = tail_mass_;
  for (double p : parts_) {
    if (!(p > 0) || !std::isfinite(p)) throw std::invalid_argument("parts must be nonnegative");
    sum += p;
  }
  if (std::abs(static_cast<double>(sum) - 1.0) > 1e-12) {
    throw std::invalid_argument("parts and tail mass must sum to 1");
  }
  std::sort(parts_.begin(), parts_.end(), std::greater<>());
}

double partition_distance(const Partition& p, const Partition& q, Norm norm) {
  const auto a = p.parts();
  const auto b = q.parts();
  const std::size_t n = std::max(a.size(), b.size());
  double l1 = 0;
  double linf = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = i < a.size() ? a[i] : 0.0;
    const double y = i < b.size() ? b[i] : 0.0;
    const double d = std::abs(x - y);
    l1 += d;
    linf = std::max(linf, d);
  }
  if (norm == Norm::L1) return l1 + p.tail_mass() + q.tail_mass();
  return linf + std::max(p.tail_mass(), q.tail_mass());
}

}  // namespace wreathcycle
