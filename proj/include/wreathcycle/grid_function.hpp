#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "wreathcycle/json.hpp"

namespace wreathcycle {

/// A real function sampled on the uniform grid 0, h, 2h, ..., u_max.
/// Immutable after construction.
class GridFunction {
 public:
  GridFunction(double u_max, double h, std::vector<double> values);

  template <class F>
  static GridFunction tabulate(double u_max, double h, F&& f) {
    const std::size_t count = node_count(u_max, h);
    std::vector<double> values(count);
    for (std::size_t i = 0; i < count; ++i) values[i] = f(static_cast<double>(i) * h);
    return GridFunction(u_max, h, std::move(values));
  }

  /// Number of nodes for a grid on [0, u_max] with step h. Throws if h does
  /// not divide u_max.
  static std::size_t node_count(double u_max, double h);

  double u_max() const { return u_max_; }
  double step() const { return h_; }
  std::size_t size() const { return values_.size(); }
  double node(std::size_t i) const { return static_cast<double>(i) * h_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }

  /// Linear interpolation; arguments outside [0, u_max] are clamped.
  double operator()(double u) const;

  /// Index of the node at u. Throws when u is not (within 1e-9 h) a node.
  std::size_t index_of(double u) const;

  /// True when values lie in [0, 1] and never increase.
  bool is_distribution_in_inverse(double tol = 1e-12) const;

 private:
  double u_max_;
  double h_;
  std::vector<double> values_;
};

/// Piecewise-constant, left-continuous function on [0, inf):
/// levels[0] on [0, breaks[0]], levels[i] on (breaks[i-1], breaks[i]],
/// levels.back() beyond the last break.
class StepFunction {
 public:
  StepFunction(std::vector<double> breaks, std::vector<double> levels);

  /// Indicator of [0, 1] (value 1 up to and including 1, then 0).
  static StepFunction unit_indicator();

  double operator()(double x) const;
  double right_limit(double x) const;
  std::span<const double> breaks() const { return breaks_; }
  std::span<const double> levels() const { return levels_; }

  GridFunction sample(double u_max, double h) const;

 private:
  std::vector<double> breaks_;
  std::vector<double> levels_;
};

/// Convolution kernel: either a sampled continuous function or an exact step function.
using Kernel = std::variant<GridFunction, StepFunction>;

double evaluate(const Kernel& kernel, double x);
GridFunction sample(const Kernel& kernel, double u_max, double h);

/// CSV with optional '#' comment lines, then the header "u,value", then one
/// row per node with 17 significant digits.
std::string to_csv(const GridFunction& f, std::string_view comment = {});
nlohmann::json to_json(const GridFunction& f);
GridFunction grid_function_from_json(const nlohmann::json& j);
GridFunction grid_function_from_csv(std::string_view text);

}  // namespace wreathcycle
