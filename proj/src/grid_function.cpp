#include "wreathcycle/grid_function.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace wreathcycle {

std::size_t GridFunction::node_count(double u_max, double h) {
  if (!(h > 0) || !(u_max > 0) || !std::isfinite(u_max) || !std::isfinite(h)) {
    throw std::invalid_argument("grid requires positive finite u_max and h");
  }
  const double ratio = u_max / h;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-12 * std::max(1.0, ratio)) {
    throw std::invalid_argument("grid step must divide u_max");
  }
  return static_cast<std::size_t>(rounded) + 1;
}

GridFunction::GridFunction(double u_max, double h, std::vector<double> values)
    : u_max_(u_max), h_(h), values_(std::move(values)) {
  if (values_.size() != node_count(u_max, h)) {
    throw std::invalid_argument("grid values do not match the node count");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("grid values must be finite");
  }
}

double GridFunction::operator()(double u) const {
  if (u <= 0) return values_.front();
  const double pos = u / h_;
  if (pos >= static_cast<double>(values_.size() - 1)) return values_.back();
  const auto i = static_cast<std::size_t>(pos);
  const double t = pos - static_cast<double>(i);
  return values_[i] + t * (values_[i + 1] - values_[i]);
}

std::size_t GridFunction::index_of(double u) const {
  const double pos = u / h_;
  const double rounded = std::round(pos);
  if (std::abs(pos - rounded) > 1e-9 || rounded < 0 ||
      rounded > static_cast<double>(values_.size() - 1)) {
    throw std::out_of_range("point is not a grid node");
  }
  return static_cast<std::size_t>(rounded);
}

bool GridFunction::is_distribution_in_inverse(double tol) const {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] < -tol || values_[i] > 1 + tol) return false;
    if (i > 0 && values_[i] > values_[i - 1] + tol) return false;
  }
  return true;
}

StepFunction::StepFunction(std::vector<double> breaks, std::vector<double> levels)
    : breaks_(std::move(breaks)), levels_(std::move(levels)) {
  if (levels_.size() != breaks_.size() + 1) {
    throw std::invalid_argument("step function needs one more level than breaks");
  }
  for (std::size_t i = 0; i < breaks_.size(); ++i) {
    if (!(breaks_[i] > 0) || (i > 0 && !(breaks_[i] > breaks_[i - 1]))) {
      throw std::invalid_argument("step breaks must be positive and increasing");
    }
  }
}

StepFunction StepFunction::unit_indicator() { return StepFunction({1.0}, {1.0, 0.0}); }

double StepFunction::operator()(double x) const {
  // First break >= x owns x (left continuity).
  const auto it = std::lower_bound(breaks_.begin(), breaks_.end(), x);
  return levels_[static_cast<std::size_t>(it - breaks_.begin())];
}

double StepFunction::right_limit(double x) const {
  const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
  return levels_[static_cast<std::size_t>(it - breaks_.begin())];
}

GridFunction StepFunction::sample(double u_max, double h) const {
  return GridFunction::tabulate(u_max, h, [this](double x) { return (*this)(x); });
}

double evaluate(const Kernel& kernel, double x) {
  return std::visit([x](const auto& k) { return k(x); }, kernel);
}

GridFunction sample(const Kernel& kernel, double u_max, double h) {
  if (const auto* g = std::get_if<GridFunction>(&kernel)) {
    if (g->u_max() == u_max && g->step() == h) return *g;
  }
  return GridFunction::tabulate(u_max, h, [&](double x) { return evaluate(kernel, x); });
}

std::string to_csv(const GridFunction& f, std::string_view comment) {
  std::string out;
  if (!comment.empty()) {
    std::istringstream lines{std::string(comment)};
    for (std::string line; std::getline(lines, line);) out += "# " + line + "\n";
  }
  out += "u,value\n";
  char buf[64];
  for (std::size_t i = 0; i < f.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", f.node(i), f[i]);
    out += buf;
  }
  return out;
}

nlohmann::json to_json(const GridFunction& f) {
  return {{"u_max", f.u_max()},
          {"h", f.step()},
          {"values", std::vector<double>(f.values().begin(), f.values().end())}};
}

GridFunction grid_function_from_json(const nlohmann::json& j) {
  return GridFunction(j.at("u_max").get<double>(), j.at("h").get<double>(),
                      j.at("values").get<std::vector<double>>());
}

GridFunction grid_function_from_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  bool header = false;
  std::vector<double> us;
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    if (!header) {
      if (line != "u,value") throw std::invalid_argument("expected header u,value");
      header = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("malformed CSV row");
    us.push_back(std::stod(line.substr(0, comma)));
    values.push_back(std::stod(line.substr(comma + 1)));
  }
  if (us.size() < 2) throw std::invalid_argument("CSV grid needs at least two rows");
  const double h = us[1] - us[0];
  return GridFunction(us.back(), h, std::move(values));
}

}  // namespace wreathcycle
