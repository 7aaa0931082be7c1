#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wreathcycle/grid_function.hpp"
#include "wreathcycle/json.hpp"
#include "wreathcycle/limit_samplers.hpp"
#include "wreathcycle/perm.hpp"
#include "wreathcycle/rng.hpp"

namespace wreathcycle {

/// Parses "trivial", "pd", "gsg:m", "full:k" or "cyclic:k".
BlockLaw parse_block_law(std::string_view text);

/// Parses "full:k" or "cyclic:k".
BlockGroupSpec parse_group_spec(std::string_view text);

struct ExperimentConfig {
  std::string name;
  std::uint64_t seed = kDefaultSeed;
  std::size_t samples = 1;
  nlohmann::json params = nlohmann::json::object();
  unsigned threads = 1;  // never changes results, so it is not echoed in reports
};

/// One reported number. Checked statistics carry the threshold they were held
/// to and the claim they test.
struct Statistic {
  std::string key;
  double value = 0;
  nlohmann::json tolerance;  // null, a number, or a textual range
  std::string claim;
  std::optional<bool> pass;
};

/// Plot data handed to front ends; not part of the serialized report.
struct Curve {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<Statistic> stats;
  std::vector<Curve> curves;
  double runtime_ms = 0;

  /// True when every checked statistic passed.
  bool pass() const;
  const Statistic& stat(std::string_view key) const;

  /// Schema {name, seed, samples, params, stats, runtime_ms}. The runtime is
  /// left out unless requested so that repeated runs serialize identically.
  nlohmann::json to_json(bool include_runtime = false) const;
  /// Header "key,value,tolerance,pass,paper_ref", one row per statistic.
  std::string to_csv() const;
};

/// sup |F_N - F| over the sorted samples.
double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf);

/// Largest-part CDFs of A against the solved phi_k, for k <= kmax.
/// Params: law, kmax, eps, h, u_max.
ExperimentReport run_largest_piece(const ExperimentConfig& cfg);

/// L-infinity and L1 distances of the square-cutting coupling.
/// Params: k, n, eps, c.
ExperimentReport run_wasserstein(const ExperimentConfig& cfg);

/// Sandwich log P_n <= log O_n <= log P_n + log exp(Gamma) and the normalized
/// order statistic. Params: group, n, smoke_n.
ExperimentReport run_erdos_turan(const ExperimentConfig& cfg);

/// Moments of the compound-Poisson counts and the finite wreath counts a_1.
/// Params: imax, k, n.
ExperimentReport run_compound_poisson(const ExperimentConfig& cfg);

/// Averages of the multiplicative function f_x against pi(u).
/// Params: u, xs, u_secondary, h, capacity.
ExperimentReport run_multiplicative_mean(const ExperimentConfig& cfg);

/// Names accepted by run_experiment.
std::vector<std::string> experiment_names();

/// Defaults for every parameter of the named experiment.
ExperimentConfig default_config(std::string_view name);

ExperimentReport run_experiment(const ExperimentConfig& cfg);

}  // namespace wreathcycle
