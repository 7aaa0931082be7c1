#include "wreathcycle/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "wreathcycle/arith.hpp"
#include "wreathcycle/couplings.hpp"
#include "wreathcycle/format.hpp"
#include "wreathcycle/integral_solvers.hpp"

namespace wreathcycle {
namespace {

constexpr double kEulerGamma = std::numbers::egamma;

std::size_t parse_size(std::string_view text, std::string_view what) {
  std::size_t value = 0;
  const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc{} || result.ptr != text.data() + text.size() || value == 0) {
    throw std::invalid_argument("invalid " + std::string(what) + ": " + std::string(text));
  }
  return value;
}

const nlohmann::json& require(const ExperimentConfig& cfg, const char* key) {
  if (!cfg.params.is_object() || !cfg.params.contains(key)) {
    throw std::invalid_argument("experiment " + cfg.name + " needs parameter '" + key + "'");
  }
  return cfg.params.at(key);
}

double number(const ExperimentConfig& cfg, const char* key) {
  const auto& v = require(cfg, key);
  if (!v.is_number()) throw std::invalid_argument(std::string("parameter '") + key + "' must be a number");
  return v.get<double>();
}

std::size_t count(const ExperimentConfig& cfg, const char* key) {
  const double v = number(cfg, key);
  if (!(v >= 1) || v != std::floor(v)) {
    throw std::invalid_argument(std::string("parameter '") + key + "' must be a positive integer");
  }
  return static_cast<std::size_t>(v);
}

std::string text(const ExperimentConfig& cfg, const char* key) {
  const auto& v = require(cfg, key);
  if (!v.is_string()) throw std::invalid_argument(std::string("parameter '") + key + "' must be a string");
  return v.get<std::string>();
}

void check_samples(const ExperimentConfig& cfg) {
  if (cfg.samples == 0) throw std::invalid_argument("samples must be at least 1");
}

ExperimentReport start(const ExperimentConfig& cfg) {
  check_samples(cfg);
  ExperimentReport report;
  report.config = cfg;
  return report;
}

void info(ExperimentReport& r, std::string key, double value, std::string claim = {}) {
  r.stats.push_back({std::move(key), value, nullptr, std::move(claim), std::nullopt});
}

void check(ExperimentReport& r, std::string key, double value, nlohmann::json tolerance,
           std::string claim, bool pass) {
  r.stats.push_back({std::move(key), value, std::move(tolerance), std::move(claim), pass});
}

struct Moments {
  double mean = 0;
  double variance = 0;        // unbiased
  double mean_se = 0;
  double variance_se = 0;
};

Moments moments(const std::vector<double>& xs) {
  Moments m;
  const auto n = static_cast<double>(xs.size());
  for (double x : xs) m.mean += x;
  m.mean /= n;
  double m2 = 0, m4 = 0;
  for (double x : xs) {
    const double d = (x - m.mean) * (x - m.mean);
    m2 += d;
    m4 += d * d;
  }
  m2 /= n;
  m4 /= n;
  m.variance = xs.size() > 1 ? m2 * n / (n - 1) : 0.0;
  m.mean_se = std::sqrt(m.variance / n);
  m.variance_se = std::sqrt(std::max(0.0, m4 - m2 * m2) / n);
  return m;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

double phi_at(const GridFunction& phi, double u) { return phi(std::min(u, phi.u_max())); }

// CDF of the k-th largest part at x, read off phi_k(1/x). Below 1/u_max the
// value is clamped to phi_k(u_max).
double cdf_from_phi(const GridFunction& phi, double x) {
  if (x >= 1.0) return 1.0;
  if (x <= 0.0) return phi[phi.size() - 1];
  return phi_at(phi, 1.0 / x);
}

// Largest slope of x -> phi(1/x) between neighbouring grid nodes.
double inverse_lipschitz(const GridFunction& phi) {
  double worst = 0;
  for (std::size_t i = 1; i + 1 < phi.size(); ++i) {
    const double dx = 1.0 / phi.node(i) - 1.0 / phi.node(i + 1);
    worst = std::max(worst, std::abs(phi[i] - phi[i + 1]) / dx);
  }
  return worst;
}

double coarse_gap(const GridFunction& fine, const GridFunction& coarse) {
  double worst = 0;
  for (std::size_t i = 0; i < coarse.size(); ++i) worst = std::max(worst, std::abs(fine[2 * i] - coarse[i]));
  return worst;
}

double exponent_log(const BlockGroupSpec& spec, const SpfTable& table) {
  const auto k = spec.block_size();
  switch (spec.kind()) {
    case BlockGroupSpec::Kind::Full: return log_lcm_upto(k);
    case BlockGroupSpec::Kind::Cyclic: return std::log(static_cast<double>(k));
    case BlockGroupSpec::Kind::Explicit: break;
  }
  std::vector<std::uint64_t> lengths;
  for (const auto& p : spec.support()) {
    const auto ct = p.cycle_type();
    lengths.insert(lengths.end(), ct.lengths().begin(), ct.lengths().end());
  }
  return log_lcm(CycleType(std::move(lengths)), table);
}

}  // namespace

BlockLaw parse_block_law(std::string_view t) {
  if (t == "trivial") return TrivialLaw{};
  if (t == "pd") return PoissonDirichletLaw{};
  const auto colon = t.find(':');
  if (colon != std::string_view::npos && t.substr(0, colon) == "gsg") {
    return GeneralizedSymmetricLaw(static_cast<unsigned>(parse_size(t.substr(colon + 1), "gsg order")));
  }
  return EmpiricalGroupLaw{parse_group_spec(t)};
}

BlockGroupSpec parse_group_spec(std::string_view t) {
  const auto colon = t.find(':');
  if (colon == std::string_view::npos) throw std::invalid_argument("group must look like full:k or cyclic:k");
  const auto kind = t.substr(0, colon);
  const std::size_t k = parse_size(t.substr(colon + 1), "block size");
  if (kind == "full") return BlockGroupSpec::full(k);
  if (kind == "cyclic") return BlockGroupSpec::cyclic(k);
  throw std::invalid_argument("unknown group kind: " + std::string(kind));
}

bool ExperimentReport::pass() const {
  return std::all_of(stats.begin(), stats.end(), [](const Statistic& s) { return s.pass.value_or(true); });
}

const Statistic& ExperimentReport::stat(std::string_view key) const {
  for (const auto& s : stats) {
    if (s.key == key) return s;
  }
  throw std::out_of_range("no statistic named " + std::string(key));
}

nlohmann::json ExperimentReport::to_json(bool include_runtime) const {
  nlohmann::json out;
  out["name"] = config.name;
  out["seed"] = config.seed;
  out["samples"] = config.samples;
  out["params"] = config.params;
  nlohmann::json list = nlohmann::json::array();
  for (const auto& s : stats) {
    nlohmann::json entry;
    entry["key"] = s.key;
    entry["value"] = s.value;
    entry["tolerance"] = s.tolerance;
    entry["paper_ref"] = s.claim;
    entry["pass"] = s.pass ? nlohmann::json(*s.pass) : nlohmann::json(nullptr);
    list.push_back(std::move(entry));
  }
  out["stats"] = std::move(list);
  if (include_runtime) out["runtime_ms"] = runtime_ms;
  return out;
}

std::string ExperimentReport::to_csv() const {
  std::string out = "key,value,tolerance,pass,paper_ref\n";
  for (const auto& s : stats) {
    const std::string tol = s.tolerance.is_null()    ? ""
                            : s.tolerance.is_string() ? s.tolerance.get<std::string>()
                                                      : format_double(s.tolerance.get<double>());
    const std::string pass = s.pass ? (*s.pass ? "true" : "false") : "";
    out += csv_field(s.key) + "," + format_double(s.value) + "," + csv_field(tol) + "," + pass + "," +
           csv_field(s.claim) + "\n";
  }
  return out;
}

double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_distance needs at least one sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  double d = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = std::clamp(cdf(sorted[i]), 0.0, 1.0);
    const auto fi = static_cast<double>(i);
    d = std::max({d, (fi + 1) / n - f, f - fi / n});
  }
  return std::clamp(d, 0.0, 1.0);
}

ExperimentReport run_largest_piece(const ExperimentConfig& cfg) {
  ExperimentReport r = start(cfg);
  const BlockLaw law = parse_block_law(text(cfg, "law"));
  const std::size_t kmax = count(cfg, "kmax");
  const double eps = number(cfg, "eps");
  const double h = number(cfg, "h");
  const double u_max = number(cfg, "u_max");

  const SjOptions sj{1'000'000, cfg.seed, cfg.threads};
  const auto phis = solve_phi_k(law, kmax, u_max, h, sj);
  const auto coarse = solve_phi_k(law, kmax, u_max, 2 * h, sj);

  const auto draws = parallel_map(cfg.samples, cfg.threads, [&](std::size_t i) {
    Rng rng = Rng::for_stream(cfg.seed, "largest-piece", i);
    const Partition a = sample_A(law, eps, rng);
    std::vector<double> out(kmax);
    for (std::size_t k = 0; k < kmax; ++k) out[k] = a.largest(k + 1);
    return out;
  });

  const double sampling = 1.36 / std::sqrt(static_cast<double>(cfg.samples));
  for (std::size_t k = 1; k <= kmax; ++k) {
    const GridFunction& phi = phis[k - 1];
    std::vector<double> xs(draws.size());
    for (std::size_t i = 0; i < draws.size(); ++i) xs[i] = draws[i][k - 1];
    const double ks = ks_distance(xs, [&](double x) { return cdf_from_phi(phi, x); });
    const std::string suffix = "_k" + std::to_string(k);
    const double solver = coarse_gap(phi, coarse[k - 1]);
    const double truncation = 2 * eps * inverse_lipschitz(phi);
    const double range = phi[phi.size() - 1];
    check(r, "ks" + suffix, ks, 0.02,
          "the k-th largest part of A has distribution function phi_k(1/u)", ks <= 0.02);
    info(r, "budget_sampling" + suffix, sampling, "Kolmogorov 95% quantile 1.36/sqrt(N)");
    info(r, "budget_solver" + suffix, solver, "max |phi_h - phi_2h| on the grid");
    info(r, "budget_truncation" + suffix, truncation, "2 eps times the CDF Lipschitz constant");
    info(r, "budget_range" + suffix, range, "phi_k(u_max), CDF mass below 1/u_max");
    info(r, "budget_total" + suffix, sampling + solver + truncation + range);

    std::sort(xs.begin(), xs.end());
    Curve empirical{"empirical k=" + std::to_string(k), {}, {}};
    const std::size_t stride = std::max<std::size_t>(1, xs.size() / 2000);
    for (std::size_t i = 0; i < xs.size(); i += stride) {
      empirical.x.push_back(xs[i]);
      empirical.y.push_back(static_cast<double>(i + 1) / static_cast<double>(xs.size()));
    }
    Curve model{"phi_" + std::to_string(k) + "(1/x)", {}, {}};
    for (int i = 1; i <= 1000; ++i) {
      const double x = i / 1000.0;
      model.x.push_back(x);
      model.y.push_back(cdf_from_phi(phi, x));
    }
    r.curves.push_back(std::move(empirical));
    r.curves.push_back(std::move(model));
  }
  return r;
}

ExperimentReport run_wasserstein(const ExperimentConfig& cfg) {
  ExperimentReport r = start(cfg);
  const std::size_t k = count(cfg, "k");
  const std::size_t n = count(cfg, "n");
  const double eps = number(cfg, "eps");
  const double c = number(cfg, "c");

  const auto pairs = parallel_map(cfg.samples, cfg.threads, [&](std::size_t i) {
    Rng rng = Rng::for_stream(cfg.seed, "wasserstein", i);
    const CoupledPair p = sample_coupled_pair(k, n, eps, rng);
    return std::pair<double, double>{p.linf, p.l1};
  });

  const auto kd = static_cast<double>(k);
  const auto nd = static_cast<double>(n);
  const double linf_bound = 1 / kd + 1 / nd + 2 * eps;
  double linf_max = 0;
  double l1_sum = 0;
  std::size_t violations = 0;
  for (const auto& [linf, l1] : pairs) {
    linf_max = std::max(linf_max, linf);
    l1_sum += l1;
    if (linf > linf_bound) ++violations;
  }
  const double l1_mean = l1_sum / static_cast<double>(pairs.size());
  const double upper = 3 * (std::log(kd) + kEulerGamma) / kd + 3 * (std::log(nd) + kEulerGamma) / nd +
                       c / (kd * kd) + c / (nd * nd);
  const double lower = std::pow(std::log(kd * nd), 2) / (8 * kd * nd);

  check(r, "linf_violations", static_cast<double>(violations), 0,
        "||C - P||_inf <= 1/k + 1/n always (plus 2 eps truncation)", violations == 0);
  info(r, "linf_max", linf_max);
  info(r, "linf_bound", linf_bound);
  check(r, "l1_mean_upper", l1_mean, upper,
        "E||C - P||_1 <= 3(log k + gamma)/k + 3(log n + gamma)/n + O(1/k^2 + 1/n^2)", l1_mean <= upper);
  check(r, "l1_mean_lower", l1_mean, lower, "every coupling has E||C - P||_1 >= log^2(kn)/(8kn)",
        l1_mean >= lower);
  return r;
}

ExperimentReport run_erdos_turan(const ExperimentConfig& cfg) {
  ExperimentReport r = start(cfg);
  const BlockGroupSpec spec = parse_group_spec(text(cfg, "group"));
  const std::size_t n = count(cfg, "n");
  const std::size_t smoke_n = count(cfg, "smoke_n");
  const std::size_t k = spec.block_size();
  const SpfTable table(std::max<std::uint64_t>(2, k * std::max(n, smoke_n)));
  const double exponent = exponent_log(spec, table);

  constexpr double kSlack = 1e-9;
  const auto pairs = parallel_map(cfg.samples, cfg.threads, [&](std::size_t i) {
    Rng rng = Rng::for_stream(cfg.seed, "erdos-turan", i);
    return sample_coupled_lcm(spec, n, rng, table);
  });
  std::size_t violations = 0;
  double gap_max = 0;
  for (const auto& p : pairs) {
    const double gap = p.log_o - p.log_p;
    gap_max = std::max(gap_max, gap);
    if (gap < -kSlack || gap > exponent + kSlack) ++violations;
  }
  check(r, "sandwich_violations", static_cast<double>(violations), 0,
        "log P_n <= log O_n <= log P_n + log(exponent of the block group)", violations == 0);
  info(r, "sandwich_gap_max", gap_max);
  info(r, "sandwich_gap_bound", exponent);

  const double ln = std::log(static_cast<double>(smoke_n));
  const double centre = 0.5 * ln * ln;
  const double scale = std::sqrt(ln * ln * ln / 3);
  const auto z = parallel_map(cfg.samples, cfg.threads, [&](std::size_t i) {
    Rng rng = Rng::for_stream(cfg.seed, "erdos-turan-smoke", i);
    const WreathElement w = sample_wreath(spec, smoke_n, rng);
    return (log_lcm(cycle_type_blockwise(w), table) - centre) / scale;
  });
  const Moments m = moments(z);
  check(r, "normalized_mean", m.mean, "[-0.3, 0.3]",
        "(log O_n - log^2(n)/2) / sqrt(log^3(n)/3) tends to N(0, 1)",
        m.mean >= -0.3 && m.mean <= 0.3);
  check(r, "normalized_variance", m.variance, "[0.5, 1.5]",
        "(log O_n - log^2(n)/2) / sqrt(log^3(n)/3) tends to N(0, 1)",
        m.variance >= 0.5 && m.variance <= 1.5);
  return r;
}

ExperimentReport run_compound_poisson(const ExperimentConfig& cfg) {
  ExperimentReport r = start(cfg);
  const std::size_t imax = count(cfg, "imax");
  const std::size_t k = count(cfg, "k");
  const std::size_t n = count(cfg, "n");

  const auto draws = parallel_map(cfg.samples, cfg.threads, [&](std::size_t s) {
    Rng rng = Rng::for_stream(cfg.seed, "compound-poisson", s);
    return sample_compound_cycle_counts(imax, imax, rng).counts;
  });
  for (std::size_t i = 1; i <= imax; ++i) {
    std::vector<double> xs(draws.size());
    for (std::size_t s = 0; s < draws.size(); ++s) xs[s] = static_cast<double>(draws[s][i - 1]);
    const Moments m = moments(xs);
    const auto id = static_cast<double>(i);
    const double mean = static_cast<double>(divisor_count(i)) / id;
    double harmonic = 0;
    for (std::size_t l = 1; l <= i; ++l) {
      if (i % l == 0) harmonic += 1.0 / static_cast<double>(l);
    }
    const double variance = mean + harmonic / id;
    const std::string idx = std::to_string(i);
    check(r, "mean_A" + idx, m.mean, 3 * m.mean_se, "E[A_i] = d(i)/i",
          std::abs(m.mean - mean) <= 3 * m.mean_se);
    info(r, "mean_A" + idx + "_expected", mean);
    check(r, "var_A" + idx, m.variance, 3 * m.variance_se,
          "Var(A_i) = d(i)/i + (1/i) sum_{l | i} 1/l", std::abs(m.variance - variance) <= 3 * m.variance_se);
    info(r, "var_A" + idx + "_expected", variance);
  }

  const BlockGroupSpec spec = BlockGroupSpec::full(k);
  const auto finite = parallel_map(cfg.samples, cfg.threads, [&](std::size_t s) {
    Rng rng = Rng::for_stream(cfg.seed, "compound-poisson-finite", s);
    return cycle_type_blockwise(sample_wreath(spec, n, rng)).count_of(1);
  });
  std::vector<double> p_finite(4, 0.0), p_limit(4, 0.0);
  const double w = 1.0 / static_cast<double>(cfg.samples);
  for (std::size_t s = 0; s < cfg.samples; ++s) {
    if (finite[s] <= 3) p_finite[finite[s]] += w;
    if (draws[s][0] <= 3) p_limit[draws[s][0]] += w;
  }
  double tv = 0;
  for (std::size_t v = 0; v <= 3; ++v) tv += 0.5 * std::abs(p_finite[v] - p_limit[v]);
  check(r, "tv_a1", tv, 0.05,
        "fixed points of a uniform S_k wreath S_n element converge weakly to A_1 (pilot-calibrated threshold)",
        tv <= 0.05);
  return r;
}

ExperimentReport run_multiplicative_mean(const ExperimentConfig& cfg) {
  ExperimentReport r = start(cfg);
  const double u = number(cfg, "u");
  const double u2 = number(cfg, "u_secondary");
  const double h = number(cfg, "h");
  const double capacity = number(cfg, "capacity");
  const auto& xs_json = require(cfg, "xs");
  if (!xs_json.is_array() || xs_json.empty()) throw std::invalid_argument("parameter 'xs' must be a nonempty array");
  std::vector<double> xs;
  for (const auto& x : xs_json) xs.push_back(x.get<double>());
  const double x_max = *std::max_element(xs.begin(), xs.end());

  const double grid_max = std::ceil(std::max({u, u2, 1.0}));
  const GridFunction rho = solve_dickman(grid_max, h);
  const GridFunction pi = solve_pi(grid_max, h);
  const double largest_n = std::floor(std::pow(x_max, std::max(u, u2)) + 1e-9);
  if (largest_n > capacity) throw std::invalid_argument("x^u exceeds the sieve capacity");
  const SpfTable table(std::max<std::uint64_t>(2, static_cast<std::uint64_t>(largest_n)));

  std::vector<double> errors;
  for (double x : xs) {
    const double e = std::abs(multiplicative_mean(x, u, rho, table, cfg.threads) - pi(u));
    errors.push_back(e);
    info(r, "error_u" + format_double(u) + "_x" + format_double(x), e,
         "|mean of f_x up to x^u - pi(u)| tends to 0");
  }
  bool monotone = true;
  for (std::size_t i = 1; i < errors.size(); ++i) monotone = monotone && errors[i] <= errors[i - 1];
  check(r, "error_trend", monotone ? 1.0 : 0.0, "non-increasing in x",
        "the mean of f_x over n <= x^u tends to pi(u)", monotone);
  check(r, "error_largest_x", errors.back(), 0.1, "the mean of f_x over n <= x^u tends to pi(u)",
        errors.back() <= 0.1);

  const double e1 = std::abs(multiplicative_mean(x_max, 1.0, rho, table, cfg.threads) - pi(1.0));
  check(r, "error_u1", e1, 0, "pi = 1 on [0, 1] and f_x = 1 below x", e1 == 0.0);
  const double e2 = std::abs(multiplicative_mean(x_max, u2, rho, table, cfg.threads) - pi(u2));
  check(r, "error_secondary", e2, 0.1, "the mean of f_x over n <= x^u tends to pi(u)", e2 <= 0.1);
  return r;
}

std::vector<std::string> experiment_names() {
  return {"largest-piece", "wasserstein", "erdos-turan", "compound-poisson", "multiplicative-mean"};
}

ExperimentConfig default_config(std::string_view name) {
  ExperimentConfig cfg;
  cfg.name = std::string(name);
  if (name == "largest-piece") {
    cfg.samples = 100'000;
    cfg.params = {{"law", "pd"}, {"kmax", 1}, {"eps", 1e-6}, {"h", kDefaultStep}, {"u_max", kDefaultUMax}};
  } else if (name == "wasserstein") {
    cfg.samples = 10'000;
    cfg.params = {{"k", 50}, {"n", 50}, {"eps", 1e-6}, {"c", 10}};
  } else if (name == "erdos-turan") {
    cfg.samples = 10'000;
    cfg.params = {{"group", "cyclic:4"}, {"n", 1000}, {"smoke_n", 2000}};
  } else if (name == "compound-poisson") {
    cfg.samples = 100'000;
    cfg.params = {{"imax", 6}, {"k", 200}, {"n", 200}};
  } else if (name == "multiplicative-mean") {
    cfg.samples = 1;
    cfg.params = {{"u", 2.0},
                  {"xs", {100, 1000, 3000}},
                  {"u_secondary", 1.5},
                  {"h", kDefaultStep},
                  {"capacity", 1e7}};
  } else {
    throw std::invalid_argument("unknown experiment: " + std::string(name));
  }
  return cfg;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  const auto begin = std::chrono::steady_clock::now();
  ExperimentReport report;
  if (cfg.name == "largest-piece") {
    report = run_largest_piece(cfg);
  } else if (cfg.name == "wasserstein") {
    report = run_wasserstein(cfg);
  } else if (cfg.name == "erdos-turan") {
    report = run_erdos_turan(cfg);
  } else if (cfg.name == "compound-poisson") {
    report = run_compound_poisson(cfg);
  } else if (cfg.name == "multiplicative-mean") {
    report = run_multiplicative_mean(cfg);
  } else {
    throw std::invalid_argument("unknown experiment: " + cfg.name);
  }
  report.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - begin).count();
  return report;
}

}  // namespace wreathcycle
