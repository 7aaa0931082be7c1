#include "wreathcycle/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <string_view>

#include "wreathcycle/experiments.hpp"
#include "wreathcycle/format.hpp"
#include "wreathcycle/integral_solvers.hpp"

namespace wreathcycle {
namespace {

constexpr double kStep = 1.0 / 4096;

std::string num(double x) { return format_double(x); }

double max_gap(const GridFunction& a, const GridFunction& b) {
  double worst = 0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

std::size_t scaled(std::size_t full, bool quick) { return quick ? std::max<std::size_t>(1, full / 10) : full; }

class Runner {
 public:
  Runner(const SuiteOptions& options, std::string* transcript)
      : options_(options), transcript_(transcript) {}

  ExperimentReport run(ExperimentConfig cfg) {
    cfg.seed = options_.seed;
    cfg.threads = options_.threads;
    ExperimentReport report = run_experiment(cfg);
    if (transcript_ != nullptr) *transcript_ += report.to_json().dump() + "\n";
    return report;
  }

  bool quick() const { return options_.quick; }

 private:
  SuiteOptions options_;
  std::string* transcript_;
};

CriterionResult solver_accuracy() {
  const GridFunction rho = solve_dickman(2, kStep);
  const GridFunction pi = solve_pi(2, kStep);
  const double l2 = std::log(2.0);
  const double l15 = std::log(1.5);
  const double e_rho = std::abs(rho(2) - (1 - l2));
  const double e_pi15 = std::abs(pi(1.5) - (1 - 0.5 * l15 * l15));
  const double e_pi2 = std::abs(pi(2) - (1 - 0.5 * l2 * l2));
  const bool pass = e_rho <= 1e-6 && e_pi15 <= 1e-6 && e_pi2 <= 1e-6;
  return {"1", "solver accuracy (rho, pi vs closed forms, tol 1e-6)", pass,
          "err rho(2)=" + num(e_rho) + " pi(1.5)=" + num(e_pi15) + " pi(2)=" + num(e_pi2)};
}

CriterionResult linf_bound(Runner& runner) {
  ExperimentConfig cfg = default_config("wasserstein");
  cfg.samples = scaled(10'000, runner.quick());
  const auto r = runner.run(cfg);
  const auto& v = r.stat("linf_violations");
  return {"2", "sure L-inf coupling bound at k=n=50 (0 violations)", *v.pass,
          "violations=" + num(v.value) + " max=" + num(r.stat("linf_max").value) +
              " bound=" + num(r.stat("linf_bound").value)};
}

CriterionResult l1_envelope(Runner& runner) {
  bool pass = true;
  std::string detail;
  for (int kn : {20, 50, 100}) {
    ExperimentConfig cfg = default_config("wasserstein");
    cfg.samples = scaled(10'000, runner.quick());
    cfg.params["k"] = kn;
    cfg.params["n"] = kn;
    const auto r = runner.run(cfg);
    const auto& up = r.stat("l1_mean_upper");
    const auto& lo = r.stat("l1_mean_lower");
    pass = pass && *up.pass && *lo.pass;
    detail += (detail.empty() ? "" : "; ") + std::string("k=n=") + std::to_string(kn) + ": " +
              num(lo.tolerance.get<double>()) + " <= " + num(up.value) + " <= " +
              num(up.tolerance.get<double>());
  }
  return {"3", "L1 envelope of the coupled mean at k=n in {20,50,100}", pass, detail};
}

CriterionResult largest_piece(Runner& runner) {
  ExperimentConfig cfg = default_config("largest-piece");
  cfg.samples = scaled(100'000, runner.quick());
  const auto r = runner.run(cfg);
  const auto& ks = r.stat("ks_k1");
  return {"4", "largest square-cutting part vs pi(1/u) (KS <= 0.02)", *ks.pass,
          "ks=" + num(ks.value) + " budget=" + num(r.stat("budget_total_k1").value)};
}

CriterionResult cross_validation() {
  constexpr double kUMax = 10;
  constexpr double kTol = 1e-8;
  const auto trivial = solve_phi_k(TrivialLaw{}, 3, kUMax, kStep);
  const double dickman_gap = max_gap(trivial[0], solve_dickman(kUMax, kStep));
  bool pass = dickman_gap <= kTol;
  double gsg_gap = 0;
  double order_violation = 0;
  auto track_order = [&](const std::vector<GridFunction>& phis) {
    for (std::size_t k = 1; k < phis.size(); ++k) {
      for (std::size_t i = 0; i < phis[k].size(); ++i) {
        order_violation = std::max(order_violation, phis[k - 1][i] - phis[k][i]);
      }
    }
  };
  track_order(trivial);
  for (unsigned m : {2u, 3u, 4u}) {
    const auto a = solve_phi_k(GeneralizedSymmetricLaw(m), 3, kUMax, kStep);
    const auto b = solve_gsg_psi_k(m, 3, kUMax, kStep);
    for (std::size_t k = 0; k < 3; ++k) gsg_gap = std::max(gsg_gap, max_gap(a[k], b[k]));
    track_order(a);
  }
  pass = pass && gsg_gap <= kTol && order_violation <= 1e-12;
  return {"5", "phi_k cross-validation (Dickman, gsg routes, ordering)", pass,
          "dickman gap=" + num(dickman_gap) + " gsg gap=" + num(gsg_gap) +
              " max(phi_k - phi_{k+1})=" + num(order_violation)};
}

CriterionResult series_and_decay() {
  constexpr double kUMax = 10;
  const StepFunction indicator = StepFunction::unit_indicator();
  const GridFunction rho = solve_dickman(kUMax, kStep);
  const GridFunction by_indicator = solve_convolution(indicator, kUMax, kStep);
  const GridFunction by_rho = solve_convolution(rho, kUMax, kStep);
  double series_gap = 0;
  for (double u : {1.5, 2.0, 2.5, 3.0}) {
    series_gap = std::max(series_gap, std::abs(series_phi1(indicator, u, kStep) - by_indicator(u)));
    series_gap = std::max(series_gap, std::abs(series_phi1(rho, u) - by_rho(u)));
  }
  std::size_t decay_violations = 0;
  for (unsigned m : {2u, 3u}) {
    const auto psi = solve_gsg_psi_k(m, 1, kUMax, kStep).front();
    for (std::size_t i = 0; i < psi.size(); ++i) {
      const double u = psi.node(i);
      if (u > m && psi[i] > decay_bound_gsg(m, u)) ++decay_violations;
    }
  }
  const bool pass = series_gap <= 1e-4 && decay_violations == 0;
  return {"6", "inclusion-exclusion series (tol 1e-4) and psi_1 decay bound", pass,
          "series gap=" + num(series_gap) + " decay violations=" + std::to_string(decay_violations)};
}

std::vector<CriterionResult> erdos_turan(Runner& runner) {
  bool sandwich = true;
  std::string detail;
  std::string smoke_detail;
  bool smoke = true;
  for (const char* group : {"cyclic:3", "cyclic:4", "full:3", "full:4"}) {
    ExperimentConfig cfg = default_config("erdos-turan");
    cfg.samples = scaled(10'000, runner.quick());
    cfg.params["group"] = group;
    const auto r = runner.run(cfg);
    const auto& v = r.stat("sandwich_violations");
    sandwich = sandwich && *v.pass;
    detail += (detail.empty() ? "" : " ") + std::string(group) + "=" + num(v.value);
    const auto& m = r.stat("normalized_mean");
    smoke = smoke && *m.pass;
    smoke_detail += (smoke_detail.empty() ? "" : "; ") + std::string(group) + " mean=" + num(m.value) +
                    " var=" + num(r.stat("normalized_variance").value);
  }
  return {{"7a", "log-order sandwich at n=1000 (0 violations)", sandwich, "violations " + detail},
          {"7b", "normalized log-order mean in [-0.3, 0.3] at n=2000", smoke, smoke_detail}};
}

CriterionResult compound_poisson(Runner& runner) {
  ExperimentConfig cfg = default_config("compound-poisson");
  cfg.samples = scaled(100'000, runner.quick());
  const auto r = runner.run(cfg);
  std::string failing;
  for (const auto& s : r.stats) {
    if (s.pass && !*s.pass) failing += " " + s.key;
  }
  return {"8", "compound-Poisson moments (3 SE) and finite a_1 (TV <= 0.05)", r.pass(),
          "tv_a1=" + num(r.stat("tv_a1").value) + (failing.empty() ? "" : " failing:" + failing)};
}

CriterionResult multiplicative_mean(Runner& runner) {
  ExperimentConfig cfg = default_config("multiplicative-mean");
  if (runner.quick()) cfg.params["xs"] = {100, 300, 1000};
  const auto r = runner.run(cfg);
  std::string detail;
  for (const auto& s : r.stats) {
    if (s.key.rfind("error_u2_", 0) == 0) detail += s.key.substr(9) + "=" + num(s.value) + " ";
  }
  return {"9", "multiplicative mean vs pi(2): non-increasing error, <= 0.1", r.pass(),
          detail + "trend=" + num(r.stat("error_trend").value)};
}

std::vector<CriterionResult> run_criteria(const SuiteOptions& options, std::string* transcript) {
  Runner runner(options, transcript);
  std::vector<CriterionResult> out;
  out.push_back(solver_accuracy());
  out.push_back(linf_bound(runner));
  out.push_back(l1_envelope(runner));
  out.push_back(largest_piece(runner));
  out.push_back(cross_validation());
  out.push_back(series_and_decay());
  for (auto& c : erdos_turan(runner)) out.push_back(std::move(c));
  out.push_back(compound_poisson(runner));
  out.push_back(multiplicative_mean(runner));
  return out;
}

}  // namespace

std::vector<CriterionResult> run_acceptance_suite(const SuiteOptions& options) {
  auto out = run_criteria(options, nullptr);

  std::string first;
  std::string second;
  SuiteOptions quick = options;
  quick.quick = true;
  quick.threads = 1;
  const std::string table_one = format_table(run_criteria(quick, &first));
  quick.threads = 3;
  const std::string table_three = format_table(run_criteria(quick, &second));
  const bool same = table_one == table_three && first == second;
  out.push_back({"10", "quick suite byte-identical with 1 and 3 workers", same,
                 "report bytes=" + std::to_string(first.size()) + (same ? " identical" : " differ")});
  return out;
}

std::string format_table(const std::vector<CriterionResult>& results) {
  std::string out;
  for (const auto& r : results) {
    out += std::string(r.pass ? "PASS" : "FAIL") + "  " + r.id + "  " + r.label + "  [" + r.detail + "]\n";
  }
  return out;
}

}  // namespace wreathcycle
