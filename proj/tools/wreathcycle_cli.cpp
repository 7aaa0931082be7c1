// Command-line front end: sampling, solving, couplings, experiments and the
// acceptance suite.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "svg_plot.hpp"
#include "wreathcycle/acceptance.hpp"
#include "wreathcycle/arith.hpp"
#include "wreathcycle/couplings.hpp"
#include "wreathcycle/experiments.hpp"
#include "wreathcycle/format.hpp"
#include "wreathcycle/integral_solvers.hpp"
#include "wreathcycle/limit_samplers.hpp"

namespace wc = wreathcycle;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Globals {
  std::uint64_t seed = wc::kDefaultSeed;
  unsigned threads = 1;
  std::string invocation;
};

std::string header(const Globals& g) {
  return "# invocation: " + g.invocation + "\n# seed: " + std::to_string(g.seed) + "\n";
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + path);
}

// "phi.csv" -> "phi_k2.csv"
std::string indexed_path(const std::string& base, std::size_t k) {
  const std::filesystem::path p(base);
  const std::string stem = p.has_extension() ? p.stem().string() : p.filename().string();
  const std::string ext = p.has_extension() ? p.extension().string() : ".csv";
  return (p.parent_path() / (stem + "_k" + std::to_string(k) + ext)).string();
}

wc::BlockLaw make_law(const std::string& name, unsigned m, std::size_t k) {
  if (name == "gsg") return wc::GeneralizedSymmetricLaw(m);
  if (name == "full" || name == "cyclic") return wc::parse_block_law(name + ":" + std::to_string(k));
  return wc::parse_block_law(name);
}

wc::BlockGroupSpec make_group(const std::string& kind, std::size_t k) {
  if (kind.find(':') != std::string::npos) return wc::parse_group_spec(kind);
  return wc::parse_group_spec(kind + ":" + std::to_string(k));
}

struct SampleArgs {
  std::string target;
  std::size_t samples = 10;
  double eps = wc::kDefaultTruncation;
  std::string law = "pd";
  unsigned m = 2;
  std::size_t k = 4;
  std::size_t n = 6;
  std::string group = "full";
  std::size_t imax = 6;
  std::size_t lmax = 0;
  std::string out;
};

int cmd_sample(const SampleArgs& a, const Globals& g) {
  std::string text = header(g);
  const std::string tag = "sample-" + a.target;
  if (a.target == "compound") {
    const std::size_t lmax = a.lmax == 0 ? a.imax : a.lmax;
    const auto rows = wc::parallel_map(a.samples, g.threads, [&](std::size_t i) {
      wc::Rng rng = wc::Rng::for_stream(g.seed, tag, i);
      return wc::sample_compound_cycle_counts(a.imax, lmax, rng).counts;
    });
    for (std::size_t i = 1; i <= a.imax; ++i) text += (i > 1 ? ",A" : "A") + std::to_string(i);
    text += "\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) text += (i > 0 ? "," : "") + std::to_string(row[i]);
      text += "\n";
    }
  } else if (a.target == "wreath") {
    const wc::BlockGroupSpec spec = make_group(a.group, a.k);
    const auto types = wc::parallel_map(a.samples, g.threads, [&](std::size_t i) {
      wc::Rng rng = wc::Rng::for_stream(g.seed, tag, i);
      return wc::cycle_type_blockwise(wc::sample_wreath(spec, a.n, rng));
    });
    for (const auto& ct : types) {
      bool first = true;
      for (auto len : ct.lengths()) {
        text += (first ? "" : " ") + std::to_string(len);
        first = false;
      }
      text += "\n";
    }
  } else {
    const wc::BlockLaw law = make_law(a.law, a.m, a.k);
    const auto parts = wc::parallel_map(a.samples, g.threads, [&](std::size_t i) {
      wc::Rng rng = wc::Rng::for_stream(g.seed, tag, i);
      if (a.target == "stick") return wc::sample_stick_breaking(a.eps, rng);
      if (a.target == "square") return wc::sample_square_cutting(a.eps, rng);
      if (a.target == "A") return wc::sample_A(law, a.eps, rng);
      return wc::sample_block_law(law, rng, a.eps);
    });
    text += "sample,rank,part,tail_mass\n";
    for (std::size_t s = 0; s < parts.size(); ++s) {
      const std::string tail = wc::format_double(parts[s].tail_mass());
      for (std::size_t r = 0; r < parts[s].size(); ++r) {
        text += std::to_string(s) + "," + std::to_string(r + 1) + "," +
                wc::format_double(parts[s].parts()[r]) + "," + tail + "\n";
      }
    }
  }
  write_output(a.out, text);
  return kExitPass;
}

struct SolveArgs {
  std::string target;
  double u_max = wc::kDefaultUMax;
  double h = wc::kDefaultStep;
  std::string law = "trivial";
  unsigned m = 2;
  std::size_t k = 4;
  std::size_t kmax = 3;
  std::vector<double> u{1.5, 2.0, 2.5, 3.0};
  std::string psi = "indicator";
  double s_max = 10;
  double h_s = 1.0 / 64;
  std::size_t mc_samples = 1'000'000;
  std::string out;
};

int cmd_solve(const SolveArgs& a, const Globals& g) {
  const std::string head = "invocation: " + g.invocation + "\nseed: " + std::to_string(g.seed);
  auto emit_family = [&](const std::vector<wc::GridFunction>& fs, const std::string& base) {
    for (std::size_t k = 1; k <= fs.size(); ++k) {
      const std::string path = indexed_path(base, k);
      write_output(path, wc::to_csv(fs[k - 1], head + "\nk: " + std::to_string(k)));
      std::cout << path << "\n";
    }
  };
  if (a.target == "dickman") {
    write_output(a.out, wc::to_csv(wc::solve_dickman(a.u_max, a.h), head));
  } else if (a.target == "pi") {
    write_output(a.out, wc::to_csv(wc::solve_pi(a.u_max, a.h), head));
  } else if (a.target == "phik") {
    const wc::SjOptions opts{a.mc_samples, g.seed, g.threads};
    emit_family(wc::solve_phi_k(make_law(a.law, a.m, a.k), a.kmax, a.u_max, a.h, opts),
                a.out.empty() ? "phik.csv" : a.out);
  } else if (a.target == "gsg") {
    emit_family(wc::solve_gsg_psi_k(a.m, a.kmax, a.u_max, a.h), a.out.empty() ? "gsg.csv" : a.out);
  } else if (a.target == "series") {
    std::string text = header(g) + "u,series,solver\n";
    const double u_max = std::max(a.u_max, 4.0);
    if (a.psi == "indicator") {
      const auto psi = wc::StepFunction::unit_indicator();
      const auto solved = wc::solve_convolution(psi, u_max, a.h);
      for (double u : a.u) {
        text += wc::format_double(u) + "," + wc::format_double(wc::series_phi1(psi, u, a.h)) + "," +
                wc::format_double(solved(u)) + "\n";
      }
    } else if (a.psi == "rho") {
      const auto psi = wc::solve_dickman(u_max, a.h);
      const auto solved = wc::solve_convolution(psi, u_max, a.h);
      for (double u : a.u) {
        text += wc::format_double(u) + "," + wc::format_double(wc::series_phi1(psi, u)) + "," +
                wc::format_double(solved(u)) + "\n";
      }
    } else {
      throw std::invalid_argument("--psi must be indicator or rho");
    }
    write_output(a.out, text);
  } else if (a.target == "laplace") {
    wc::GridFunction transform = [&] {
      if (a.psi == "indicator") return wc::laplace_from_psi(wc::StepFunction::unit_indicator(), a.s_max, a.h_s);
      if (a.psi != "rho") throw std::invalid_argument("--psi must be indicator or rho");
      const auto rho = wc::solve_dickman(a.u_max, a.h);
      double mass = 0;
      for (std::size_t i = 0; i + 1 < rho.size(); ++i) mass += 0.5 * a.h * (rho[i] + rho[i + 1]);
      std::vector<double> density(rho.values().begin(), rho.values().end());
      for (double& v : density) v /= mass;
      return wc::laplace_from_psi(wc::GridFunction(a.u_max, a.h, std::move(density)), a.s_max, a.h_s);
    }();
    write_output(a.out, wc::to_csv(transform, head));
  }
  return kExitPass;
}

struct CoupleArgs {
  std::string target;
  std::size_t k = 50;
  std::size_t n = 50;
  double eps = wc::kDefaultTruncation;
  std::string group = "full";
  std::size_t samples = 10;
  std::string out;
};

int cmd_couple(const CoupleArgs& a, const Globals& g) {
  std::string text = header(g);
  const std::string tag = "couple-" + a.target;
  if (a.target == "lcm") {
    const wc::BlockGroupSpec spec = make_group(a.group, a.k);
    const wc::SpfTable table(std::max<std::uint64_t>(2, spec.block_size() * a.n));
    const auto rows = wc::parallel_map(a.samples, g.threads, [&](std::size_t i) {
      wc::Rng rng = wc::Rng::for_stream(g.seed, tag, i);
      return wc::sample_coupled_lcm(spec, a.n, rng, table);
    });
    text += "sample,log_o,log_p\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      text += std::to_string(i) + "," + wc::format_double(rows[i].log_o) + "," +
              wc::format_double(rows[i].log_p) + "\n";
    }
  } else {
    const auto rows = wc::parallel_map(a.samples, g.threads, [&](std::size_t i) {
      wc::Rng rng = wc::Rng::for_stream(g.seed, tag, i);
      if (a.target == "rounding") {
        const auto arrivals = wc::sample_log_poisson(wc::default_cutoff(a.eps, a.n), rng);
        const auto [discrete, continuous] = wc::round_coupling(arrivals, a.n);
        return std::pair<double, double>{wc::partition_distance(discrete, continuous, wc::Norm::LInf),
                                         wc::partition_distance(discrete, continuous, wc::Norm::L1)};
      }
      const wc::CoupledPair p = a.target == "pair"
                                    ? wc::sample_coupled_pair(a.k, a.n, a.eps, rng)
                                    : wc::sample_coupled_pair(make_group(a.group, a.k), a.n, a.eps, rng);
      return std::pair<double, double>{p.linf, p.l1};
    });
    text += "sample,linf,l1\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      text += std::to_string(i) + "," + wc::format_double(rows[i].first) + "," +
              wc::format_double(rows[i].second) + "\n";
    }
  }
  write_output(a.out, text);
  return kExitPass;
}

struct ExperimentArgs {
  std::string name;
  std::size_t samples = 0;
  std::string out;
  std::string plot;
  bool timing = false;
};

int cmd_experiment(const ExperimentArgs& a, wc::ExperimentConfig cfg, const Globals& g) {
  cfg.seed = g.seed;
  cfg.threads = g.threads;
  if (a.samples > 0) cfg.samples = a.samples;
  const wc::ExperimentReport report = wc::run_experiment(cfg);

  const bool csv = std::filesystem::path(a.out).extension() == ".csv";
  if (csv) {
    write_output(a.out, header(g) + report.to_csv());
  } else {
    nlohmann::json j = report.to_json(a.timing);
    j["invocation"] = g.invocation;
    write_output(a.out, j.dump(2) + "\n");
  }
  if (!a.plot.empty()) {
    if (report.curves.empty()) throw std::invalid_argument("experiment " + cfg.name + " has nothing to plot");
    const wc::cli::PlotLabels labels{"Largest-part CDF: empirical vs solved", "x", "P(part <= x)",
                                 "invocation: " + g.invocation + " seed: " + std::to_string(g.seed)};
    write_output(a.plot, wc::cli::render_svg(report.curves, labels));
  }
  return report.pass() ? kExitPass : kExitFail;
}

std::uint64_t seed_from_environment() {
  const char* env = std::getenv("WREATHCYCLE_SEED");
  if (env == nullptr || *env == '\0') return wc::kDefaultSeed;
  std::size_t used = 0;
  const std::string text(env);
  const unsigned long long value = std::stoull(text, &used);
  if (used != text.size()) throw std::invalid_argument("WREATHCYCLE_SEED must be an unsigned integer");
  return value;
}

}  // namespace

int main(int argc, char** argv) {
  Globals g;
  g.invocation = "wreathcycle";
  for (int i = 1; i < argc; ++i) g.invocation += std::string(" ") + argv[i];
  try {
    g.seed = seed_from_environment();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  g.threads = wc::default_threads();

  CLI::App app{"Cycle structure of random wreath-product permutations: samplers, couplings, solvers"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", g.seed, "Master seed (default: WREATHCYCLE_SEED or " +
                                       std::to_string(wc::kDefaultSeed) + ")");
  app.add_option("--threads", g.threads, "Worker cap; results do not depend on it")
      ->check(CLI::PositiveNumber);

  SampleArgs sa;
  auto* sample = app.add_subcommand("sample", "Draw random partitions, cycle types or cycle counts");
  sample->add_option("target", sa.target, "stick | square | A | block-law | compound | wreath")
      ->required()
      ->check(CLI::IsMember({"stick", "square", "A", "block-law", "compound", "wreath"}));
  sample->add_option("--samples", sa.samples)->check(CLI::PositiveNumber);
  sample->add_option("--eps", sa.eps, "Truncation mass");
  sample->add_option("--law", sa.law, "trivial | pd | gsg | full | cyclic | gsg:m | full:k | cyclic:k");
  sample->add_option("--m", sa.m, "Order for --law gsg")->check(CLI::PositiveNumber);
  sample->add_option("--k", sa.k, "Block size")->check(CLI::PositiveNumber);
  sample->add_option("--n", sa.n, "Number of blocks")->check(CLI::PositiveNumber);
  sample->add_option("--group", sa.group, "full | cyclic (block group of a wreath sample)");
  sample->add_option("--imax", sa.imax, "Largest cycle length counted")->check(CLI::PositiveNumber);
  sample->add_option("--lmax", sa.lmax, "Largest outer length (defaults to imax)");
  sample->add_option("--out", sa.out, "Output file (stdout when omitted)");

  SolveArgs so;
  auto* solve = app.add_subcommand("solve", "Solve the integral equations on a grid");
  solve->set_help_flag("--help", "Print this help message and exit");
  solve->add_option("target", so.target, "dickman | pi | phik | gsg | series | laplace")
      ->required()
      ->check(CLI::IsMember({"dickman", "pi", "phik", "gsg", "series", "laplace"}));
  solve->add_option("--umax", so.u_max);
  solve->add_option("--h", so.h, "Grid step (1/h integer, at most 1/256)");
  solve->add_option("--law", so.law, "Block law for phik");
  solve->add_option("--m", so.m)->check(CLI::PositiveNumber);
  solve->add_option("--k", so.k, "Block size for --law full/cyclic")->check(CLI::PositiveNumber);
  solve->add_option("--kmax", so.kmax)->check(CLI::PositiveNumber);
  solve->add_option("--u", so.u, "Evaluation points for series");
  solve->add_option("--psi", so.psi, "indicator | rho (series, laplace)");
  solve->add_option("--smax", so.s_max);
  solve->add_option("--hs", so.h_s, "Step of the Laplace grid");
  solve->add_option("--mc-samples", so.mc_samples, "Draws for laws that cannot be enumerated");
  solve->add_option("--out", so.out, "Output file, or base name for phik/gsg");

  CoupleArgs ca;
  auto* couple = app.add_subcommand("couple", "Sample couplings and their distances");
  couple->add_option("target", ca.target, "rounding | pair | group | lcm")
      ->required()
      ->check(CLI::IsMember({"rounding", "pair", "group", "lcm"}));
  couple->add_option("--k", ca.k)->check(CLI::PositiveNumber);
  couple->add_option("--n", ca.n)->check(CLI::PositiveNumber);
  couple->add_option("--eps", ca.eps);
  couple->add_option("--group", ca.group, "full | cyclic | full:k | cyclic:k");
  couple->add_option("--samples", ca.samples)->check(CLI::PositiveNumber);
  couple->add_option("--out", ca.out);

  ExperimentArgs ea;
  std::string law, group;
  double eps = 0, h = 0, u_max = 0, c = 0, u = 0, u2 = 0, capacity = 0;
  std::size_t kmax = 0, k = 0, n = 0, smoke_n = 0, imax = 0;
  std::vector<double> xs;
  auto* experiment = app.add_subcommand("experiment", "Run one experiment and write its report");
  experiment->set_help_flag("--help", "Print this help message and exit");
  experiment->add_option("name", ea.name)
      ->required()
      ->check(CLI::IsMember(wc::experiment_names()));
  experiment->add_option("--samples", ea.samples)->check(CLI::PositiveNumber);
  auto* o_law = experiment->add_option("--law", law);
  auto* o_kmax = experiment->add_option("--kmax", kmax);
  auto* o_eps = experiment->add_option("--eps", eps);
  auto* o_h = experiment->add_option("--h", h);
  auto* o_umax = experiment->add_option("--umax", u_max);
  auto* o_k = experiment->add_option("--k", k);
  auto* o_n = experiment->add_option("--n", n);
  auto* o_c = experiment->add_option("--c", c);
  auto* o_group = experiment->add_option("--group", group);
  auto* o_smoke = experiment->add_option("--smoke-n", smoke_n);
  auto* o_imax = experiment->add_option("--imax", imax);
  auto* o_u = experiment->add_option("--u", u);
  auto* o_u2 = experiment->add_option("--u-secondary", u2);
  auto* o_xs = experiment->add_option("--xs", xs);
  auto* o_cap = experiment->add_option("--capacity", capacity);
  experiment->add_option("--out", ea.out, "Report file: .csv for the statistics table, JSON otherwise");
  experiment->add_option("--plot", ea.plot, "SVG of the empirical and solved CDFs");
  experiment->add_flag("--timing", ea.timing, "Include runtime_ms in the JSON report");

  bool quick = false;
  auto* verify = app.add_subcommand("verify", "Run the acceptance suite and print a pass/fail table");
  verify->add_flag("--quick", quick, "Reduced sample counts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }
  try {
    if (*sample) return cmd_sample(sa, g);
    if (*solve) return cmd_solve(so, g);
    if (*couple) return cmd_couple(ca, g);
    if (*experiment) {
      wc::ExperimentConfig cfg = wc::default_config(ea.name);
      auto set = [&](CLI::Option* opt, const char* key, const nlohmann::json& value) {
        if (opt->count() == 0) return;
        if (!cfg.params.contains(key)) {
          throw std::invalid_argument(std::string("experiment ") + ea.name + " has no parameter " + key);
        }
        cfg.params[key] = value;
      };
      set(o_law, "law", law);
      set(o_kmax, "kmax", kmax);
      set(o_eps, "eps", eps);
      set(o_h, "h", h);
      set(o_umax, "u_max", u_max);
      set(o_k, "k", k);
      set(o_n, "n", n);
      set(o_c, "c", c);
      set(o_group, "group", group);
      set(o_smoke, "smoke_n", smoke_n);
      set(o_imax, "imax", imax);
      set(o_u, "u", u);
      set(o_u2, "u_secondary", u2);
      set(o_xs, "xs", xs);
      set(o_cap, "capacity", capacity);
      return cmd_experiment(ea, cfg, g);
    }
    if (*verify) {
      const auto results = wc::run_acceptance_suite({quick, g.seed, g.threads});
      std::cout << wc::format_table(results);
      const bool all = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.pass; });
      return all ? kExitPass : kExitFail;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
