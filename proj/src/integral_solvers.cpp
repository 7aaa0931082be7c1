#include "wreathcycle/integral_solvers.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "wreathcycle/arith.hpp"
#include "wreathcycle/rng.hpp"

namespace wreathcycle {
namespace {

struct Grid {
  double u_max;
  double h;
  std::size_t last;      // index of u_max
  std::size_t per_unit;  // 1/h
};

Grid make_grid(double u_max, double h) {
  if (!(h > 0) || h > 1.0 / 256 + 1e-15) throw std::invalid_argument("grid step must be at most 1/256");
  if (!(u_max >= 1)) throw std::invalid_argument("u_max must be at least 1");
  const double per_unit = 1.0 / h;
  if (std::abs(per_unit - std::round(per_unit)) > 1e-9) {
    throw std::invalid_argument("1/h must be an integer");
  }
  const std::size_t count = GridFunction::node_count(u_max, h);
  return {u_max, h, count - 1, static_cast<std::size_t>(std::round(per_unit))};
}

// Running trapezoid integral J(t) = int_0^t f of a function whose node values
// are appended one at a time.
class Cumulative {
 public:
  explicit Cumulative(double h) : h_(h) {}

  void push(double value) {
    if (values_.empty()) {
      integral_.push_back(0.0);
    } else {
      integral_.push_back(integral_.back() + 0.5 * h_ * (values_.back() + value));
    }
    values_.push_back(value);
  }

  std::size_t size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  double node_integral(std::size_t i) const { return integral_[i]; }

  /// J(t) for 0 <= t <= last node, linear interpolation inside a cell.
  double at(double t) const {
    if (t <= 0) return 0.0;
    const double pos = t / h_;
    const double nearest = std::round(pos);
    if (std::abs(pos - nearest) < 1e-9) {
      return integral_[std::min(static_cast<std::size_t>(nearest), integral_.size() - 1)];
    }
    const auto i = static_cast<std::size_t>(pos);
    if (i + 1 >= values_.size()) throw std::logic_error("cumulative integral queried past its end");
    const double frac = pos - static_cast<double>(i);
    const double mid = values_[i] + frac * (values_[i + 1] - values_[i]);
    return integral_[i] + 0.5 * frac * h_ * (values_[i] + mid);
  }

 private:
  double h_;
  std::vector<double> values_;
  std::vector<double> integral_;
};

bool is_zero(const StepFunction& s) {
  return std::all_of(s.levels().begin(), s.levels().end(), [](double v) { return v == 0.0; });
}

// A kernel prepared for repeated convolution on one grid.
struct PreparedKernel {
  const StepFunction* step = nullptr;
  std::vector<double> reversed;  // reversed[q] = S(t_{last - q}) for sampled kernels
  double at_zero = 0;
  bool zero = false;
};

PreparedKernel prepare(const Kernel& kernel, const Grid& g) {
  PreparedKernel p;
  if (const auto* s = std::get_if<StepFunction>(&kernel)) {
    p.step = s;
    p.at_zero = s->levels().front();
    p.zero = is_zero(*s);
    return p;
  }
  const auto& f = std::get<GridFunction>(kernel);
  if (f.step() != g.h || f.size() < g.last + 1) {
    throw std::invalid_argument("sampled kernel must share the solver grid and cover u_max");
  }
  p.reversed.resize(g.last + 1);
  for (std::size_t q = 0; q <= g.last; ++q) p.reversed[q] = f[g.last - q];
  p.at_zero = f[0];
  p.zero = std::all_of(p.reversed.begin(), p.reversed.end(), [](double v) { return v == 0.0; });
  return p;
}

double dot(const double* a, const double* b, std::size_t count) {
  double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    s0 += a[i] * b[i];
    s1 += a[i + 1] * b[i + 1];
    s2 += a[i + 2] * b[i + 2];
    s3 += a[i + 3] * b[i + 3];
  }
  for (; i < count; ++i) s0 += a[i] * b[i];
  return (s0 + s1) + (s2 + s3);
}

// (S * phi)(t_n) where phi's node values are known for indices < n, and also
// at n unless `implicit`. With `implicit`, the phi(t_n) term is left out and
// its coefficient is returned through `coeff`.
double convolve(const PreparedKernel& k, const Cumulative& phi, std::size_t n, const Grid& g,
                bool implicit, double& coeff) {
  coeff = 0;
  if (k.zero || n == 0) return 0.0;
  const double u = static_cast<double>(n) * g.h;
  const auto& v = phi.values();
  if (k.step == nullptr) {
    // h [phi_0 S_n / 2 + sum_{0<i<n} phi_i S_{n-i} + phi_n S_0 / 2]
    const double* srev = k.reversed.data() + (g.last - n);
    double sum = 0.5 * v[0] * srev[0] + dot(v.data() + 1, srev + 1, n - 1);
    if (implicit) {
      coeff = 0.5 * g.h * k.at_zero;
    } else {
      sum += 0.5 * v[n] * k.at_zero;
    }
    return g.h * sum;
  }
  const auto breaks = k.step->breaks();
  const auto levels = k.step->levels();
  double total = 0;
  double upper_break = 0;  // piece p covers x in (b_p, b_{p+1}], b_0 = 0
  for (std::size_t p = 0; p < levels.size(); ++p) {
    const double lower_x = upper_break;
    const bool last_piece = p == breaks.size();
    upper_break = last_piece ? 0.0 : breaks[p];
    if (u - lower_x <= 0) break;
    if (levels[p] == 0.0) continue;
    const double t_low = last_piece ? 0.0 : std::max(0.0, u - upper_break);
    double t_high_integral;
    if (p == 0) {
      // t_high = u
      if (implicit) {
        t_high_integral = phi.node_integral(n - 1) + 0.5 * g.h * v[n - 1];
        coeff += 0.5 * g.h * levels[p];
      } else {
        t_high_integral = phi.node_integral(n);
      }
    } else {
      t_high_integral = phi.at(u - lower_x);
    }
    total += levels[p] * (t_high_integral - phi.at(t_low));
  }
  return total;
}

// Solves u phi_k(u) = sum_{j<k} (S_j * phi_{k-j})(u) for k = 1..kernels.size().
std::vector<GridFunction> solve_family(const std::vector<Kernel>& kernels, const Grid& g) {
  std::vector<PreparedKernel> prepared;
  prepared.reserve(kernels.size());
  for (const auto& k : kernels) prepared.push_back(prepare(k, g));
  if (std::abs(prepared.front().at_zero - 1.0) > 1e-12) {
    throw std::invalid_argument("leading kernel must equal 1 near zero");
  }

  std::vector<Cumulative> phis;
  std::vector<GridFunction> out;
  for (std::size_t k = 1; k <= kernels.size(); ++k) {
    Cumulative phi(g.h);
    for (std::size_t n = 0; n <= std::min(g.per_unit, g.last); ++n) phi.push(1.0);
    for (std::size_t n = g.per_unit + 1; n <= g.last; ++n) {
      double rhs = 0;
      double unused = 0;
      for (std::size_t j = 1; j < k; ++j) {
        rhs += convolve(prepared[j], phis[k - j - 1], n, g, false, unused);
      }
      double coeff = 0;
      rhs += convolve(prepared[0], phi, n, g, true, coeff);
      const double u = static_cast<double>(n) * g.h;
      phi.push(rhs / (u - coeff));
    }
    out.emplace_back(g.u_max, g.h, phi.values());
    phis.push_back(std::move(phi));
  }
  return out;
}

StepFunction step_from_intervals(std::map<double, double> deltas, double base) {
  std::vector<double> breaks;
  std::vector<double> levels{base};
  double level = base;
  for (auto [x, d] : deltas) {
    level += d;
    if (std::abs(level) < 1e-15) level = 0.0;
    breaks.push_back(x);
    levels.push_back(level);
  }
  return StepFunction(std::move(breaks), std::move(levels));
}

StepFunction sj_from_atoms(const std::vector<BlockAtom>& atoms, std::size_t j) {
  std::map<double, double> deltas;
  double base = 0;
  for (const auto& atom : atoms) {
    const auto total = static_cast<double>(atom.total);
    const std::size_t parts = atom.lengths.size();
    // Interval (1/B_j, 1/B_{j+1}]: B_0 = inf, B_r = 0 for r > parts.
    if (j > parts) continue;
    const double lo = j == 0 ? 0.0 : total / static_cast<double>(atom.lengths[j - 1]);
    const bool bounded = j + 1 <= parts;
    const double hi = bounded ? total / static_cast<double>(atom.lengths[j]) : 0.0;
    if (bounded && !(hi > lo)) continue;
    if (lo == 0.0) {
      base += atom.probability;
    } else {
      deltas[lo] += atom.probability;
    }
    if (bounded) deltas[hi] -= atom.probability;
  }
  return step_from_intervals(std::move(deltas), base);
}

std::vector<BlockAtom> monte_carlo_atoms(const EmpiricalGroupLaw& law, const SjOptions& options) {
  const auto draws = parallel_map(options.mc_samples, options.threads, [&](std::size_t i) {
    Rng rng = Rng::for_stream(options.seed, "sj-monte-carlo", i);
    const auto ct = law.group.sample(rng).cycle_type();
    return std::vector<std::uint64_t>(ct.lengths().begin(), ct.lengths().end());
  });
  std::map<std::vector<std::uint64_t>, double> types;
  const double w = 1.0 / static_cast<double>(options.mc_samples);
  for (const auto& d : draws) types[d] += w;
  std::vector<BlockAtom> atoms;
  for (auto& [lengths, prob] : types) atoms.push_back({prob, lengths, law.group.block_size()});
  return atoms;
}

std::vector<Kernel> finite_law_kernels(const BlockLaw& law, std::size_t count,
                                       const SjOptions& options, double* standard_error) {
  auto atoms = block_law_atoms(law);
  bool monte_carlo = false;
  if (!atoms) {
    atoms = monte_carlo_atoms(std::get<EmpiricalGroupLaw>(law), options);
    monte_carlo = true;
  }
  std::vector<Kernel> kernels;
  double worst = 0;
  for (std::size_t j = 0; j < count; ++j) {
    StepFunction s = sj_from_atoms(*atoms, j);
    for (double level : s.levels()) worst = std::max(worst, level * (1 - level));
    kernels.emplace_back(std::move(s));
  }
  if (standard_error != nullptr) {
    *standard_error = monte_carlo ? std::sqrt(worst / static_cast<double>(options.mc_samples)) : 0.0;
  }
  return kernels;
}

std::vector<Kernel> poisson_dirichlet_kernels(std::size_t count, const Grid& g) {
  std::vector<Kernel> trivial{StepFunction({1.0}, {1.0, 0.0}), StepFunction({1.0}, {0.0, 1.0})};
  while (trivial.size() < count) trivial.emplace_back(StepFunction({}, {0.0}));
  trivial.erase(trivial.begin() + static_cast<std::ptrdiff_t>(count), trivial.end());
  const auto rho = solve_family(trivial, g);
  std::vector<Kernel> kernels;
  for (std::size_t j = 0; j < count; ++j) {
    std::vector<double> diff(rho[j].values().begin(), rho[j].values().end());
    if (j > 0) {
      for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= rho[j - 1][i];
    }
    kernels.emplace_back(GridFunction(g.u_max, g.h, std::move(diff)));
  }
  return kernels;
}

// int_lo^hi of the piecewise-linear interpolant of node values f[first..],
// where node i sits at i*h.
double trapezoid_between(const std::vector<double>& f, double h, std::size_t first, double upper) {
  const double pos = upper / h;
  auto last = static_cast<std::size_t>(std::floor(pos + 1e-9));
  last = std::min(last, f.size() - 1);
  double total = 0;
  for (std::size_t i = first; i < last; ++i) total += 0.5 * h * (f[i] + f[i + 1]);
  const double frac = pos - static_cast<double>(last);
  if (frac > 1e-9 && last + 1 < f.size()) {
    const double mid = f[last] + frac * (f[last + 1] - f[last]);
    total += 0.5 * frac * h * (f[last] + mid);
  }
  return total;
}

template <class RightLimit>
double series_on_grid(RightLimit&& psi_right, double u, double h) {
  if (!(u > 0) || u > 4.0 + 1e-12) throw std::invalid_argument("series_phi1 supports 0 < u <= 4");
  if (u <= 1.0) return 1.0;
  const std::size_t per_unit = static_cast<std::size_t>(std::round(1.0 / h));
  const auto last = static_cast<std::size_t>(std::ceil(u / h - 1e-9));

  // g(t) = (1 - psi(t+)) / t on t >= 1; entries below 1 are unused.
  std::vector<double> g(last + 1, 0.0);
  for (std::size_t i = per_unit; i <= last; ++i) {
    const double t = static_cast<double>(i) * h;
    g[i] = (1.0 - psi_right(t)) / t;
  }

  double result = 1.0;
  double factorial = 1.0;
  std::vector<double> current = g;  // k-fold convolution, supported on [k, inf)
  const auto terms = static_cast<std::size_t>(std::floor(u + 1e-12));
  for (std::size_t k = 1; k <= terms; ++k) {
    if (k > 1) {
      std::vector<double> next(last + 1, 0.0);
      for (std::size_t n = k * per_unit; n <= last; ++n) {
        // t over [1, s - (k-1)]: nodes per_unit .. n - (k-1) per_unit.
        const std::size_t hi = n - (k - 1) * per_unit;
        if (hi == per_unit) continue;
        double s = 0.5 * (g[per_unit] * current[n - per_unit] + g[hi] * current[n - hi]);
        for (std::size_t i = per_unit + 1; i < hi; ++i) s += g[i] * current[n - i];
        next[n] = h * s;
      }
      current = std::move(next);
    }
    factorial *= static_cast<double>(k);
    const double term = trapezoid_between(current, h, k * per_unit, u);
    result += ((k % 2 == 1) ? -1.0 : 1.0) * term / factorial;
  }
  return result;
}

double step_integral(const StepFunction& s) {
  if (s.levels().back() != 0.0) throw std::invalid_argument("density must vanish eventually");
  double total = 0;
  double lo = 0;
  for (std::size_t p = 0; p < s.breaks().size(); ++p) {
    total += s.levels()[p] * (s.breaks()[p] - lo);
    lo = s.breaks()[p];
  }
  return total;
}

double step_laplace(const StepFunction& s, double sv) {
  double total = 0;
  double lo = 0;
  for (std::size_t p = 0; p < s.breaks().size(); ++p) {
    const double hi = s.breaks()[p];
    const double level = s.levels()[p];
    total += sv == 0.0 ? level * (hi - lo) : level * (std::exp(-sv * lo) - std::exp(-sv * hi)) / sv;
    lo = hi;
  }
  return total;
}

}  // namespace

GridFunction solve_dickman(double u_max, double h) {
  const Grid g = make_grid(u_max, h);
  std::vector<double> rho(g.last + 1, 1.0);
  const std::size_t w = g.per_unit;
  // window = sum_{n-w < i < n} rho_i, maintained incrementally.
  double window = 0;
  for (std::size_t i = 1; i < w && i <= g.last; ++i) window += rho[i];
  for (std::size_t n = w + 1; n <= g.last; ++n) {
    window += rho[n - 1] - rho[n - w];
    const double u = static_cast<double>(n) * h;
    rho[n] = h * (0.5 * rho[n - w] + window) / (u - 0.5 * h);
  }
  return GridFunction(u_max, h, std::move(rho));
}

GridFunction solve_convolution(const Kernel& psi, double u_max, double h) {
  const Grid g = make_grid(u_max, h);
  for (std::size_t i = 0; i <= g.per_unit; ++i) {
    const double x = static_cast<double>(i) * h;
    if (std::abs(evaluate(psi, x) - 1.0) > 1e-12) {
      throw std::invalid_argument("psi must equal 1 on [0, 1]");
    }
  }
  return solve_family({psi}, g).front();
}

GridFunction solve_pi(double u_max, double h) {
  return solve_convolution(solve_dickman(u_max, h), u_max, h);
}

SjKernel compute_Sj(const BlockLaw& law, std::size_t j, double u_max, double h,
                    const SjOptions& options) {
  const Grid g = make_grid(u_max, h);
  if (std::holds_alternative<PoissonDirichletLaw>(law)) {
    auto kernels = poisson_dirichlet_kernels(j + 1, g);
    return {std::move(kernels.back()), 0.0};
  }
  double se = 0;
  auto kernels = finite_law_kernels(law, j + 1, options, &se);
  return {std::move(kernels.back()), se};
}

std::vector<GridFunction> solve_phi_k(const BlockLaw& law, std::size_t k_max, double u_max,
                                      double h, const SjOptions& options) {
  if (k_max == 0) throw std::invalid_argument("k_max must be at least 1");
  const Grid g = make_grid(u_max, h);
  std::vector<Kernel> kernels = std::holds_alternative<PoissonDirichletLaw>(law)
                                    ? poisson_dirichlet_kernels(k_max, g)
                                    : finite_law_kernels(law, k_max, options, nullptr);
  return solve_family(kernels, g);
}

std::vector<GridFunction> solve_gsg_psi_k(unsigned m, std::size_t k_max, double u_max, double h) {
  if (m == 0) throw std::invalid_argument("m must be at least 1");
  if (k_max == 0) throw std::invalid_argument("k_max must be at least 1");
  const Grid g = make_grid(u_max, h);

  struct Divisor {
    double weight;      // totient(l) / m
    std::size_t span;   // (m / l) in grid steps
    std::size_t parts;  // m / l
    std::size_t l;
  };
  std::vector<Divisor> divisors;
  for (std::size_t l = 1; l <= m; ++l) {
    if (m % l != 0) continue;
    divisors.push_back({static_cast<double>(totient(l)) / m, (m / l) * g.per_unit, m / l, l});
  }

  // cumulative[k][n] = trapezoid integral of psi_k over [0, t_n]
  std::vector<std::vector<double>> psi(k_max), cumulative(k_max);
  for (std::size_t k = 1; k <= k_max; ++k) {
    auto& f = psi[k - 1];
    auto& q = cumulative[k - 1];
    f.assign(g.last + 1, 1.0);
    q.assign(g.last + 1, 0.0);
    for (std::size_t n = 1; n <= std::min(g.per_unit, g.last); ++n) q[n] = q[n - 1] + h;
    for (std::size_t n = g.per_unit + 1; n <= g.last; ++n) {
      const double u = static_cast<double>(n) * h;
      const double open = q[n - 1] + 0.5 * h * f[n - 1];  // q[n] without the f[n] term
      double rhs = 0;
      double weight_sum = 0;
      for (const auto& d : divisors) {
        const double lower = n > d.span ? q[n - d.span] : 0.0;
        rhs += d.weight * (open - lower);
        weight_sum += d.weight;
        // l > m/k, i.e. fewer than k parts: the remaining mass feeds psi_{k - m/l}.
        if (d.l * k > m && n > d.span) rhs += d.weight * cumulative[k - d.parts - 1][n - d.span];
      }
      f[n] = rhs / (u - 0.5 * h * weight_sum);
      q[n] = q[n - 1] + 0.5 * h * (f[n - 1] + f[n]);
    }
  }
  std::vector<GridFunction> out;
  for (auto& f : psi) out.emplace_back(u_max, h, std::move(f));
  return out;
}

double series_phi1(const GridFunction& psi1, double u) {
  const double h = psi1.step();
  const double per_unit = 1.0 / h;
  if (std::abs(per_unit - std::round(per_unit)) > 1e-9) throw std::invalid_argument("1/h must be an integer");
  if (u > psi1.u_max() + 1e-12) throw std::invalid_argument("psi1 does not cover u");
  return series_on_grid([&](double t) { return psi1(t); }, u, h);
}

double series_phi1(const StepFunction& psi1, double u, double h) {
  const double per_unit = 1.0 / h;
  if (!(h > 0) || std::abs(per_unit - std::round(per_unit)) > 1e-9) {
    throw std::invalid_argument("1/h must be an integer");
  }
  return series_on_grid([&](double t) { return psi1.right_limit(t); }, u, h);
}

double decay_bound_gsg(unsigned m, double u) {
  if (m == 0) throw std::invalid_argument("m must be at least 1");
  if (!(u > m)) throw std::invalid_argument("decay bound needs u > m");
  const auto factors = static_cast<std::size_t>(std::ceil(u / m));
  double bound = 1.0;
  for (std::size_t j = 0; j < factors; ++j) {
    const double f = u - static_cast<double>(j) * m;
    if (f <= 0) break;
    bound *= m / f;
  }
  return bound;
}

GridFunction laplace_transform(const GridFunction& density, double s_max, double h_s) {
  const double h = density.step();
  const auto values = density.values();
  return GridFunction::tabulate(s_max, h_s, [&](double s) {
    double total = 0.5 * (values.front() + values.back() * std::exp(-s * density.u_max()));
    for (std::size_t i = 1; i + 1 < values.size(); ++i) {
      total += values[i] * std::exp(-s * density.node(i));
    }
    return h * total;
  });
}

GridFunction laplace_from_psi(const Kernel& psi_density, double s_max, double h_s) {
  std::vector<double> transform;
  const std::size_t count = GridFunction::node_count(s_max, h_s);
  if (const auto* s = std::get_if<StepFunction>(&psi_density)) {
    for (double level : s->levels()) {
      if (level < 0) throw std::invalid_argument("density must be nonnegative");
    }
    if (std::abs(step_integral(*s) - 1.0) > 1e-6) throw std::invalid_argument("density must integrate to 1");
    for (std::size_t i = 0; i < count; ++i) transform.push_back(step_laplace(*s, static_cast<double>(i) * h_s));
  } else {
    const auto& f = std::get<GridFunction>(psi_density);
    for (double v : f.values()) {
      if (v < 0) throw std::invalid_argument("density must be nonnegative");
    }
    const GridFunction l = laplace_transform(f, s_max, h_s);
    if (std::abs(l[0] - 1.0) > 1e-6) throw std::invalid_argument("density must integrate to 1");
    transform.assign(l.values().begin(), l.values().end());
  }
  std::vector<double> out(count);
  double integral = 0;
  out[0] = 1.0;
  for (std::size_t i = 1; i < count; ++i) {
    integral += 0.5 * h_s * (transform[i - 1] + transform[i]);
    out[i] = std::exp(-integral);
  }
  return GridFunction(s_max, h_s, std::move(out));
}

}  // namespace wreathcycle
