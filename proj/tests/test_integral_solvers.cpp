#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <variant>
#include <vector>

#include "wreathcycle/experiments.hpp"
#include "wreathcycle/integral_solvers.hpp"

namespace wreathcycle {
namespace {

constexpr double kH = 1.0 / 1024;
constexpr double kEulerGamma = 0.57721566490153286;
// rho(3) = 1 - log 3 + int_2^3 log(t - 1) / t dt, evaluated to 18 digits offline.
constexpr double kRho3 = 0.0486083882911315669;

const double kLog2 = std::log(2.0);
const double kLog15 = std::log(1.5);

double eval(const Kernel& k, double x) {
  return std::visit([x](const auto& f) { return f(x); }, k);
}

double max_gap(const GridFunction& a, const GridFunction& b) {
  double worst = 0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

// CDF of a part X from phi(u) = P(X <= 1/u), flat below 1/u_max.
auto cdf_of(const GridFunction& phi) {
  return [&phi](double x) {
    if (x >= 1) return 1.0;
    if (x <= 1 / phi.u_max()) return phi(phi.u_max());
    return phi(1 / x);
  };
}

TEST(Dickman, ClosedFormsAndGolden) {
  const GridFunction rho = solve_dickman(3, 1.0 / 4096);
  EXPECT_EQ(rho(0.5), 1.0);
  EXPECT_EQ(rho(1.0), 1.0);
  EXPECT_NEAR(rho(2), 1 - kLog2, 1e-6);
  EXPECT_NEAR(rho(3), kRho3, 1e-6);
  EXPECT_TRUE(rho.is_distribution_in_inverse());
  for (double v : rho.values()) EXPECT_GT(v, 0.0);
}

TEST(Dickman, DelayEquationHoldsBetweenNodes) {
  // u rho'(u) = -rho(u - 1), checked with central differences.
  const GridFunction rho = solve_dickman(5, kH);
  for (double u : {1.5, 2.25, 3.5, 4.75}) {
    const double derivative = (rho(u + kH) - rho(u - kH)) / (2 * kH);
    EXPECT_NEAR(u * derivative, -rho(u - 1), 1e-5) << u;
  }
}

TEST(Dickman, RefinementIsSecondOrder) {
  const double a = solve_dickman(3, 1.0 / 256)(3);
  const double b = solve_dickman(3, 1.0 / 512)(3);
  const double c = solve_dickman(3, 1.0 / 1024)(3);
  const double ratio = (a - b) / (b - c);
  EXPECT_GE(ratio, 3.0);
  EXPECT_LE(ratio, 5.0);
}

TEST(Dickman, RejectsBadGrids) {
  EXPECT_THROW(solve_dickman(3, 1.0 / 100), std::invalid_argument);
  EXPECT_THROW(solve_dickman(3, 1.0 / 300.5), std::invalid_argument);
  EXPECT_THROW(solve_dickman(3.3, 1.0 / 256), std::invalid_argument);
  EXPECT_THROW(solve_dickman(0.5, 1.0 / 256), std::invalid_argument);
}

TEST(Convolution, IndicatorKernelReproducesDickman) {
  const GridFunction direct = solve_dickman(10, kH);
  EXPECT_LE(max_gap(solve_convolution(StepFunction::unit_indicator(), 10, kH), direct), 1e-8);
}

TEST(Convolution, ConstantKernelGivesConstantSolution) {
  const GridFunction one = GridFunction::tabulate(6, kH, [](double) { return 1.0; });
  const GridFunction phi = solve_convolution(one, 6, kH);
  for (double v : phi.values()) EXPECT_NEAR(v, 1.0, 1e-12);
}

TEST(Convolution, RejectsMismatchedKernels) {
  const GridFunction coarse = GridFunction::tabulate(6, 1.0 / 256, [](double) { return 1.0; });
  EXPECT_THROW(solve_convolution(coarse, 6, kH), std::invalid_argument);
  const GridFunction short_grid = GridFunction::tabulate(3, kH, [](double) { return 1.0; });
  EXPECT_THROW(solve_convolution(short_grid, 6, kH), std::invalid_argument);
  const GridFunction not_one = GridFunction::tabulate(6, kH, [](double) { return 0.5; });
  EXPECT_THROW(solve_convolution(not_one, 6, kH), std::invalid_argument);
}

TEST(Pi, ClosedFormsOnOneToTwo) {
  const GridFunction pi = solve_pi(10, 1.0 / 4096);
  EXPECT_EQ(pi(1), 1.0);
  EXPECT_NEAR(pi(1.5), 1 - 0.5 * kLog15 * kLog15, 1e-6);
  EXPECT_NEAR(pi(2), 1 - 0.5 * kLog2 * kLog2, 1e-6);
  EXPECT_TRUE(pi.is_distribution_in_inverse());
  const GridFunction via_rho = solve_convolution(solve_dickman(10, 1.0 / 4096), 10, 1.0 / 4096);
  EXPECT_EQ(max_gap(pi, via_rho), 0.0);
}

TEST(Sj, TrivialLaw) {
  const auto s0 = compute_Sj(TrivialLaw{}, 0, 6, kH);
  const auto s1 = compute_Sj(TrivialLaw{}, 1, 6, kH);
  const auto s2 = compute_Sj(TrivialLaw{}, 2, 6, kH);
  EXPECT_EQ(s0.standard_error, 0.0);
  for (double x : {0.25, 1.0}) {
    EXPECT_EQ(eval(s0.kernel, x), 1.0);
    EXPECT_EQ(eval(s1.kernel, x), 0.0);
  }
  for (double x : {1.5, 5.0}) {
    EXPECT_EQ(eval(s0.kernel, x), 0.0);
    EXPECT_EQ(eval(s1.kernel, x), 1.0);
  }
  for (double x : {0.5, 1.5, 4.0}) EXPECT_EQ(eval(s2.kernel, x), 0.0);
}

TEST(Sj, GeneralizedSymmetricTwo) {
  const auto s0 = compute_Sj(GeneralizedSymmetricLaw(2), 0, 6, kH);
  EXPECT_EQ(eval(s0.kernel, 0.5), 1.0);
  EXPECT_EQ(eval(s0.kernel, 1.5), 0.5);
  EXPECT_EQ(eval(s0.kernel, 2.5), 0.0);
}

TEST(Sj, PoissonDirichletLeadingTermIsDickman) {
  const auto s0 = compute_Sj(PoissonDirichletLaw{}, 0, 6, kH);
  ASSERT_TRUE(std::holds_alternative<GridFunction>(s0.kernel));
  EXPECT_LE(max_gap(std::get<GridFunction>(s0.kernel), solve_dickman(6, kH)), 1e-8);
}

TEST(Sj, SumToOneBeyondOne) {
  struct Case {
    BlockLaw law;
    std::size_t terms;
    double x_max;
  };
  for (const auto& c : {Case{GeneralizedSymmetricLaw(2), 3, 6}, Case{GeneralizedSymmetricLaw(6), 7, 6},
                        Case{EmpiricalGroupLaw{BlockGroupSpec::full(3)}, 4, 6},
                        Case{PoissonDirichletLaw{}, 5, 4}}) {
    std::vector<SjKernel> s;
    for (std::size_t j = 0; j < c.terms; ++j) s.push_back(compute_Sj(c.law, j, 6, kH));
    for (double x = 1 + kH; x <= c.x_max; x += 0.37) {
      double total = 0;
      for (const auto& sj : s) {
        const double v = eval(sj.kernel, x);
        EXPECT_GE(v, -1e-12);
        EXPECT_LE(v, 1 + 1e-12);
        total += v;
      }
      EXPECT_NEAR(total, 1.0, 1e-8) << describe(c.law) << " x=" << x;
    }
  }
}

TEST(PhiK, TrivialLeadingTermIsDickman) {
  const auto phis = solve_phi_k(TrivialLaw{}, 2, 10, kH);
  ASSERT_EQ(phis.size(), 2u);
  EXPECT_LE(max_gap(phis[0], solve_dickman(10, kH)), 1e-8);
}

TEST(PhiK, PoissonDirichletLeadingTermIsPi) {
  const auto phis = solve_phi_k(PoissonDirichletLaw{}, 1, 10, kH);
  EXPECT_LE(max_gap(phis[0], solve_pi(10, kH)), 1e-6);
}

TEST(PhiK, OrderedAndMonotoneForEveryLaw) {
  for (const BlockLaw& law : {BlockLaw{TrivialLaw{}}, BlockLaw{PoissonDirichletLaw{}},
                              BlockLaw{GeneralizedSymmetricLaw(3)},
                              BlockLaw{EmpiricalGroupLaw{BlockGroupSpec::full(3)}}}) {
    const auto phis = solve_phi_k(law, 3, 8, 1.0 / 512);
    for (std::size_t k = 0; k < phis.size(); ++k) {
      EXPECT_TRUE(phis[k].is_distribution_in_inverse(1e-12)) << describe(law) << " k=" << k + 1;
      if (k == 0) continue;
      for (std::size_t i = 0; i < phis[k].size(); ++i) {
        ASSERT_GE(phis[k][i], phis[k - 1][i] - 1e-12) << describe(law) << " k=" << k + 1;
      }
    }
  }
  EXPECT_THROW(solve_phi_k(TrivialLaw{}, 0, 8, kH), std::invalid_argument);
}

TEST(PhiK, TrivialSecondLargestMatchesStickBreaking) {
  const auto phis = solve_phi_k(TrivialLaw{}, 2, 200, 1.0 / 256);
  Rng rng(101);
  std::vector<double> second;
  for (int i = 0; i < 100'000; ++i) second.push_back(sample_stick_breaking(1e-6, rng).largest(2));
  EXPECT_LE(ks_distance(second, cdf_of(phis[1])), 0.02);
}

TEST(GsgPsi, MOneIsKnuthTrabbPardo) {
  const auto a = solve_gsg_psi_k(1, 3, 8, kH);
  const auto b = solve_phi_k(TrivialLaw{}, 3, 8, kH);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_LE(max_gap(a[k], b[k]), 1e-8) << k;
}

TEST(GsgPsi, AgreesWithPhiKRoute) {
  for (unsigned m : {2u, 3u, 6u}) {
    const auto a = solve_gsg_psi_k(m, 3, 10, kH);
    const auto b = solve_phi_k(GeneralizedSymmetricLaw(m), 3, 10, kH);
    for (std::size_t k = 0; k < 3; ++k) EXPECT_LE(max_gap(a[k], b[k]), 1e-8) << m << " " << k;
  }
}

TEST(GsgPsi, MTwoLargestPartMatchesSampler) {
  const auto psi = solve_gsg_psi_k(2, 1, 20, 1.0 / 256);
  Rng rng(103);
  std::vector<double> largest;
  for (int i = 0; i < 100'000; ++i) largest.push_back(sample_A(GeneralizedSymmetricLaw(2), 1e-6, rng).largest());
  EXPECT_LE(ks_distance(largest, cdf_of(psi[0])), 0.02);
}

TEST(GsgPsi, DecayBoundAtNineForMThree) {
  const auto psi = solve_gsg_psi_k(3, 1, 10, kH);
  EXPECT_LE(psi[0](9), 1.0 / 6);
  EXPECT_THROW(solve_gsg_psi_k(0, 1, 10, kH), std::invalid_argument);
}

TEST(DecayBound, HandValues) {
  EXPECT_DOUBLE_EQ(decay_bound_gsg(2, 4), 0.5);
  EXPECT_DOUBLE_EQ(decay_bound_gsg(2, 6), 1.0 / 6);
  EXPECT_DOUBLE_EQ(decay_bound_gsg(3, 9), 1.0 / 6);
  EXPECT_THROW(decay_bound_gsg(2, 2), std::invalid_argument);
}

TEST(DecayBound, DominatesSolvedPsi) {
  for (unsigned m : {2u, 3u, 4u}) {
    const auto psi = solve_gsg_psi_k(m, 1, 12, 1.0 / 512).front();
    for (std::size_t i = 0; i < psi.size(); ++i) {
      const double u = psi.node(i);
      if (u > m) {
        ASSERT_LE(psi[i], decay_bound_gsg(m, u)) << m << " " << u;
      }
    }
  }
}

TEST(Series, TrivialCases) {
  const GridFunction rho = solve_dickman(4, kH);
  EXPECT_EQ(series_phi1(rho, 0.5), 1.0);
  EXPECT_EQ(series_phi1(StepFunction::unit_indicator(), 1.0, kH), 1.0);
  EXPECT_THROW(series_phi1(rho, 4.5), std::invalid_argument);
  EXPECT_THROW(series_phi1(rho, 0.0), std::invalid_argument);
}

TEST(Series, MatchesClosedFormsAtTwo) {
  EXPECT_NEAR(series_phi1(StepFunction::unit_indicator(), 2, kH), 1 - kLog2, 1e-4);
  EXPECT_NEAR(series_phi1(solve_dickman(4, kH), 2), 1 - 0.5 * kLog2 * kLog2, 1e-4);
}

TEST(Series, MatchesSolverUpToFour) {
  const GridFunction rho = solve_dickman(4, kH);
  const GridFunction pi = solve_pi(4, kH);
  for (double u : {1.5, 2.5, 3.0, 3.5, 4.0}) {
    EXPECT_NEAR(series_phi1(StepFunction::unit_indicator(), u, kH), rho(u), 1e-4) << u;
    EXPECT_NEAR(series_phi1(rho, u), pi(u), 1e-4) << u;
  }
}

TEST(Laplace, UniformDensityGivesDickmanDensityTransform) {
  constexpr double kSMax = 8;
  constexpr double kHs = 1.0 / 256;
  const GridFunction lx = laplace_from_psi(StepFunction::unit_indicator(), kSMax, kHs);
  const double scale = std::exp(-kEulerGamma);
  const GridFunction rho = solve_dickman(20, kH);
  const GridFunction density =
      GridFunction::tabulate(20, kH, [&](double t) { return scale * rho(t); });
  const GridFunction direct = laplace_transform(density, kSMax, kHs);
  EXPECT_EQ(lx(0), 1.0);
  EXPECT_LE(max_gap(lx, direct), 1e-4);
  for (std::size_t i = 1; i < lx.size(); ++i) ASSERT_LT(lx[i], lx[i - 1]);
}

TEST(Laplace, ClosedFormForUniform) {
  // L_Y(s) = (1 - e^{-s}) / s; its integral at s = 1 is Ein(1).
  constexpr double kEin1 = 0.79659959929705313;
  const GridFunction lx = laplace_from_psi(StepFunction::unit_indicator(), 2, 1.0 / 256);
  EXPECT_NEAR(lx(1), std::exp(-kEin1), 1e-6);
}

TEST(Laplace, RejectsUnnormalizedDensity) {
  EXPECT_THROW(laplace_from_psi(StepFunction({1.0}, {0.5, 0.0}), 2, 1.0 / 256), std::invalid_argument);
  const GridFunction twice = GridFunction::tabulate(4, kH, [](double t) { return t <= 1 ? 2.0 : 0.0; });
  EXPECT_THROW(laplace_from_psi(twice, 2, 1.0 / 256), std::invalid_argument);
}

}  // namespace
}  // namespace wreathcycle
