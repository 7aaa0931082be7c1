#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "wreathcycle/grid_function.hpp"
#include "wreathcycle/limit_samplers.hpp"

namespace wreathcycle {

inline constexpr double kDefaultStep = 1.0 / 4096;
inline constexpr double kDefaultUMax = 10.0;

// All solvers below work on the uniform grid 0, h, ..., u_max with composite
// trapezoidal quadrature, and solve the implicit endpoint term of each step
// exactly. h must satisfy h <= 1/256, and both 1/h and u_max/h must be integers.

/// Dickman's function from rho(u) = (1/u) * integral of rho over [u-1, u].
GridFunction solve_dickman(double u_max, double h);

/// phi(x) = (1/x) (phi * psi)(x) with phi = 1 on [0, 1]. psi must equal 1 on
/// [0, 1]. Sampled kernels are treated as continuous; step kernels are
/// integrated piece by piece so their jumps are not smeared.
GridFunction solve_convolution(const Kernel& psi, double u_max, double h);

/// pi(u) = (1/u) (pi * rho)(u), pi = 1 on [0, 1].
GridFunction solve_pi(double u_max, double h);

struct SjOptions {
  std::size_t mc_samples = 1'000'000;  // used only when the law cannot be enumerated
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct SjKernel {
  Kernel kernel;
  double standard_error = 0;  // nonzero only for Monte Carlo estimates
};

/// S_j(x) = P(B_{j+1} <= 1/x < B_j), with B_0 = infinity and B_r = 0 past the
/// last part. Exact step functions for finite laws; for the Poisson-Dirichlet
/// law S_j = rho_{j+1} - rho_j from the Knuth-Trabb Pardo functions.
SjKernel compute_Sj(const BlockLaw& law, std::size_t j, double u_max, double h,
                    const SjOptions& options = {});

/// phi_k(u) = P(A_k <= 1/u) for k = 1..k_max, from
/// u phi_k(u) = sum_{j<k} (S_j * phi_{k-j})(u), solved jointly in increasing k.
std::vector<GridFunction> solve_phi_k(const BlockLaw& law, std::size_t k_max, double u_max,
                                      double h, const SjOptions& options = {});

/// The same family for the generalized symmetric law, straight from the
/// divisor-sum expectation form (an independent route to solve_phi_k).
std::vector<GridFunction> solve_gsg_psi_k(unsigned m, std::size_t k_max, double u_max, double h);

/// Inclusion-exclusion series
///   phi_1(u) = sum_k (-1)^k / k! * int_{t_i >= 1, sum t_i <= u} prod (1 - psi_1(t_i)) / t_i dt
/// evaluated with iterated trapezoidal convolutions. Supports u <= 4.
double series_phi1(const GridFunction& psi1, double u);
double series_phi1(const StepFunction& psi1, double u, double h);

/// m^{ceil(u/m)} / (u (u-m) (u-2m) ...), the product running over positive factors. Needs u > m.
double decay_bound_gsg(unsigned m, double u);

/// Laplace transform of X from the density of Y through L_X' = -L_Y L_X:
/// L_X(s) = exp(-int_0^s L_Y). The density must integrate to 1 within 1e-6.
GridFunction laplace_from_psi(const Kernel& psi_density, double s_max, double h_s);

/// Direct quadrature s -> int e^{-st} f(t) dt over the grid of f.
GridFunction laplace_transform(const GridFunction& density, double s_max, double h_s);

}  // namespace wreathcycle
