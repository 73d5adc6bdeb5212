#pragma once
/// @file navier_stokes.hpp
/// Mild solutions of the half-plane vorticity equation by Picard iteration
///   omega_{j+1}(t) = T(t) omega_0 + int_0^t T(t - s) (-div(omega_j u_j))(s) ds,  u_j = K omega_j,
/// and an explicit finite-difference solver for the linear problem used as
/// an oracle.

#include <vector>

#include "hpvort/grid.hpp"
#include "hpvort/vorticity_semigroup.hpp"

namespace hpv {

/// Vorticity and velocity sampled at increasing times.
struct SolutionPath {
  std::vector<double> times;
  std::vector<ScalarField> omega;
  std::vector<VectorField> velocity;
};

/// Scaled norms of one iterate, suprema over the path times.
struct IterateMetrics {
  double N = 0.0;             ///< sup t^{1-1/q} ||omega||_q
  double L = 0.0;             ///< sup t^{1/2-1/p} (||u||_p + t^{1/2} ||grad u||_p)
  double u_inf_scaled = 0.0;  ///< sup t^{1/2} ||u||_inf
};

/// History over Picard sweeps. Entry j of N, L and u_inf_scaled belongs to
/// iterate j + 1; diff_norms[j] and rel_l1_diff[j] compare iterates j + 2 and j + 1.
struct IterationMetrics {
  double q = 4.0 / 3.0;
  double p = 4.0;
  std::vector<double> N, L, u_inf_scaled;
  std::vector<double> diff_norms;   ///< sup t^{1-1/q}||dw||_q + t^{1/2-1/p}||du||_p + t^{1-1/p}||grad du||_p
  std::vector<double> rel_l1_diff;  ///< sup ||dw||_1 / sup ||w||_1
};

struct MildSolution {
  SolutionPath path;
  IterationMetrics metrics;
  bool converged = false;
  std::size_t iterations = 0;
  double residual = 0.0;  ///< relative L1 defect of omega - (T omega_0 + Duhamel(omega, u))
};

struct SolverOptions {
  double tol = 1e-8;
  std::size_t max_iter = 20;
  double q = 4.0 / 3.0;
  double p = 4.0;
  std::size_t duhamel_nodes = 12;  ///< Gauss-Legendre nodes in sigma, s = t (1 - sigma^2)
  KernelConfig kernel;
  void validate() const;
};

/// -div(omega u): spectral d1, 4th-order differences in x2 (one-sided near
/// the edges).
ScalarField neg_div_flux(const ScalarField& omega, const VectorField& u, int pad = 4);

/// T(t - s) applied to -div(omega u)(s), with omega u interpolated linearly
/// in time between path samples (constant outside the sampled range).
ScalarField duhamel_integrand(const SolutionPath& path, double s, double t, const KernelConfig& cfg = {});

/// The same quantity as int grad_y W(x, y, t - s) . (omega u)(y, s) dy, by
/// Gregory quadrature in y2 of the x1-transformed kernel gradient.
ScalarField duhamel_integrand_gradient_form(const SolutionPath& path, double s, double t,
                                            const KernelConfig& cfg = {});

/// int_0^t T(t - s)(-div(omega u))(s) ds with s = t (1 - sigma^2). Throws
/// ConfigError when t lies outside (0, mesh.t_end] or the path is empty.
ScalarField duhamel_term(const SolutionPath& path, double t, const TimeMesh& mesh, const KernelConfig& cfg,
                         std::size_t nodes);

IterateMetrics iteration_metrics(const SolutionPath& path, double q, double p);
double diff_norm(const SolutionPath& a, const SolutionPath& b, double q, double p);

/// Picard iteration on the path times mesh.nodes (plus mesh.t_end). Stops when
/// the sup-over-times relative L1 change drops below tol; after max_iter the
/// result comes back with converged = false.
MildSolution picard_solve(const VorticityMeasure& mu0, const TimeMesh& mesh, const HalfPlaneGrid& grid,
                          const SolverOptions& opt = {});

/// Explicit 5-point heat stepping for d_t w = Lap w with d2 w = A w on
/// x2 = 0 (ghost row closed by A of the boundary row, using the symbol of A
/// matched to the 5-point stencil) and w = 0 on the other edges. dt <= 0 selects 0.2 h^2; dt > h^2 / 4 throws ConfigError.
ScalarField fd_oracle_linear(const ScalarField& omega0, double t_end, double dt = 0.0, int pad = 4);

/// Norm helpers on the grid (trapezoid weights).
double vector_lp_norm(const VectorField& u, double p);
double gradient_lp_norm(const VectorField& u, double p);

}  // namespace hpv
