#pragma once
/// @file vorticity_semigroup.hpp
/// The Stokes vorticity operator T(t) and its kernel W(x, y, t), evaluated
/// two ways: direct kernel quadrature and the composite formula built from
/// the heat semigroups and the boundary trace. Also the trace-zero operator
/// T0(t) and the Stokes Green matrix G.
///
/// Decomposition used throughout:
///   W = Gamma(x - y) + Gamma(x - y*) + Wtilde + Wtr,   W* = Gamma(x - y*) + Wtilde,
/// with Gamma the 2-D heat kernel and Gamma_0 its 1-D factor.

#include <array>
#include <complex>

#include "hpvort/grid.hpp"

namespace hpv {

struct KernelConfig {
  std::size_t z2_nodes = 16;  ///< Gauss-Legendre nodes per z2 panel in Wtilde
  int pad_factor = 8;         ///< x1 zero padding for kernel transforms
  double tail_extent = 8.0;   ///< extra line length on each side for boundary-line operators

  /// Throws ConfigError unless z2_nodes >= 16, pad_factor >= 4, tail_extent >= 0.
  void validate() const;
};

struct KernelValue {
  double direct = 0.0;  ///< Gamma(x - y, t)
  double image = 0.0;   ///< Gamma(x - y*, t)
  double tilde = 0.0;   ///< Wtilde
  double trace = 0.0;   ///< Wtr
  double star() const { return image + tilde; }
  double total() const { return direct + image + tilde + trace; }
};

/// Wtilde(x, y, t) = 2 int_0^{y2} Gamma_0(x2 + z2, t) (e^{(y2 - z2) A} A Gamma_0(., t))(x1 - y1) dz2.
/// The inner function comes from line_ops on a window of Gamma_0 samples
/// (spacing sqrt(t)/16) with the periodic-image tail of the padded transform
/// removed analytically.
double kernel_W_tilde(Point2 x, Point2 y, double t, const KernelConfig& cfg = {});

/// Wtr(x, y, t) = -2 Gamma_0(x2, t) (e^{t d1^2} P_{y2})(x1 - y1), by frequency quadrature.
double kernel_W_trace(Point2 x, Point2 y, double t);

KernelValue kernel_W(Point2 x, Point2 y, double t, const KernelConfig& cfg = {});

/// Stokes Green matrix {G11, G12, G21, G22}. The correction integrals of
/// G11 and G21 are evaluated as x1-frequency integrals of a closed form in
/// erfc, independently of kernel_W_tilde.
std::array<double, 4> green_matrix(Point2 x, Point2 z, double t);
/// G*_11(x, z, t) = G11 - Gamma(x - z, t).
double green_star_11(Point2 x, Point2 z, double t);

enum class KernelPart { full, star, tilde, trace };

/// x -> W(x, y, t) (or one part) on all grid nodes, through the x1 transform
/// of the closed-form kernel. Used for kernel dumps.
ScalarField kernel_W_field(Point2 y, double t, const HalfPlaneGrid& grid, const KernelConfig& cfg = {},
                           KernelPart part = KernelPart::full);
/// x -> G(x, z, t) on all grid nodes, entries {G11, G12, G21, G22}.
std::array<ScalarField, 4> green_field(Point2 z, double t, const HalfPlaneGrid& grid,
                                       const KernelConfig& cfg = {});

/// int W(x, y, t) mu(dy): atoms and sheet samples by exact kernel sums
/// (x1-frequency transform of the closed form, grouped by source height),
/// the density by 4th-order Gregory quadrature in y2. Boundary layers pair
/// with W(., y2 = 0, t), which is identically zero.
ScalarField apply_T_kernel(const VorticityMeasure& mu, double t, const HalfPlaneGrid& grid,
                           const KernelConfig& cfg = {});

/// e^{t Lap_N} mu + int Wtilde mu - 2 Gamma_0(x2, t) e^{t d1^2} u0(., 0).
/// In the trace term, sources on the boundary enter with P_0 = delta (the
/// continuous extension of the Poisson kernel), so boundary layers and
/// boundary atoms cancel against their heat term as W(., y2 = 0) = 0 demands.
ScalarField apply_T_composite(const VorticityMeasure& mu, double t, const HalfPlaneGrid& grid,
                              const KernelConfig& cfg = {});
/// Density convenience overload.
ScalarField apply_T_composite(const ScalarField& density, double t, const KernelConfig& cfg = {});

/// T0(t) = e^{t Lap_D} + (H d1 - d2) d2 [(-Lap_N)^{-1}(e^{t Lap_N} - I) - (-Lap_D)^{-1}(e^{t Lap_D} - I)].
/// Gridded densities only (InvalidArgument otherwise).
ScalarField apply_T0(const VorticityMeasure& mu, double t, const HalfPlaneGrid& grid,
                     const KernelConfig& cfg = {});

/// eta(y2) = int_0^{y2} rho Gamma_0(rho, 1) d rho + y2 int_{y2}^inf Gamma_0(rho, 1) d rho.
double eta_bound(double y2);

namespace detail {

/// x1 transform of W(., y, t) in x1 - y1 at |xi| = k.
double W_hat(double k, double x2, double y2, double t);
/// d/dy2 of W_hat.
double W_hat_dy2(double k, double x2, double y2, double t);
/// Windowed trapezoid weights with 4th-order Gregory end corrections.
std::vector<double> gregory_weights(std::size_t n, double h);

}  // namespace detail

}  // namespace hpv
