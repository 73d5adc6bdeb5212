#pragma once
/// @file kernels.hpp
/// Closed-form elementary kernels: heat kernels, the log potential and its
/// derivatives, Poisson kernels and the half-plane Dirichlet Green function.

#include <array>

#include "hpvort/grid.hpp"

namespace hpv {

/// Distance below which a singular kernel refuses to evaluate.
inline constexpr double eps_singular = 1e-12;

/// (4 pi t)^-1 exp(-|x|^2 / 4t)
double gauss2d(Point2 x, double t);
/// (4 pi t)^-1/2 exp(-r^2 / 4t)
double gauss1d(double r, double t);
/// d/dr of gauss1d.
double gauss1d_dr(double r, double t);

/// E(x) = -(1/2pi) log|x|
double log_potential(Point2 x);
/// grad E = -x / (2 pi |x|^2)
std::array<double, 2> grad_E(Point2 x);
/// Second derivatives of E: d11, d12, d22.
double d11_E(Point2 x);
double d12_E(Point2 x);
double d22_E(Point2 x);

/// s / (pi (x1^2 + s^2))
double poisson_P(double x1, double s);
/// x1 / (pi (x1^2 + s^2))
double conj_poisson_Q(double x1, double s);

/// D(x, y) = E(x - y) - E(x - y*)
double dirichlet_green(Point2 x, Point2 y);
/// Neumann counterpart E(x - y) + E(x - y*).
double neumann_green(Point2 x, Point2 y);
/// grad-perp in x of D(x, y), with grad-perp = (d2, -d1).
std::array<double, 2> biot_savart_kernel(Point2 x, Point2 y);

/// Mean of E over the rectangle c + [-a, a] x [-b, b] (finite even if it
/// contains the origin).
double cell_average_E(Point2 c, double a, double b);
/// Mean of grad-perp E over the same rectangle.
std::array<double, 2> cell_average_grad_perp_E(Point2 c, double a, double b);

}  // namespace hpv
