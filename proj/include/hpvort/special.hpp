#pragma once
/// @file special.hpp
/// Scaled complementary error function and the Gaussian-exponential
/// integrals that appear after transforming kernels in x1.

namespace hpv {

/// exp(u^2) erfc(u)
double erfcx(double u);

/// J(k; a, b, t) = int_0^b Gamma_0(a + w, t) exp(-k (b - w)) dw, for k >= 0, b >= 0.
double gauss_exp_integral(double k, double a, double b, double t);

}  // namespace hpv
