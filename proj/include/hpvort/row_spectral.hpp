#pragma once
/// @file row_spectral.hpp
/// Field operators built from an x1 Fourier transform of every grid row and
/// product integration in x2. Row data are zero padded in x1; in x2 fields are
/// read as piecewise cubic (Lagrange, 4-point stencils) so that integrals
/// against exp(-k y) and Gaussians are exact for that interpolant.

#include <complex>
#include <vector>

#include "hpvort/grid.hpp"

namespace hpv::detail {

using cplx = std::complex<double>;

/// Row-wise spectra: rows x mc coefficients, xi_k = 2 pi k / (m h1).
struct RowSpectra {
  HalfPlaneGrid grid;
  std::size_t m = 0;    // padded real length
  std::size_t mc = 0;   // m / 2 + 1
  std::size_t rows = 0;
  std::vector<cplx> c;

  RowSpectra() = default;
  RowSpectra(const HalfPlaneGrid& g, int pad, std::size_t nrows);
  double xi(std::size_t k) const;
  cplx* row(std::size_t j) { return c.data() + j * mc; }
  const cplx* row(std::size_t j) const { return c.data() + j * mc; }
};

std::size_t padded_length(std::size_t n, int pad);

/// Unnormalized rfft of each (zero padded) row.
RowSpectra rows_forward(const ScalarField& f, int pad);
/// Inverse with 1/m normalization; rows beyond grid.n2() are dropped.
ScalarField rows_inverse(const RowSpectra& s);
/// Inverse of row j on padded indices; result has length m (index i maps to
/// x1_min + i h1 periodically).
std::vector<double> row_inverse_padded(const RowSpectra& s, std::size_t j);

/// F_i = int_{z_i}^inf exp(-k (y - z_i)) f(y) dy (f = 0 above the grid).
/// Input is read with the given stride; output is contiguous.
void backward_exp(double k, double h, const cplx* f, std::size_t n, std::size_t stride, cplx* F);
/// L_i = int_0^{z_i} exp(-k (z_i - y)) f(y) dy.
void forward_exp(double k, double h, const cplx* f, std::size_t n, std::size_t stride, cplx* L);

/// Matrix B (n x n, row-major) with (B g)_i = int_0^inf Gamma_0(x2_i + z, t) g(z) dz
/// for the cubic interpolant of g on z_j = j h.
std::vector<double> gauss_image_matrix(std::size_t n, double h, double t);

/// Same for the kernel Gamma_0(x2_i - z, t) (direct, not image).
std::vector<double> gauss_direct_matrix(std::size_t n, double h, double t);

/// sum_{m != 0} 1 / (pi (rho + m L)^2): the periodic images, with period L,
/// of a 1 / (pi rho^2) tail.
double image_tail(double rho, double L);

/// Row l, node i: h1 sum_i' f(i', l) image_tail(x1_i - x1_i', L), stored
/// rows x n1. A transform with a c |xi| kink at xi = 0 leaves a
/// -c / (pi r^2) tail; adding c times this row removes its images.
std::vector<double> row_image_tails(const ScalarField& f, double L);

}  // namespace hpv::detail
