#pragma once
/// @file line_ops.hpp
/// Fourier multipliers on the boundary line: Hilbert transform H (-i sgn xi),
/// Poisson semigroup e^{sA} (e^{-s|xi|}), line heat e^{t d1^2} (e^{-t xi^2})
/// and A = -H d1 (-|xi|). Input is zero padded before transforming.

#include <complex>
#include <functional>

#include "hpvort/grid.hpp"

namespace hpv {

inline constexpr int default_pad_factor = 4;

/// Applies m(xi) on the zero-padded extension and restricts to the window.
/// The padded length is the smallest FFT-friendly size >= pad * n.
LineSamples apply_line_multiplier(const LineSamples& g,
                                  const std::function<std::complex<double>(double)>& m,
                                  int pad = default_pad_factor);

LineSamples hilbert(const LineSamples& g, int pad = default_pad_factor);
LineSamples poisson_semigroup(const LineSamples& g, double s, int pad = default_pad_factor);
LineSamples line_heat(const LineSamples& g, double t, int pad = default_pad_factor);
LineSamples apply_A(const LineSamples& g, int pad = default_pad_factor);
/// Spectral first derivative.
LineSamples line_derivative(const LineSamples& g, int pad = default_pad_factor);

}  // namespace hpv

namespace hpv {

/// Padded spectrum of a line function, for evaluating many multipliers at a
/// single sample index without a full inverse transform.
class LineSpectrum {
 public:
  LineSpectrum(const LineSamples& g, std::size_t index, int pad = default_pad_factor);
  /// (m(D) g)(x_index)
  double eval(const std::function<std::complex<double>(double)>& m) const;
  std::size_t padded_length() const { return M_; }

 private:
  std::size_t M_ = 0;
  double dxi_ = 0.0;
  std::vector<std::complex<double>> coef_;  // ghat_k * e^{i xi_k (x_index - x_0)} / M
};

}  // namespace hpv
