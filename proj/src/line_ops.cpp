#include "hpvort/line_ops.hpp"

#include <cmath>

#include "hpvort/errors.hpp"
#include "hpvort/fft.hpp"

namespace hpv {

using cplx = std::complex<double>;

LineSamples apply_line_multiplier(const LineSamples& g, const std::function<cplx(double)>& m, int pad) {
  const std::size_t n = g.n();
  if (n < 16) throw ResolutionError("line operator needs at least 16 samples");
  if (pad < 1) throw InvalidArgument("pad factor must be >= 1");
  const std::size_t M = fft::nice_size(static_cast<std::size_t>(pad) * n);
  std::vector<double> buf(M, 0.0);
  std::copy(g.values.begin(), g.values.end(), buf.begin());
  std::vector<cplx> spec;
  fft::r2c(buf, spec);
  const double dxi = 2.0 * M_PI / (static_cast<double>(M) * g.h());
  for (std::size_t k = 0; k < spec.size(); ++k) {
    cplx mult = m(dxi * static_cast<double>(k));
    // the Nyquist coefficient is real; odd multipliers cannot act on it
    if (M % 2 == 0 && k == M / 2) mult = cplx(mult.real(), 0.0);
    spec[k] *= mult / static_cast<double>(M);
  }
  fft::c2r(spec, M, buf);
  LineSamples out(g.x1_min, g.x1_max, n);
  std::copy(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(n), out.values.begin());
  return out;
}

LineSamples hilbert(const LineSamples& g, int pad) {
  return apply_line_multiplier(g, [](double xi) { return xi > 0 ? cplx(0, -1) : cplx(0, 0); }, pad);
}

LineSamples poisson_semigroup(const LineSamples& g, double s, int pad) {
  if (s < 0) throw InvalidArgument("poisson_semigroup: s must be >= 0");
  if (s == 0) return g;
  return apply_line_multiplier(g, [s](double xi) { return cplx(std::exp(-s * xi), 0); }, pad);
}

LineSamples line_heat(const LineSamples& g, double t, int pad) {
  if (t < 0) throw InvalidArgument("line_heat: t must be >= 0");
  if (t == 0) return g;
  return apply_line_multiplier(g, [t](double xi) { return cplx(std::exp(-t * xi * xi), 0); }, pad);
}

LineSamples apply_A(const LineSamples& g, int pad) {
  return apply_line_multiplier(g, [](double xi) { return cplx(-xi, 0); }, pad);
}

LineSamples line_derivative(const LineSamples& g, int pad) {
  return apply_line_multiplier(g, [](double xi) { return cplx(0, xi); }, pad);
}

}  // namespace hpv

namespace hpv {

LineSpectrum::LineSpectrum(const LineSamples& g, std::size_t index, int pad) {
  const std::size_t n = g.n();
  if (n < 16) throw ResolutionError("line operator needs at least 16 samples");
  if (index >= n) throw InvalidArgument("LineSpectrum: index outside the window");
  M_ = fft::nice_size(static_cast<std::size_t>(pad) * n);
  std::vector<double> buf(M_, 0.0);
  std::copy(g.values.begin(), g.values.end(), buf.begin());
  fft::r2c(buf, coef_);
  dxi_ = 2.0 * M_PI / (static_cast<double>(M_) * g.h());
  for (std::size_t k = 0; k < coef_.size(); ++k) {
    double th = 2.0 * M_PI * static_cast<double>((k * index) % M_) / static_cast<double>(M_);
    double w = (k == 0 || (M_ % 2 == 0 && k == M_ / 2)) ? 1.0 : 2.0;  // Hermitian pairs
    coef_[k] *= std::polar(w / static_cast<double>(M_), th);
  }
}

double LineSpectrum::eval(const std::function<cplx(double)>& m) const {
  double s = 0.0;
  for (std::size_t k = 0; k < coef_.size(); ++k) {
    cplx mult = m(dxi_ * static_cast<double>(k));
    if (M_ % 2 == 0 && k == M_ / 2) mult = cplx(mult.real(), 0.0);
    s += (mult * coef_[k]).real();
  }
  return s;
}

}  // namespace hpv
