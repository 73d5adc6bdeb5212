#include "hpvort/vorticity_semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>

#include "hpvort/errors.hpp"
#include "hpvort/fft.hpp"
#include "hpvort/kernels.hpp"
#include "hpvort/line_ops.hpp"
#include "hpvort/parallel.hpp"
#include "hpvort/row_spectral.hpp"
#include "hpvort/semigroups.hpp"
#include "hpvort/special.hpp"

namespace hpv {

using detail::cplx;

void KernelConfig::validate() const {
  if (z2_nodes < 16) throw ConfigError("KernelConfig: z2_nodes must be >= 16");
  if (pad_factor < 4) throw ConfigError("KernelConfig: pad_factor must be >= 4");
  if (!(tail_extent >= 0.0) || !std::isfinite(tail_extent))
    throw ConfigError("KernelConfig: tail_extent must be finite and >= 0");
}

namespace {

void require_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw InvalidArgument("time must be positive and finite");
}

void require_half_plane(Point2 p) {
  if (!(p.x2 >= 0.0) || !std::isfinite(p.x1) || !std::isfinite(p.x2))
    throw InvalidArgument("point must lie in the closed upper half plane");
}

struct Rule {
  std::vector<double> x, w;
};

const Rule& gl_rule(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, Rule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) {
    Rule r;
    gauss_legendre(n, r.x, r.w);
    it = cache.emplace(n, std::move(r)).first;
  }
  return it->second;
}

// Largest frequency kept when a factor exp(-t k^2) is present.
double freq_cutoff(double t) { return std::sqrt(46.0 / t); }

// (1/pi) int_0^inf f(k) cos(k r) dk, or with sin(k r); f must carry exp(-t k^2).
template <class F>
double freq_integral(const F& f, double r, double t, bool sine) {
  const double K = freq_cutoff(t);
  double pw = 0.5 / std::sqrt(t);
  if (r != 0.0) pw = std::min(pw, M_PI / std::abs(r));
  const std::size_t np = static_cast<std::size_t>(std::ceil(K / pw));
  const Rule& q = gl_rule(16);
  std::vector<double> terms;
  terms.reserve(np);
  for (std::size_t p = 0; p < np; ++p) {
    double a = K * static_cast<double>(p) / np, b = K * static_cast<double>(p + 1) / np;
    double mid = 0.5 * (a + b), half = 0.5 * (b - a), s = 0.0;
    for (std::size_t m = 0; m < q.x.size(); ++m) {
      double k = mid + half * q.x[m];
      s += q.w[m] * f(k) * (sine ? std::sin(k * r) : std::cos(k * r));
    }
    terms.push_back(half * s);
  }
  return pairwise_sum(terms) / M_PI;
}

// sum over n != 0 of 1 / (pi (rho + n L)^2): the periodic images of the
// 1/(pi rho^2) tail that A leaves on a unit-mass bump.
using detail::image_tail;

// Cut beyond which Gamma_0(x2 + z2, t) is treated as zero.
double gauss_reach(double t) { return 16.0 * std::sqrt(t); }

double hat_tilde(double k, double x2, double y2, double t) {
  return -2.0 * k * gauss_exp_integral(k, x2, y2, t);
}

double hat_trace(double k, double x2, double y2, double t) {
  return -2.0 * gauss1d(x2, t) * std::exp(-k * y2);
}

using Group = std::map<double, std::vector<WeightedPoint>>;

Group group_by_height(const VorticityMeasure& mu) {
  Group g;
  for (const auto& p : mu.atoms) g[p.pos.x2].push_back(p);
  for (const auto& p : mu.sheet) g[p.pos.x2].push_back(p);
  return g;
}

// out += sum_a w_a K(x - y_a) for one source height, with K given through
// hat(k, j) (x1 transform at grid row j, including exp(-t k^2)).
// tail(j) is the coefficient c of a c |xi| kink of the transform at xi = 0;
// it leaves a -c / (pi r^2) tail whose periodic images are removed.
template <class Hat>
void add_fourier_group(ScalarField& out, const std::vector<WeightedPoint>& src, double t, int pad,
                       const Hat& hat, const std::function<double(std::size_t)>& tail = {}) {
  const auto& g = out.grid;
  detail::RowSpectra s(g, pad, g.n2());
  const double K = freq_cutoff(t);
  std::size_t kc = 0;
  while (kc < s.mc && s.xi(kc) <= K) ++kc;
  std::vector<cplx> phase(kc, 0.0);
  for (std::size_t k = 0; k < kc; ++k) {
    const double xi = s.xi(k);
    cplx acc = 0.0;
    for (const auto& p : src) acc += p.weight * std::polar(1.0, xi * (g.x1_min() - p.pos.x1));
    phase[k] = acc / g.h1();
  }
  parallel_for(g.n2(), [&](std::size_t j) {
    cplx* row = s.row(j);
    for (std::size_t k = 0; k < kc; ++k) row[k] = hat(s.xi(k), j) * phase[k];
  });
  ScalarField f = detail::rows_inverse(s);
  for (std::size_t q = 0; q < out.values.size(); ++q) out.values[q] += f.values[q];
  if (!tail) return;
  const double L = static_cast<double>(s.m) * g.h1();
  std::vector<double> img(g.n1(), 0.0);
  for (std::size_t i = 0; i < g.n1(); ++i)
    for (const auto& p : src) img[i] += p.weight * image_tail(g.x1(i) - p.pos.x1, L);
  for (std::size_t j = 0; j < g.n2(); ++j) {
    double c = tail(j);
    if (c == 0.0) continue;
    for (std::size_t i = 0; i < g.n1(); ++i) out.at(i, j) += c * img[i];
  }
}

// |xi| coefficients of the tilde and trace transforms at xi = 0.
double kink_tilde(double x2, double y2, double t) { return -2.0 * gauss_exp_integral(0.0, x2, y2, t); }
double kink_trace(double x2, double y2, double t) { return 2.0 * gauss1d(x2, t) * y2; }

// Periodic-image tail correction for a gridded density on a transform of
// padded length m: the Wtilde and trace kinks, integrated in y2 with Gregory weights.
void add_density_tails(ScalarField& out, const ScalarField& f, double t, std::size_t m) {
  const auto& g = f.grid;
  const std::size_t n1 = g.n1(), n2 = g.n2();
  const auto img = detail::row_image_tails(f, static_cast<double>(m) * g.h1());
  const auto w = detail::gregory_weights(n2, g.h2());
  std::vector<bool> live(n2, false);
  for (std::size_t l = 1; l < n2; ++l)
    for (std::size_t i = 0; i < n1 && !live[l]; ++i) live[l] = img[l * n1 + i] != 0.0;
  parallel_for(n2, [&](std::size_t j) {
    const double x2 = g.x2(j);
    for (std::size_t l = 1; l < n2; ++l) {
      if (!live[l]) continue;
      const double y2 = g.x2(l);
      const double c = w[l] * (kink_tilde(x2, y2, t) + kink_trace(x2, y2, t));
      if (c == 0.0) continue;
      for (std::size_t i = 0; i < n1; ++i) out.at(i, j) += c * img[l * n1 + i];
    }
  });
}

// Exact Gamma(x - y) and/or Gamma(x - y*) sums.
void add_gauss_parts(ScalarField& out, const std::vector<WeightedPoint>& src, double t, double wd,
                     double wi) {
  const auto& g = out.grid;
  std::vector<double> a(g.n1()), b(g.n2());
  for (const auto& p : src) {
    for (std::size_t i = 0; i < g.n1(); ++i) a[i] = gauss1d(g.x1(i) - p.pos.x1, t);
    for (std::size_t j = 0; j < g.n2(); ++j)
      b[j] = wd * gauss1d(g.x2(j) - p.pos.x2, t) + wi * gauss1d(g.x2(j) + p.pos.x2, t);
    for (std::size_t j = 0; j < g.n2(); ++j)
      for (std::size_t i = 0; i < g.n1(); ++i) out.at(i, j) += p.weight * a[i] * b[j];
  }
}

// Middle and trace terms of the composite formula for atoms and sheet samples.
ScalarField composite_points(const VorticityMeasure& mu, double t, const HalfPlaneGrid& grid,
                             const KernelConfig& cfg) {
  ScalarField out(grid);
  Group groups = group_by_height(mu);
  if (groups.empty()) return out;
  const double st = std::sqrt(t), h1 = grid.h1();
  const std::size_t n1 = grid.n1(), n2 = grid.n2();

  // Boundary line window covering the grid, all sources and a tail margin.
  double ymin = grid.x1_min(), ymax = grid.x1_max();
  for (const auto& [y2, pts] : groups)
    for (const auto& p : pts) {
      ymin = std::min(ymin, p.pos.x1);
      ymax = std::max(ymax, p.pos.x1);
    }
  const double ext = std::max(cfg.tail_extent, 12.0 * st);
  const auto nl = static_cast<std::size_t>(std::ceil((grid.x1_min() - ymin + ext) / h1));
  const auto nr = static_cast<std::size_t>(std::ceil((ymax - grid.x1_max() + ext) / h1));
  const std::size_t nline = n1 + nl + nr;
  const double lmin = grid.x1_min() - static_cast<double>(nl) * h1;
  auto xl = [&](std::size_t q) { return lmin + static_cast<double>(q) * h1; };
  const std::size_t M = fft::nice_size(static_cast<std::size_t>(cfg.pad_factor) * nline);
  const double dxi = 2.0 * M_PI / (static_cast<double>(M) * h1);
  const double L = static_cast<double>(M) * h1;
  const Rule& q = gl_rule(cfg.z2_nodes);

  // Middle term: 2 int_0^{y2} Gamma_0(x2 + z2) (e^{(y2 - z2) A} A g)(x1) dz2 with
  // g = sum_a w_a Gamma_0(. - y1_a).
  for (const auto& [y2, pts] : groups) {
    if (y2 == 0.0) continue;
    std::vector<double> buf(M, 0.0);
    for (std::size_t k = 0; k < nline; ++k) {
      double s = 0.0;
      for (const auto& p : pts) s += p.weight * gauss1d(xl(k) - p.pos.x1, t);
      buf[k] = s;
    }
    std::vector<cplx> G;
    fft::r2c(buf, G);
    std::vector<double> corr(n1, 0.0);
    for (std::size_t i = 0; i < n1; ++i)
      for (const auto& p : pts) corr[i] += p.weight * image_tail(grid.x1(i) - p.pos.x1, L);
    const double zmax = std::min(y2, gauss_reach(t));
    const auto np = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(zmax / (0.5 * st))));
    std::vector<cplx> spec(G.size());
    std::vector<double> F;
    for (std::size_t pnl = 0; pnl < np; ++pnl) {
      double a = zmax * static_cast<double>(pnl) / np, b = zmax * static_cast<double>(pnl + 1) / np;
      for (std::size_t m = 0; m < q.x.size(); ++m) {
        const double z2 = 0.5 * (a + b) + 0.5 * (b - a) * q.x[m];
        const double wq = 0.5 * (b - a) * q.w[m];
        const double s = y2 - z2;
        for (std::size_t k = 0; k < G.size(); ++k) {
          double xi = dxi * static_cast<double>(k);
          spec[k] = G[k] * (-xi * std::exp(-s * xi) / static_cast<double>(M));
        }
        if (M % 2 == 0) spec[M / 2] = cplx(spec[M / 2].real(), 0.0);
        fft::c2r(spec, M, F);
        for (std::size_t j = 0; j < n2; ++j) {
          double x2 = grid.x2(j);
          if (x2 + z2 > gauss_reach(t)) break;
          double c = 2.0 * wq * gauss1d(x2 + z2, t);
          double* row = out.values.data() + j * n1;
          for (std::size_t i = 0; i < n1; ++i) row[i] += c * (F[nl + i] - corr[i]);
        }
      }
    }
  }

  // Trace term: -2 Gamma_0(x2, t) e^{t d1^2} u0(., 0).
  std::vector<double> v(n1, 0.0);
  LineSamples u0(lmin, lmin + static_cast<double>(nline - 1) * h1, nline);
  bool any_line = false;
  for (const auto& [y2, pts] : groups) {
    for (const auto& p : pts) {
      if (y2 == 0.0) {
        for (std::size_t i = 0; i < n1; ++i) v[i] += p.weight * gauss1d(grid.x1(i) - p.pos.x1, t);
      } else if (y2 < 4.0 * h1) {
        for (std::size_t i = 0; i < n1; ++i)
          v[i] += p.weight * freq_integral([&](double k) { return std::exp(-y2 * k - t * k * k); },
                                           grid.x1(i) - p.pos.x1, t, false);
      } else {
        any_line = true;
        for (std::size_t k = 0; k < nline; ++k) u0.values[k] += p.weight * poisson_P(xl(k) - p.pos.x1, y2);
      }
    }
  }
  if (any_line) {
    LineSamples hu = line_heat(u0, t, cfg.pad_factor);
    for (std::size_t i = 0; i < n1; ++i) v[i] += hu.values[nl + i];
  }
  for (std::size_t j = 0; j < n2; ++j) {
    double c = -2.0 * gauss1d(grid.x2(j), t);
    for (std::size_t i = 0; i < n1; ++i) out.at(i, j) += c * v[i];
  }
  return out;
}

// Middle and trace terms for a gridded density, all in the x1 transform:
// int Wtilde f dy = -2 k e^{-t k^2} int Gamma_0(x2 + z) Ghat(z) dz with
// Ghat(z) = int_z^inf e^{-k (y - z)} fhat(y) dy, and u0hat = Ghat(0).
ScalarField composite_density_correction(const ScalarField& f, double t, int pad) {
  const auto& g = f.grid;
  const std::size_t n2 = g.n2();
  auto s = detail::rows_forward(f, pad);
  const std::size_t mc = s.mc;
  std::vector<cplx> G(n2 * mc), col(n2);
  for (std::size_t k = 0; k < mc; ++k) {
    detail::backward_exp(s.xi(k), g.h2(), s.c.data() + k, n2, mc, col.data());
    for (std::size_t l = 0; l < n2; ++l) G[l * mc + k] = col[l];
  }
  const auto B = detail::gauss_image_matrix(n2, g.h2(), t);
  detail::RowSpectra o(g, pad, n2);
  for (std::size_t i = 0; i < n2; ++i) {
    cplx* oi = o.row(i);
    for (std::size_t l = 0; l < n2; ++l) {
      double b = B[i * n2 + l];
      if (b == 0.0) continue;
      const cplx* gl = G.data() + l * mc;
      for (std::size_t k = 0; k < mc; ++k) oi[k] += b * gl[k];
    }
    const double g0 = gauss1d(g.x2(i), t);
    for (std::size_t k = 0; k < mc; ++k) {
      double xi = s.xi(k), e = std::exp(-t * xi * xi);
      oi[k] = -2.0 * xi * e * oi[k] - 2.0 * g0 * e * G[k];
    }
  }
  ScalarField out = detail::rows_inverse(o);
  add_density_tails(out, f, t, s.m);
  return out;
}

VorticityMeasure points_only(const VorticityMeasure& mu) {
  VorticityMeasure p;
  p.atoms = mu.atoms;
  p.sheet = mu.sheet;
  return p;
}

LineSamples line_on_grid(const LineSamples& b, const HalfPlaneGrid& g) {
  if (b.n() == g.n1() && b.x1_min == g.x1_min() && b.x1_max == g.x1_max()) return b;
  LineSamples r(g.x1_min(), g.x1_max(), g.n1());
  for (std::size_t i = 0; i < g.n1(); ++i) {
    double x = g.x1(i);
    r.values[i] = (x < b.x1_min || x > b.x1_max) ? 0.0 : interpolate(b, x);
  }
  return r;
}

void check_density_grid(const VorticityMeasure& mu, const HalfPlaneGrid& grid) {
  if (mu.density && !(mu.density->grid == grid))
    throw InvalidArgument("density must live on the output grid");
}

}  // namespace

namespace detail {

double W_hat(double k, double x2, double y2, double t) {
  return std::exp(-t * k * k) * (gauss1d(x2 - y2, t) + gauss1d(x2 + y2, t) + hat_tilde(k, x2, y2, t) +
                                 hat_trace(k, x2, y2, t));
}

double W_hat_dy2(double k, double x2, double y2, double t) {
  double J = gauss_exp_integral(k, x2, y2, t);
  return std::exp(-t * k * k) * (-gauss1d_dr(x2 - y2, t) + gauss1d_dr(x2 + y2, t) -
                                 2.0 * k * gauss1d(x2 + y2, t) + 2.0 * k * k * J +
                                 2.0 * k * gauss1d(x2, t) * std::exp(-k * y2));
}

std::vector<double> gregory_weights(std::size_t n, double h) {
  if (n < 6) throw ResolutionError("Gregory quadrature needs at least 6 nodes");
  std::vector<double> w(n, h);
  const double c[3] = {3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0};
  for (int m = 0; m < 3; ++m) {
    w[static_cast<std::size_t>(m)] = c[m] * h;
    w[n - 1 - static_cast<std::size_t>(m)] = c[m] * h;
  }
  return w;
}

}  // namespace detail

double kernel_W_tilde(Point2 x, Point2 y, double t, const KernelConfig& cfg) {
  require_time(t);
  cfg.validate();
  require_half_plane(x);
  require_half_plane(y);
  if (y.x2 == 0.0) return 0.0;
  const double st = std::sqrt(t);
  const double zmax = std::min(y.x2, gauss_reach(t) - x.x2);
  if (zmax <= 0.0) return 0.0;
  const double r = x.x1 - y.x1;
  const double hl = st / 16.0;
  const auto c = static_cast<std::size_t>(std::ceil((std::abs(r) + 12.0 * st) / hl));
  const double cr = static_cast<double>(c) * hl;
  LineSamples g(r - cr, r + cr, 2 * c + 1);
  for (std::size_t i = 0; i < g.n(); ++i) g.values[i] = gauss1d(r + (static_cast<double>(i) - c) * hl, t);
  LineSpectrum spec(g, c, cfg.pad_factor);
  const double tail = image_tail(r, static_cast<double>(spec.padded_length()) * hl);
  const auto np = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(zmax / (0.5 * st))));
  const Rule& q = gl_rule(cfg.z2_nodes);
  std::vector<double> terms;
  for (std::size_t p = 0; p < np; ++p) {
    double a = zmax * static_cast<double>(p) / np, b = zmax * static_cast<double>(p + 1) / np;
    for (std::size_t m = 0; m < q.x.size(); ++m) {
      double z2 = 0.5 * (a + b) + 0.5 * (b - a) * q.x[m];
      double s = y.x2 - z2;
      double F = spec.eval([s](double xi) { return cplx(-xi * std::exp(-s * xi), 0.0); }) - tail;
      terms.push_back(0.5 * (b - a) * q.w[m] * gauss1d(x.x2 + z2, t) * F);
    }
  }
  return 2.0 * pairwise_sum(terms);
}

double kernel_W_trace(Point2 x, Point2 y, double t) {
  require_time(t);
  require_half_plane(x);
  require_half_plane(y);
  const double r = x.x1 - y.x1;
  if (y.x2 == 0.0) return -2.0 * gauss1d(x.x2, t) * gauss1d(r, t);
  const double y2 = y.x2;
  return -2.0 * gauss1d(x.x2, t) *
         freq_integral([&](double k) { return std::exp(-y2 * k - t * k * k); }, r, t, false);
}

KernelValue kernel_W(Point2 x, Point2 y, double t, const KernelConfig& cfg) {
  KernelValue v;
  v.tilde = kernel_W_tilde(x, y, t, cfg);
  v.trace = kernel_W_trace(x, y, t);
  v.direct = gauss2d(Point2{x.x1 - y.x1, x.x2 - y.x2}, t);
  v.image = gauss2d(Point2{x.x1 - y.x1, x.x2 + y.x2}, t);
  return v;
}

double green_star_11(Point2 x, Point2 z, double t) {
  require_time(t);
  require_half_plane(x);
  require_half_plane(z);
  const double a = z.x2, b = x.x2;
  double c = freq_integral(
      [&](double k) { return 2.0 * k * std::exp(-t * k * k) * gauss_exp_integral(k, a, b, t); },
      x.x1 - z.x1, t, false);
  return -gauss2d(Point2{x.x1 - z.x1, x.x2 + z.x2}, t) + c;
}

std::array<double, 4> green_matrix(Point2 x, Point2 z, double t) {
  double direct = gauss2d(Point2{x.x1 - z.x1, x.x2 - z.x2}, t);
  double image = gauss2d(Point2{x.x1 - z.x1, x.x2 + z.x2}, t);
  const double a = z.x2, b = x.x2;
  double g21 = -2.0 * freq_integral(
                          [&](double k) { return k * std::exp(-t * k * k) * gauss_exp_integral(k, a, b, t); },
                          x.x1 - z.x1, t, true);
  return {direct + green_star_11(x, z, t), 0.0, g21, direct - image};
}

ScalarField kernel_W_field(Point2 y, double t, const HalfPlaneGrid& grid, const KernelConfig& cfg,
                           KernelPart part) {
  require_time(t);
  cfg.validate();
  require_half_plane(y);
  ScalarField out(grid);
  std::vector<WeightedPoint> src{{y, 1.0}};
  double wd = part == KernelPart::full ? 1.0 : 0.0;
  double wi = (part == KernelPart::full || part == KernelPart::star) ? 1.0 : 0.0;
  add_gauss_parts(out, src, t, wd, wi);
  bool use_tilde = part != KernelPart::trace, use_trace = part == KernelPart::full || part == KernelPart::trace;
  add_fourier_group(out, src, t, cfg.pad_factor, [&](double k, std::size_t j) {
    double x2 = grid.x2(j), v = 0.0;
    if (use_tilde) v += hat_tilde(k, x2, y.x2, t);
    if (use_trace) v += hat_trace(k, x2, y.x2, t);
    return cplx(std::exp(-t * k * k) * v, 0.0);
  }, [&](std::size_t j) {
    double x2 = grid.x2(j), c = 0.0;
    if (use_tilde) c += kink_tilde(x2, y.x2, t);
    if (use_trace) c += kink_trace(x2, y.x2, t);
    return c;
  });
  return out;
}

std::array<ScalarField, 4> green_field(Point2 z, double t, const HalfPlaneGrid& grid, const KernelConfig& cfg) {
  require_time(t);
  cfg.validate();
  require_half_plane(z);
  std::vector<WeightedPoint> src{{z, 1.0}};
  ScalarField g11(grid), g12(grid), g21(grid), g22(grid);
  add_gauss_parts(g11, src, t, 1.0, -1.0);
  add_gauss_parts(g22, src, t, 1.0, -1.0);
  add_fourier_group(g11, src, t, cfg.pad_factor, [&](double k, std::size_t j) {
    return cplx(2.0 * k * std::exp(-t * k * k) * gauss_exp_integral(k, z.x2, grid.x2(j), t), 0.0);
  }, [&](std::size_t j) { return 2.0 * gauss_exp_integral(0.0, z.x2, grid.x2(j), t); });
  add_fourier_group(g21, src, t, cfg.pad_factor, [&](double k, std::size_t j) {
    return cplx(0.0, 2.0 * k * std::exp(-t * k * k) * gauss_exp_integral(k, z.x2, grid.x2(j), t));
  });
  return {g11, g12, g21, g22};
}

ScalarField apply_T_kernel(const VorticityMeasure& mu, double t, const HalfPlaneGrid& grid,
                           const KernelConfig& cfg) {
  require_time(t);
  cfg.validate();
  mu.validate();
  check_density_grid(mu, grid);
  ScalarField out(grid);
  for (const auto& [y2, pts] : group_by_height(mu)) {
    if (y2 == 0.0) continue;  // W(., y2 = 0, t) = 0
    add_gauss_parts(out, pts, t, 1.0, 1.0);
    const double yy = y2;
    add_fourier_group(out, pts, t, cfg.pad_factor, [&](double k, std::size_t j) {
      double x2 = grid.x2(j);
      return cplx(std::exp(-t * k * k) * (hat_tilde(k, x2, yy, t) + hat_trace(k, x2, yy, t)), 0.0);
    }, [&](std::size_t j) { return kink_tilde(grid.x2(j), yy, t) + kink_trace(grid.x2(j), yy, t); });
  }
  if (mu.density) {
    const auto& f = *mu.density;
    const std::size_t n2 = grid.n2();
    auto s = detail::rows_forward(f, cfg.pad_factor);
    const auto w = detail::gregory_weights(n2, grid.h2());
    const double K = freq_cutoff(t);
    std::size_t kc = 0;
    while (kc < s.mc && s.xi(kc) <= K) ++kc;
    std::vector<bool> live(n2, false);
    for (std::size_t l = 1; l < n2; ++l)  // row l = 0 pairs with W(., 0) = 0
      for (std::size_t i = 0; i < grid.n1() && !live[l]; ++i) live[l] = f.at(i, l) != 0.0;
    detail::RowSpectra o(grid, cfg.pad_factor, n2);
    parallel_for(n2, [&](std::size_t i) {
      cplx* oi = o.row(i);
      const double x2 = grid.x2(i);
      for (std::size_t l = 0; l < n2; ++l) {
        if (!live[l]) continue;
        const double y2 = grid.x2(l);
        const cplx* fl = s.row(l);
        for (std::size_t k = 0; k < kc; ++k) oi[k] += w[l] * detail::W_hat(s.xi(k), x2, y2, t) * fl[k];
      }
    });
    ScalarField d = detail::rows_inverse(o);
    add_density_tails(d, f, t, s.m);
    for (std::size_t q = 0; q < out.values.size(); ++q) out.values[q] += d.values[q];
  }
  return out;
}

ScalarField apply_T_composite(const VorticityMeasure& mu, double t, const HalfPlaneGrid& grid,
                              const KernelConfig& cfg) {
  require_time(t);
  cfg.validate();
  mu.validate();
  check_density_grid(mu, grid);
  const int pad = cfg.pad_factor;
  VorticityMeasure pts = points_only(mu);
  ScalarField out = heat_neumann(pts, grid, t, pad);
  out = axpy(1.0, composite_points(pts, t, grid, cfg), out);
  if (mu.density) {
    out = axpy(1.0, heat_neumann(*mu.density, t, pad), out);
    out = axpy(1.0, composite_density_correction(*mu.density, t, pad), out);
  }
  if (mu.boundary_sheet) {
    VorticityMeasure layer;
    layer.boundary_sheet = mu.boundary_sheet;
    out = axpy(1.0, heat_neumann(layer, grid, t, pad), out);
    LineSamples hb = line_heat(line_on_grid(*mu.boundary_sheet, grid), t, pad);
    for (std::size_t j = 0; j < grid.n2(); ++j) {
      double c = -2.0 * gauss1d(grid.x2(j), t);
      for (std::size_t i = 0; i < grid.n1(); ++i) out.at(i, j) += c * hb.values[i];
    }
  }
  return out;
}

ScalarField apply_T_composite(const ScalarField& density, double t, const KernelConfig& cfg) {
  VorticityMeasure mu;
  mu.density = density;
  return apply_T_composite(mu, t, density.grid, cfg);
}

ScalarField apply_T0(const VorticityMeasure& mu, double t, const HalfPlaneGrid& grid, const KernelConfig& cfg) {
  require_time(t);
  cfg.validate();
  mu.validate();
  check_density_grid(mu, grid);
  if (!mu.atoms.empty() || !mu.sheet.empty() || mu.boundary_sheet)
    throw InvalidArgument("apply_T0 acts on gridded densities only");
  if (!mu.density) return ScalarField(grid);
  const auto& f = *mu.density;
  const int pad = cfg.pad_factor;
  const std::size_t n2 = grid.n2();
  const double h = grid.h2();
  auto N = detail::rows_forward(heat_neumann(f, t, pad), pad);
  auto D = detail::rows_forward(heat_dirichlet(f, t, pad), pad);
  auto F = detail::rows_forward(f, pad);
  detail::RowSpectra o(grid, pad, n2);
  std::vector<cplx> diff(n2), sum(n2), Lv(n2), tmp(n2);
  for (std::size_t k = 0; k < o.mc; ++k) {
    const double xi = o.xi(k);
    for (std::size_t j = 0; j < n2; ++j) {
      diff[j] = N.row(j)[k] - D.row(j)[k];
      sum[j] = N.row(j)[k] + D.row(j)[k];
    }
    detail::forward_exp(xi, h, diff.data(), n2, 1, Lv.data());
    detail::backward_exp(xi, h, sum.data(), n2, 1, tmp.data());
    const cplx msum = tmp[0];
    detail::backward_exp(xi, h, F.c.data() + k, n2, F.mc, tmp.data());
    const cplx u0 = tmp[0];
    for (std::size_t j = 0; j < n2; ++j) {
      double e = std::exp(-xi * grid.x2(j));
      o.row(j)[k] = N.row(j)[k] - xi * Lv[j] - xi * e * msum + 2.0 * xi * e * u0;
    }
  }
  return detail::rows_inverse(o);
}

double eta_bound(double y2) {
  if (!(y2 >= 0.0)) throw InvalidArgument("eta_bound: y2 must be >= 0");
  const Rule& q = gl_rule(16);
  auto integrate = [&](double a, double b, auto f) {
    if (b <= a) return 0.0;
    const auto np = static_cast<std::size_t>(std::ceil((b - a) / 0.25));
    std::vector<double> terms;
    for (std::size_t p = 0; p < np; ++p) {
      double lo = a + (b - a) * static_cast<double>(p) / np, hi = a + (b - a) * static_cast<double>(p + 1) / np;
      double s = 0.0;
      for (std::size_t m = 0; m < q.x.size(); ++m) s += q.w[m] * f(0.5 * (lo + hi) + 0.5 * (hi - lo) * q.x[m]);
      terms.push_back(0.5 * (hi - lo) * s);
    }
    return pairwise_sum(terms);
  };
  double first = integrate(0.0, std::min(y2, 40.0), [](double r) { return r * gauss1d(r, 1.0); });
  double second = y2 * integrate(y2, y2 + 40.0, [](double r) { return gauss1d(r, 1.0); });
  return first + second;
}

}  // namespace hpv
