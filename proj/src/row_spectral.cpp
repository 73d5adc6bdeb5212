#include "hpvort/row_spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "hpvort/errors.hpp"
#include "hpvort/fft.hpp"

namespace hpv::detail {
namespace {

using Poly = std::array<double, 4>;  // c0 + c1 v + c2 v^2 + c3 v^3

// Lagrange basis on the 4 nodes o[0..3], as monomial coefficients.
std::array<Poly, 4> lagrange_basis(const std::array<double, 4>& o) {
  std::array<Poly, 4> out{};
  for (int m = 0; m < 4; ++m) {
    Poly p{1, 0, 0, 0};
    double denom = 1.0;
    for (int q = 0; q < 4; ++q) {
      if (q == m) continue;
      Poly r{0, 0, 0, 0};
      for (int d = 0; d < 3; ++d) {
        r[d + 1] += p[d];
        r[d] -= o[q] * p[d];
      }
      p = r;
      denom *= o[m] - o[q];
    }
    for (double& c : p) c /= denom;
    out[m] = p;
  }
  return out;
}

// Offsets of the stencil nodes relative to the segment start, by type
// (type = segment index - stencil base, in {0, 1, 2}).
const std::array<std::array<Poly, 4>, 3>& basis_table() {
  static const std::array<std::array<Poly, 4>, 3> tbl = [] {
    std::array<std::array<Poly, 4>, 3> t{};
    for (int type = 0; type < 3; ++type) {
      std::array<double, 4> o{};
      for (int m = 0; m < 4; ++m) o[m] = static_cast<double>(m - type);
      t[type] = lagrange_basis(o);
    }
    return t;
  }();
  return tbl;
}

std::size_t stencil_base(std::size_t i, std::size_t n) {
  if (i == 0) return 0;
  return std::min(i - 1, n - 4);
}

// nu_p(kappa) = int_0^1 v^p exp(-kappa v) dv, p = 0..3
std::array<double, 4> exp_moments(double kappa) {
  std::array<double, 4> nu{};
  if (kappa <= 1.0) {
    for (int p = 0; p < 4; ++p) {
      double term = 1.0, s = 0.0;
      for (int n = 0; n < 40; ++n) {
        s += term / static_cast<double>(p + n + 1);
        term *= -kappa / static_cast<double>(n + 1);
      }
      nu[p] = s;
    }
  } else {
    double e = std::exp(-kappa);
    nu[0] = (1.0 - e) / kappa;
    for (int p = 1; p < 4; ++p) nu[p] = (p * nu[p - 1] - e) / kappa;
  }
  return nu;
}

// Per-type segment weights: w[type][m] = int_0^1 kernel(v) l_m(v) dv where
// kernel is exp(-kappa v) (backward) or exp(-kappa (1 - v)) (forward).
struct ExpWeights {
  std::array<std::array<double, 4>, 3> back{}, fwd{};
  double decay = 1.0;
};

ExpWeights exp_weights(double kappa) {
  ExpWeights w;
  auto nu = exp_moments(kappa);
  // rho_p = int_0^1 exp(-kappa (1 - v)) v^p dv = int_0^1 exp(-kappa w) (1 - w)^p dw
  std::array<double, 4> rho{nu[0], nu[0] - nu[1], nu[0] - 2 * nu[1] + nu[2],
                            nu[0] - 3 * nu[1] + 3 * nu[2] - nu[3]};
  const auto& tbl = basis_table();
  for (int type = 0; type < 3; ++type)
    for (int m = 0; m < 4; ++m) {
      double b = 0, f = 0;
      for (int p = 0; p < 4; ++p) {
        b += tbl[type][m][p] * nu[p];
        f += tbl[type][m][p] * rho[p];
      }
      w.back[type][m] = b;
      w.fwd[type][m] = f;
    }
  w.decay = std::exp(-kappa);
  return w;
}

template <class Kern>
std::vector<double> gauss_matrix(std::size_t n, double h, double t, Kern arg_of) {
  if (n < 4) throw ResolutionError("x2 product integration needs at least 4 rows");
  std::vector<double> B(n * n, 0.0);
  std::vector<double> gx, gw;
  gauss_legendre(16, gx, gw);
  const auto& tbl = basis_table();
  const double st = std::sqrt(t);
  const std::size_t nsub = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(h / (3.0 * st))));
  const double cut = 40.0 * st;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j + 1 < n; ++j) {
      // kernel argument at v in [0, 1] is affine: a0 + a1 v
      auto [a0, a1] = arg_of(i, j);
      double lo = std::min(std::abs(a0), std::abs(a0 + a1));
      if ((a0 > 0) != (a0 + a1 > 0)) lo = 0.0;
      if (lo > cut) continue;
      const std::size_t base = stencil_base(j, n);
      const int type = static_cast<int>(j - base);
      std::array<double, 4> acc{};
      for (std::size_t s = 0; s < nsub; ++s) {
        double v0 = static_cast<double>(s) / nsub, v1 = static_cast<double>(s + 1) / nsub;
        for (std::size_t q = 0; q < gx.size(); ++q) {
          double v = 0.5 * (v0 + v1) + 0.5 * (v1 - v0) * gx[q];
          double wq = 0.5 * (v1 - v0) * gw[q];
          double r = a0 + a1 * v;
          double g = std::exp(-r * r / (4.0 * t)) / std::sqrt(4.0 * M_PI * t) * wq;
          for (int m = 0; m < 4; ++m) {
            const Poly& P = tbl[type][m];
            acc[m] += g * (P[0] + v * (P[1] + v * (P[2] + v * P[3])));
          }
        }
      }
      for (int m = 0; m < 4; ++m) B[i * n + base + m] += h * acc[m];
    }
  }
  return B;
}

}  // namespace

std::size_t padded_length(std::size_t n, int pad) {
  if (pad < 1) throw InvalidArgument("pad factor must be >= 1");
  return fft::nice_size(static_cast<std::size_t>(pad) * n);
}

RowSpectra::RowSpectra(const HalfPlaneGrid& g, int pad, std::size_t nrows)
    : grid(g), m(padded_length(g.n1(), pad)), mc(m / 2 + 1), rows(nrows), c(nrows * mc) {}

double RowSpectra::xi(std::size_t k) const {
  return 2.0 * M_PI * static_cast<double>(k) / (static_cast<double>(m) * grid.h1());
}

RowSpectra rows_forward(const ScalarField& f, int pad) {
  const auto& g = f.grid;
  RowSpectra s(g, pad, g.n2());
  std::vector<double> buf(s.m);
  std::vector<cplx> out;
  for (std::size_t j = 0; j < g.n2(); ++j) {
    std::fill(buf.begin(), buf.end(), 0.0);
    for (std::size_t i = 0; i < g.n1(); ++i) buf[i] = f.at(i, j);
    fft::r2c(buf, out);
    std::copy(out.begin(), out.end(), s.row(j));
  }
  return s;
}

std::vector<double> row_inverse_padded(const RowSpectra& s, std::size_t j) {
  std::vector<cplx> in(s.row(j), s.row(j) + s.mc);
  if (s.m % 2 == 0) in[s.m / 2] = cplx(in[s.m / 2].real(), 0.0);
  std::vector<double> out;
  fft::c2r(in, s.m, out);
  for (double& v : out) v /= static_cast<double>(s.m);
  return out;
}

ScalarField rows_inverse(const RowSpectra& s) {
  ScalarField f(s.grid);
  for (std::size_t j = 0; j < s.grid.n2() && j < s.rows; ++j) {
    auto row = row_inverse_padded(s, j);
    for (std::size_t i = 0; i < s.grid.n1(); ++i) f.at(i, j) = row[i];
  }
  return f;
}

void backward_exp(double k, double h, const cplx* f, std::size_t n, std::size_t stride, cplx* F) {
  if (n < 4) throw ResolutionError("x2 product integration needs at least 4 rows");
  ExpWeights w = exp_weights(k * h);
  F[n - 1] = 0.0;
  for (std::size_t ii = n - 1; ii-- > 0;) {
    std::size_t base = stencil_base(ii, n);
    int type = static_cast<int>(ii - base);
    cplx seg = 0.0;
    for (int m = 0; m < 4; ++m) seg += w.back[type][m] * f[(base + m) * stride];
    F[ii] = w.decay * F[ii + 1] + h * seg;
  }
}

void forward_exp(double k, double h, const cplx* f, std::size_t n, std::size_t stride, cplx* L) {
  if (n < 4) throw ResolutionError("x2 product integration needs at least 4 rows");
  ExpWeights w = exp_weights(k * h);
  L[0] = 0.0;
  for (std::size_t ii = 0; ii + 1 < n; ++ii) {
    std::size_t base = stencil_base(ii, n);
    int type = static_cast<int>(ii - base);
    cplx seg = 0.0;
    for (int m = 0; m < 4; ++m) seg += w.fwd[type][m] * f[(base + m) * stride];
    L[ii + 1] = w.decay * L[ii] + h * seg;
  }
}

std::vector<double> gauss_image_matrix(std::size_t n, double h, double t) {
  return gauss_matrix(n, h, t, [h](std::size_t i, std::size_t j) {
    return std::pair<double, double>{static_cast<double>(i + j) * h, h};
  });
}

std::vector<double> gauss_direct_matrix(std::size_t n, double h, double t) {
  return gauss_matrix(n, h, t, [h](std::size_t i, std::size_t j) {
    return std::pair<double, double>{(static_cast<double>(i) - static_cast<double>(j)) * h, -h};
  });
}

double image_tail(double rho, double L) {
  const double u = M_PI * rho / L;
  double s;
  if (std::abs(u) < 1e-3) {
    s = 1.0 / 3.0 + u * u / 15.0;
  } else {
    const double sn = std::sin(u);
    s = 1.0 / (sn * sn) - 1.0 / (u * u);
  }
  return M_PI * s / (L * L);
}

std::vector<double> row_image_tails(const ScalarField& f, double L) {
  const auto& g = f.grid;
  const std::size_t n1 = g.n1(), n2 = g.n2();
  // image_tail depends on the node offset only
  std::vector<double> kern(2 * n1 - 1);
  for (std::size_t d = 0; d < kern.size(); ++d)
    kern[d] = g.h1() * image_tail((static_cast<double>(d) - static_cast<double>(n1 - 1)) * g.h1(), L);
  std::vector<double> out(n2 * n1, 0.0);
  for (std::size_t l = 0; l < n2; ++l) {
    const double* fl = f.values.data() + l * n1;
    bool any = false;
    for (std::size_t i = 0; i < n1 && !any; ++i) any = fl[i] != 0.0;
    if (!any) continue;
    double* ol = out.data() + l * n1;
    for (std::size_t i = 0; i < n1; ++i) {
      double acc = 0.0;
      for (std::size_t q = 0; q < n1; ++q) acc += fl[q] * kern[i + n1 - 1 - q];
      ol[i] = acc;
    }
  }
  return out;
}

}  // namespace hpv::detail
