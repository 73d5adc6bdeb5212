#include "hpvort/semigroups.hpp"

#include <cmath>

#include "hpvort/errors.hpp"
#include "hpvort/kernels.hpp"
#include "hpvort/line_ops.hpp"
#include "hpvort/row_spectral.hpp"

namespace hpv {
namespace {

using detail::cplx;

void require_time(double t) {
  if (!(t > 0.0)) throw InvalidArgument("heat semigroup: time must be positive");
}

// x1 heat on every row.
ScalarField heat_rows(const ScalarField& f, double t, int pad) {
  auto s = detail::rows_forward(f, pad);
  for (std::size_t j = 0; j < s.rows; ++j) {
    cplx* r = s.row(j);
    for (std::size_t k = 0; k < s.mc; ++k) {
      double xi = s.xi(k);
      r[k] *= std::exp(-t * xi * xi);
    }
  }
  return detail::rows_inverse(s);
}

// x2 heat on every column, even (Neumann) or odd (Dirichlet) image, by cubic
// product integration so that one-sided data near x2 = 0 keep 4th order.
void heat_columns(ScalarField& f, double t, bool even) {
  const auto& g = f.grid;
  const std::size_t n1 = g.n1(), n2 = g.n2();
  auto D = detail::gauss_direct_matrix(n2, g.h2(), t);
  auto I = detail::gauss_image_matrix(n2, g.h2(), t);
  const double sign = even ? 1.0 : -1.0;
  std::vector<double> out(f.values.size(), 0.0);
  for (std::size_t i = 0; i < n2; ++i) {
    double* o = out.data() + i * n1;
    for (std::size_t l = 0; l < n2; ++l) {
      double m = D[i * n2 + l] + sign * I[i * n2 + l];
      if (m == 0.0) continue;
      const double* src = f.values.data() + l * n1;
      for (std::size_t q = 0; q < n1; ++q) o[q] += m * src[q];
    }
  }
  if (!even)
    for (std::size_t q = 0; q < n1; ++q) out[q] = 0.0;
  f.values = std::move(out);
}

ScalarField heat_field(const ScalarField& f, double t, int pad, bool even) {
  require_time(t);
  f.check_finite();
  ScalarField r = heat_rows(f, t, pad);
  heat_columns(r, t, even);
  return r;
}

void add_point_heat(ScalarField& out, const std::vector<WeightedPoint>& pts, double t, double sign) {
  const auto& g = out.grid;
  std::vector<double> a(g.n1()), b(g.n2());
  for (const auto& p : pts) {
    for (std::size_t i = 0; i < g.n1(); ++i) a[i] = gauss1d(g.x1(i) - p.pos.x1, t);
    for (std::size_t j = 0; j < g.n2(); ++j)
      b[j] = gauss1d(g.x2(j) - p.pos.x2, t) + sign * gauss1d(g.x2(j) + p.pos.x2, t);
    for (std::size_t j = 0; j < g.n2(); ++j)
      for (std::size_t i = 0; i < g.n1(); ++i) out.at(i, j) += p.weight * a[i] * b[j];
  }
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

ScalarField heat_measure(const VorticityMeasure& mu, const HalfPlaneGrid& grid, double t, int pad,
                         bool even) {
  require_time(t);
  mu.validate();
  ScalarField out(grid);
  double sign = even ? 1.0 : -1.0;
  add_point_heat(out, mu.atoms, t, sign);
  add_point_heat(out, mu.sheet, t, sign);
  if (mu.density) {
    if (!(mu.density->grid == grid)) throw InvalidArgument("density must live on the output grid");
    out = axpy(1.0, heat_field(*mu.density, t, pad, even), out);
  }
  if (mu.boundary_sheet && even) {
    LineSamples b = line_heat(line_on_grid(*mu.boundary_sheet, grid), t, pad);
    for (std::size_t j = 0; j < grid.n2(); ++j) {
      double w = 2.0 * gauss1d(grid.x2(j), t);
      for (std::size_t i = 0; i < grid.n1(); ++i) out.at(i, j) += w * b.values[i];
    }
  }
  return out;
}

bool on_node(const HalfPlaneGrid& g, Point2 p, std::size_t& i, std::size_t& j) {
  double s = (p.x1 - g.x1_min()) / g.h1(), r = p.x2 / g.h2();
  double si = std::round(s), rj = std::round(r);
  if (std::abs(s - si) > 1e-9 || std::abs(r - rj) > 1e-9) return false;
  if (si < 0 || rj < 0 || si >= g.n1() || rj >= g.n2()) return false;
  i = static_cast<std::size_t>(si);
  j = static_cast<std::size_t>(rj);
  return true;
}

// Point sources for the inverse Laplacians; sign = -1 Dirichlet, +1 Neumann.
void add_point_potential(ScalarField& out, const std::vector<WeightedPoint>& pts, double sign) {
  const auto& g = out.grid;
  for (const auto& p : pts) {
    if (sign < 0 && p.pos.x2 == 0.0) continue;  // D vanishes for sources on the boundary
    std::size_t si = 0, sj = 0;
    bool hit = on_node(g, p.pos, si, sj);
    for (std::size_t j = 0; j < g.n2(); ++j)
      for (std::size_t i = 0; i < g.n1(); ++i) {
        Point2 x = g.node(i, j);
        Point2 img{x.x1 - p.pos.x1, x.x2 + p.pos.x2};
        double direct;
        if (hit && i == si && j == sj)
          direct = cell_average_E(Point2{0.0, 0.0}, 0.5 * g.h1(), 0.5 * g.h2());
        else
          direct = log_potential(Point2{x.x1 - p.pos.x1, x.x2 - p.pos.x2});
        double image;
        if (std::hypot(img.x1, img.x2) < eps_singular)
          image = cell_average_E(Point2{0.0, 0.0}, 0.5 * g.h1(), 0.5 * g.h2());
        else
          image = log_potential(img);
        out.at(i, j) += p.weight * (direct + sign * image);
      }
  }
}

// Density part. sign = -1: kernel (e^{-k|x-y|} - e^{-k(x+y)}) / 2k,
// sign = +1: (e^{-k|x-y|} + e^{-k(x+y)}) / 2k with the 1/k mode removed.
ScalarField density_potential(const ScalarField& f, int pad, double sign) {
  const auto& g = f.grid;
  auto s = detail::rows_forward(f, pad);
  const std::size_t n2 = g.n2();
  const double h = g.h2();
  std::vector<cplx> L(n2), F(n2), yf(n2), Ly(n2), Fy(n2);
  for (std::size_t k = 0; k < s.mc; ++k) {
    const double xi = s.xi(k);
    cplx* col = s.c.data() + k;
    const std::size_t stride = s.mc;
    if (k == 0) {
      for (std::size_t j = 0; j < n2; ++j) yf[j] = g.x2(j) * col[j * stride];
      detail::forward_exp(0.0, h, col, n2, stride, L.data());
      detail::backward_exp(0.0, h, col, n2, stride, F.data());
      detail::forward_exp(0.0, h, yf.data(), n2, 1, Ly.data());
      detail::backward_exp(0.0, h, yf.data(), n2, 1, Fy.data());
      for (std::size_t j = 0; j < n2; ++j) {
        double x = g.x2(j);
        // Dirichlet: int min(x, y) f;  Neumann finite part: -int max(x, y) f
        col[j * stride] = sign < 0 ? Ly[j] + x * F[j] : -(x * L[j] + Fy[j]);
      }
      continue;
    }
    detail::forward_exp(xi, h, col, n2, stride, L.data());
    detail::backward_exp(xi, h, col, n2, stride, F.data());
    const cplx F0 = F[0];
    for (std::size_t j = 0; j < n2; ++j)
      col[j * stride] = (L[j] + F[j] + sign * std::exp(-xi * g.x2(j)) * F0) / (2.0 * xi);
  }
  return detail::rows_inverse(s);
}

ScalarField inverse_laplacian(const VorticityMeasure& mu, const HalfPlaneGrid& grid, int pad, double sign) {
  mu.validate();
  ScalarField out(grid);
  add_point_potential(out, mu.atoms, sign);
  add_point_potential(out, mu.sheet, sign);
  if (mu.density) {
    if (!(mu.density->grid == grid)) throw InvalidArgument("density must live on the output grid");
    out = axpy(1.0, density_potential(*mu.density, pad, sign), out);
  }
  if (mu.boundary_sheet && sign > 0)
    throw InvalidArgument("inv_laplace_neumann: boundary layers are not supported");
  return out;
}

}  // namespace

ScalarField heat_neumann(const ScalarField& f, double t, int pad) { return heat_field(f, t, pad, true); }
ScalarField heat_dirichlet(const ScalarField& f, double t, int pad) { return heat_field(f, t, pad, false); }

ScalarField heat_neumann(const VorticityMeasure& mu, const HalfPlaneGrid& grid, double t, int pad) {
  return heat_measure(mu, grid, t, pad, true);
}

ScalarField heat_dirichlet(const VorticityMeasure& mu, const HalfPlaneGrid& grid, double t, int pad) {
  return heat_measure(mu, grid, t, pad, false);
}

ScalarField inv_laplace_dirichlet(const VorticityMeasure& mu, const HalfPlaneGrid& grid, int pad) {
  return inverse_laplacian(mu, grid, pad, -1.0);
}

ScalarField inv_laplace_neumann(const VorticityMeasure& mu, const HalfPlaneGrid& grid, int pad) {
  return inverse_laplacian(mu, grid, pad, 1.0);
}

}  // namespace hpv
