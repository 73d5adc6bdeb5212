#include "hpvort/biot_savart.hpp"

#include <cmath>

#include "hpvort/errors.hpp"
#include "hpvort/kernels.hpp"
#include "hpvort/parallel.hpp"
#include "hpvort/row_spectral.hpp"
#include "hpvort/vorticity_semigroup.hpp"
#include "hpvort/semigroups.hpp"

namespace hpv {
namespace {

using detail::cplx;

bool same_node(Point2 a, Point2 b) { return std::hypot(a.x1 - b.x1, a.x2 - b.x2) < eps_singular; }

void add_atoms(VectorField& u, const std::vector<WeightedPoint>& pts, std::size_t& flagged) {
  const auto& g = u.grid;
  std::vector<std::size_t> hits(g.n2(), 0);
  parallel_for(g.n2(), [&](std::size_t j) {
    for (std::size_t i = 0; i < g.n1(); ++i) {
      Point2 x = g.node(i, j);
      double a = 0, b = 0;
      for (const auto& p : pts) {
        if (p.pos.x2 == 0.0) continue;
        std::array<double, 2> k;
        if (same_node(x, p.pos)) {
          // exclude the self term, keep the image
          double e1 = x.x1 - p.pos.x1, e2 = x.x2 + p.pos.x2;
          double r2 = e1 * e1 + e2 * e2;
          k = {e2 / (2 * M_PI * r2), -e1 / (2 * M_PI * r2)};
          ++hits[j];
        } else {
          k = biot_savart_kernel(x, p.pos);
        }
        a += p.weight * k[0];
        b += p.weight * k[1];
      }
      u.u1[g.index(i, j)] += a;
      u.u2[g.index(i, j)] += b;
    }
  });
  for (auto h : hits) flagged += h;
}

void add_sheet(VectorField& u, const std::vector<WeightedPoint>& pts) {
  const auto& g = u.grid;
  const double ha = 0.5 * g.h1(), hb = 0.5 * g.h2();
  const double near = std::max(g.h1(), g.h2());
  parallel_for(g.n2(), [&](std::size_t j) {
    for (std::size_t i = 0; i < g.n1(); ++i) {
      Point2 x = g.node(i, j);
      double a = 0, b = 0;
      for (const auto& p : pts) {
        if (p.pos.x2 == 0.0) continue;
        Point2 d{x.x1 - p.pos.x1, x.x2 - p.pos.x2};
        std::array<double, 2> k;
        if (std::abs(d.x1) < near && std::abs(d.x2) < near) {
          auto c = cell_average_grad_perp_E(d, ha, hb);
          double e1 = x.x1 - p.pos.x1, e2 = x.x2 + p.pos.x2;
          double r2 = e1 * e1 + e2 * e2;
          k = {c[0] + e2 / (2 * M_PI * r2), c[1] - e1 / (2 * M_PI * r2)};
        } else {
          k = biot_savart_kernel(x, p.pos);
        }
        a += p.weight * k[0];
        b += p.weight * k[1];
      }
      u.u1[g.index(i, j)] += a;
      u.u2[g.index(i, j)] += b;
    }
  });
}

void add_point_trace(LineSamples& out, const std::vector<WeightedPoint>& pts) {
  for (std::size_t i = 0; i < out.n(); ++i) {
    double x = out.x(i), s = 0.0;
    for (const auto& p : pts)
      if (p.pos.x2 > 0.0) s += p.weight * poisson_P(x - p.pos.x1, p.pos.x2);
    out.values[i] += s;
  }
}

// sum_{m != 0} P_y(x + m L) = Im[cot(pi z / L) / L - 1 / (pi z)], z = x - i y.
double poisson_images(double x, double y, double L) {
  const cplx w = M_PI * cplx(x, -y) / L;
  cplx c;
  if (std::abs(w) < 0.25) {
    const cplx w2 = w * w;
    c = -w * (1.0 / 3.0 + w2 * (1.0 / 45.0 + w2 * (2.0 / 945.0 + w2 * (1.0 / 4725.0 + w2 * 2.0 / 93555.0))));
  } else {
    c = std::cos(w) / std::sin(w) - 1.0 / w;
  }
  return std::imag(c) / L;
}

// u^1(x1, 0) for a gridded density: int_0^inf e^{-|xi| y} fhat(xi, y) dy per mode.
LineSamples density_trace(const ScalarField& f, int pad) {
  const auto& g = f.grid;
  auto s = detail::rows_forward(f, pad);
  std::vector<cplx> F(g.n2());
  detail::RowSpectra top(g, pad, 1);
  for (std::size_t k = 0; k < s.mc; ++k) {
    detail::backward_exp(s.xi(k), g.h2(), s.c.data() + k, g.n2(), s.mc, F.data());
    top.row(0)[k] = F[0];
  }
  auto row = detail::row_inverse_padded(top, 0);
  LineSamples out(g.x1_min(), g.x1_max(), g.n1());
  for (std::size_t i = 0; i < g.n1(); ++i) out.values[i] = row[i];
  // the transform sees the period-L sum of P_y; remove its images exactly
  const double L = static_cast<double>(s.m) * g.h1();
  const std::size_t n1 = g.n1();
  const auto w = detail::gregory_weights(g.n2(), g.h2());
  std::vector<double> kern(2 * n1 - 1);
  for (std::size_t l = 1; l < g.n2(); ++l) {
    const double* fl = f.values.data() + l * n1;
    bool any = false;
    for (std::size_t i = 0; i < n1 && !any; ++i) any = fl[i] != 0.0;
    if (!any) continue;
    for (std::size_t d = 0; d < kern.size(); ++d)
      kern[d] = poisson_images((static_cast<double>(d) - static_cast<double>(n1 - 1)) * g.h1(), g.x2(l), L);
    for (std::size_t i = 0; i < n1; ++i) {
      double acc = 0.0;
      for (std::size_t q = 0; q < n1; ++q) acc += fl[q] * kern[i + n1 - 1 - q];
      out.values[i] -= w[l] * g.h1() * acc;
    }
  }
  return out;
}

}  // namespace

VectorField grad_perp_h(const ScalarField& psi) {
  const auto& g = psi.grid;
  VectorField u(g);
  const std::size_t n1 = g.n1(), n2 = g.n2();
  const double h1 = g.h1(), h2 = g.h2();
  for (std::size_t j = 0; j < n2; ++j)
    for (std::size_t i = 0; i < n1; ++i) {
      double d2;
      if (j == 0)
        d2 = psi.at(i, 1) / h2;  // odd ghost psi(-h) = -psi(h)
      else if (j + 1 == n2)
        d2 = (3 * psi.at(i, j) - 4 * psi.at(i, j - 1) + psi.at(i, j - 2)) / (2 * h2);
      else
        d2 = (psi.at(i, j + 1) - psi.at(i, j - 1)) / (2 * h2);
      double d1;
      if (i == 0)
        d1 = (-3 * psi.at(0, j) + 4 * psi.at(1, j) - psi.at(2, j)) / (2 * h1);
      else if (i + 1 == n1)
        d1 = (3 * psi.at(i, j) - 4 * psi.at(i - 1, j) + psi.at(i - 2, j)) / (2 * h1);
      else
        d1 = (psi.at(i + 1, j) - psi.at(i - 1, j)) / (2 * h1);
      u.u1[g.index(i, j)] = d2;
      u.u2[g.index(i, j)] = j == 0 ? 0.0 : -d1;
    }
  return u;
}

ScalarField divergence_h(const VectorField& u) {
  const auto& g = u.grid;
  ScalarField d(g);
  for (std::size_t j = 1; j + 1 < g.n2(); ++j)
    for (std::size_t i = 1; i + 1 < g.n1(); ++i) {
      double a = (u.u1[g.index(i + 1, j)] - u.u1[g.index(i - 1, j)]) / (2 * g.h1());
      double b = (u.u2[g.index(i, j + 1)] - u.u2[g.index(i, j - 1)]) / (2 * g.h2());
      d.at(i, j) = a + b;
    }
  return d;
}

VectorField velocity_from_measure(const VorticityMeasure& mu, const HalfPlaneGrid& grid, int pad,
                                  std::size_t* flagged) {
  mu.validate();
  VectorField u(grid);
  std::size_t hits = 0;
  add_atoms(u, mu.atoms, hits);
  add_sheet(u, mu.sheet);
  if (mu.density) {
    if (!(mu.density->grid == grid)) throw InvalidArgument("density must live on the output grid");
    VorticityMeasure d;
    d.density = mu.density;
    VectorField v = grad_perp_h(inv_laplace_dirichlet(d, grid, pad));
    for (std::size_t k = 0; k < grid.size(); ++k) {
      u.u1[k] += v.u1[k];
      u.u2[k] += v.u2[k];
    }
  }
  if (flagged) *flagged = hits;
  return u;
}

LineSamples boundary_trace(const VorticityMeasure& mu, double x1_min, double x1_max, std::size_t n,
                           int pad) {
  mu.validate();
  LineSamples out(x1_min, x1_max, n);
  add_point_trace(out, mu.atoms);
  add_point_trace(out, mu.sheet);
  if (mu.density) {
    const auto& g = mu.density->grid;
    if (n != g.n1() || x1_min != g.x1_min() || x1_max != g.x1_max())
      throw InvalidArgument("boundary_trace: density needs the grid's own boundary row");
    auto d = density_trace(*mu.density, pad);
    for (std::size_t i = 0; i < n; ++i) out.values[i] += d.values[i];
  }
  return out;
}

LineSamples boundary_trace(const VorticityMeasure& mu, const HalfPlaneGrid& grid, int pad) {
  return boundary_trace(mu, grid.x1_min(), grid.x1_max(), grid.n1(), pad);
}

VorticityMeasure normalize_measure(const VorticityMeasure& mu, const HalfPlaneGrid& grid, int pad) {
  LineSamples tr = boundary_trace(mu, grid, pad);
  VorticityMeasure out = mu;
  LineSamples layer(grid.x1_min(), grid.x1_max(), grid.n1());
  if (mu.boundary_sheet) {
    const auto& b = *mu.boundary_sheet;
    bool aligned = b.n() == grid.n1() && b.x1_min == grid.x1_min() && b.x1_max == grid.x1_max();
    for (std::size_t i = 0; i < grid.n1(); ++i) {
      double x = grid.x1(i);
      layer.values[i] = aligned ? b.values[i] : (x < b.x1_min || x > b.x1_max ? 0.0 : interpolate(b, x));
    }
  }
  for (std::size_t i = 0; i < grid.n1(); ++i) layer.values[i] -= tr.values[i];
  out.boundary_sheet = layer;
  return out;
}

}  // namespace hpv
