#include "hpvort/navier_stokes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hpvort/biot_savart.hpp"
#include "hpvort/errors.hpp"
#include "hpvort/line_ops.hpp"
#include "hpvort/row_spectral.hpp"

namespace hpv {

using detail::cplx;

void SolverOptions::validate() const {
  if (!(tol > 0.0)) throw ConfigError("solver tol must be positive");
  if (max_iter < 1) throw ConfigError("solver max_iter must be >= 1");
  if (!(q >= 1.0 && q < 2.0)) throw ConfigError("solver q must lie in [1, 2)");
  if (!(p > 2.0) || std::isinf(p)) throw ConfigError("solver p must lie in (2, inf)");
  if (duhamel_nodes < 2) throw ConfigError("duhamel_nodes must be >= 2");
  kernel.validate();
}

namespace {

// 4th-order x2 derivative of a field, one-sided 5-point stencils at the edges.
ScalarField d2_fourth(const ScalarField& f) {
  const auto& g = f.grid;
  const std::size_t n2 = g.n2();
  if (n2 < 5) throw ResolutionError("x2 differences need at least 5 rows");
  ScalarField d(g);
  const double c = 1.0 / (12.0 * g.h2());
  for (std::size_t j = 0; j < n2; ++j)
    for (std::size_t i = 0; i < g.n1(); ++i) {
      auto F = [&](std::size_t jj) { return f.at(i, jj); };
      double v;
      if (j == 0)
        v = -25 * F(0) + 48 * F(1) - 36 * F(2) + 16 * F(3) - 3 * F(4);
      else if (j == 1)
        v = -3 * F(0) - 10 * F(1) + 18 * F(2) - 6 * F(3) + F(4);
      else if (j + 2 == n2)
        v = 3 * F(n2 - 1) + 10 * F(n2 - 2) - 18 * F(n2 - 3) + 6 * F(n2 - 4) - F(n2 - 5);
      else if (j + 1 == n2)
        v = 25 * F(n2 - 1) - 48 * F(n2 - 2) + 36 * F(n2 - 3) - 16 * F(n2 - 4) + 3 * F(n2 - 5);
      else
        v = -F(j + 2) + 8 * F(j + 1) - 8 * F(j - 1) + F(j - 2);
      d.at(i, j) = c * v;
    }
  return d;
}

ScalarField d1_spectral(const ScalarField& f, int pad) {
  auto s = detail::rows_forward(f, pad);
  for (std::size_t j = 0; j < s.rows; ++j) {
    cplx* r = s.row(j);
    for (std::size_t k = 0; k < s.mc; ++k) r[k] *= cplx(0.0, s.xi(k));
  }
  return detail::rows_inverse(s);
}

// Linear interpolation weights of time s on the sample times.
void time_bracket(const std::vector<double>& times, double s, std::size_t& a, std::size_t& b, double& th) {
  if (s <= times.front()) {
    a = b = 0;
    th = 0.0;
    return;
  }
  if (s >= times.back()) {
    a = b = times.size() - 1;
    th = 0.0;
    return;
  }
  b = static_cast<std::size_t>(std::upper_bound(times.begin(), times.end(), s) - times.begin());
  a = b - 1;
  th = (s - times[a]) / (times[b] - times[a]);
}

ScalarField interp_field(const std::vector<ScalarField>& f, const std::vector<double>& times, double s) {
  std::size_t a, b;
  double th;
  time_bracket(times, s, a, b, th);
  if (a == b) return f[a];
  return axpy(th, f[b], scaled(f[a], 1.0 - th));
}

std::vector<ScalarField> path_fluxes(const SolutionPath& path, int pad) {
  std::vector<ScalarField> out;
  for (std::size_t k = 0; k < path.times.size(); ++k) out.push_back(neg_div_flux(path.omega[k], path.velocity[k], pad));
  return out;
}

void check_path(const SolutionPath& path) {
  if (path.times.empty() || path.omega.size() != path.times.size() || path.velocity.size() != path.times.size())
    throw ConfigError("Duhamel term needs a non-empty, consistently sampled path");
}

ScalarField duhamel_from_fluxes(const std::vector<ScalarField>& flux, const std::vector<double>& times, double t,
                                const KernelConfig& cfg, std::size_t nodes) {
  std::vector<double> x, w;
  gauss_legendre(nodes, x, w);
  ScalarField acc(flux.front().grid);
  for (std::size_t m = 0; m < nodes; ++m) {
    const double sigma = 0.5 * (x[m] + 1.0), wm = 0.5 * w[m];
    const double tau = t * sigma * sigma, s = t - tau;
    ScalarField f = interp_field(flux, times, s);
    ScalarField Tf = apply_T_composite(f, tau, cfg);
    acc = axpy(2.0 * t * sigma * wm, Tf, acc);
  }
  return acc;
}

double relative_l1_change(const SolutionPath& a, const SolutionPath& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < a.times.size(); ++k) {
    num = std::max(num, lq_norm(axpy(-1.0, a.omega[k], b.omega[k]), 1.0));
    den = std::max(den, lq_norm(a.omega[k], 1.0));
  }
  if (num == 0.0) return 0.0;
  return den > 0.0 ? num / den : std::numeric_limits<double>::infinity();
}

double weighted_lp(const HalfPlaneGrid& g, const std::vector<double>& mag, double p) {
  if (std::isinf(p)) return max_abs(mag);
  std::vector<double> terms(mag.size());
  for (std::size_t j = 0; j < g.n2(); ++j)
    for (std::size_t i = 0; i < g.n1(); ++i) {
      std::size_t k = g.index(i, j);
      terms[k] = g.weight(i, j) * std::pow(mag[k], p);
    }
  return std::pow(pairwise_sum(terms), 1.0 / p);
}

// Centred differences (one-sided at the edges) of one component.
void grad_component(const HalfPlaneGrid& g, const std::vector<double>& v, std::vector<double>& d1,
                    std::vector<double>& d2) {
  d1.assign(v.size(), 0.0);
  d2.assign(v.size(), 0.0);
  auto at = [&](std::size_t i, std::size_t j) { return v[g.index(i, j)]; };
  for (std::size_t j = 0; j < g.n2(); ++j)
    for (std::size_t i = 0; i < g.n1(); ++i) {
      double a, b;
      if (i == 0) a = (at(1, j) - at(0, j)) / g.h1();
      else if (i + 1 == g.n1()) a = (at(i, j) - at(i - 1, j)) / g.h1();
      else a = (at(i + 1, j) - at(i - 1, j)) / (2 * g.h1());
      if (j == 0) b = (at(i, 1) - at(i, 0)) / g.h2();
      else if (j + 1 == g.n2()) b = (at(i, j) - at(i, j - 1)) / g.h2();
      else b = (at(i, j + 1) - at(i, j - 1)) / (2 * g.h2());
      d1[g.index(i, j)] = a;
      d2[g.index(i, j)] = b;
    }
}

VectorField minus(const VectorField& a, const VectorField& b) {
  VectorField r(a.grid);
  for (std::size_t k = 0; k < r.u1.size(); ++k) {
    r.u1[k] = a.u1[k] - b.u1[k];
    r.u2[k] = a.u2[k] - b.u2[k];
  }
  return r;
}

VectorField velocity_of(const ScalarField& omega, int pad) {
  VorticityMeasure m;
  m.density = omega;
  return velocity_from_measure(m, omega.grid, pad);
}

}  // namespace

double vector_lp_norm(const VectorField& u, double p) {
  std::vector<double> mag(u.u1.size());
  for (std::size_t k = 0; k < mag.size(); ++k) mag[k] = std::hypot(u.u1[k], u.u2[k]);
  return weighted_lp(u.grid, mag, p);
}

double gradient_lp_norm(const VectorField& u, double p) {
  std::vector<double> a1, a2, b1, b2;
  grad_component(u.grid, u.u1, a1, a2);
  grad_component(u.grid, u.u2, b1, b2);
  std::vector<double> mag(a1.size());
  for (std::size_t k = 0; k < mag.size(); ++k)
    mag[k] = std::sqrt(a1[k] * a1[k] + a2[k] * a2[k] + b1[k] * b1[k] + b2[k] * b2[k]);
  return weighted_lp(u.grid, mag, p);
}

ScalarField neg_div_flux(const ScalarField& omega, const VectorField& u, int pad) {
  const auto& g = omega.grid;
  ScalarField a1(g), a2(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    a1.values[k] = omega.values[k] * u.u1[k];
    a2.values[k] = omega.values[k] * u.u2[k];
  }
  ScalarField d = axpy(1.0, d1_spectral(a1, pad), d2_fourth(a2));
  return scaled(d, -1.0);
}

ScalarField duhamel_integrand(const SolutionPath& path, double s, double t, const KernelConfig& cfg) {
  check_path(path);
  if (!(s < t)) throw InvalidArgument("duhamel_integrand needs s < t");
  auto flux = path_fluxes(path, cfg.pad_factor);
  return apply_T_composite(interp_field(flux, path.times, s), t - s, cfg);
}

ScalarField duhamel_integrand_gradient_form(const SolutionPath& path, double s, double t, const KernelConfig& cfg) {
  check_path(path);
  if (!(s < t)) throw InvalidArgument("duhamel_integrand needs s < t");
  const double tau = t - s;
  std::vector<ScalarField> a1s, a2s;
  for (std::size_t k = 0; k < path.times.size(); ++k) {
    const auto& w = path.omega[k];
    ScalarField a1(w.grid), a2(w.grid);
    for (std::size_t q = 0; q < w.values.size(); ++q) {
      a1.values[q] = w.values[q] * path.velocity[k].u1[q];
      a2.values[q] = w.values[q] * path.velocity[k].u2[q];
    }
    a1s.push_back(a1);
    a2s.push_back(a2);
  }
  ScalarField a1 = interp_field(a1s, path.times, s), a2 = interp_field(a2s, path.times, s);
  const auto& g = a1.grid;
  const int pad = cfg.pad_factor;
  auto A1 = detail::rows_forward(a1, pad), A2 = detail::rows_forward(a2, pad);
  const auto w = detail::gregory_weights(g.n2(), g.h2());
  detail::RowSpectra o(g, pad, g.n2());
  const double kmax = std::sqrt(46.0 / tau);
  for (std::size_t i = 0; i < g.n2(); ++i) {
    const double x2 = g.x2(i);
    cplx* oi = o.row(i);
    for (std::size_t l = 1; l < g.n2(); ++l) {
      const double y2 = g.x2(l);
      for (std::size_t k = 0; k < o.mc; ++k) {
        const double xi = o.xi(k);
        if (xi > kmax) break;
        oi[k] += w[l] * (cplx(0.0, -xi) * detail::W_hat(xi, x2, y2, tau) * A1.row(l)[k] +
                         detail::W_hat_dy2(xi, x2, y2, tau) * A2.row(l)[k]);
      }
    }
  }
  return detail::rows_inverse(o);
}

ScalarField duhamel_term(const SolutionPath& path, double t, const TimeMesh& mesh, const KernelConfig& cfg,
                         std::size_t nodes) {
  check_path(path);
  if (!(t > 0.0) || t > mesh.t_end * (1.0 + 1e-12))
    throw ConfigError("Duhamel term: time mesh does not cover (0, t)");
  if (nodes < 2) throw ConfigError("Duhamel term needs at least 2 quadrature nodes");
  cfg.validate();
  return duhamel_from_fluxes(path_fluxes(path, cfg.pad_factor), path.times, t, cfg, nodes);
}

IterateMetrics iteration_metrics(const SolutionPath& path, double q, double p) {
  IterateMetrics m;
  for (std::size_t k = 0; k < path.times.size(); ++k) {
    const double t = path.times[k];
    m.N = std::max(m.N, std::pow(t, 1.0 - 1.0 / q) * lq_norm(path.omega[k], q));
    const auto& u = path.velocity[k];
    m.L = std::max(m.L, std::pow(t, 0.5 - 1.0 / p) * (vector_lp_norm(u, p) + std::sqrt(t) * gradient_lp_norm(u, p)));
    m.u_inf_scaled = std::max(m.u_inf_scaled, std::sqrt(t) * vector_lp_norm(u, INFINITY));
  }
  return m;
}

double diff_norm(const SolutionPath& a, const SolutionPath& b, double q, double p) {
  double best = 0.0;
  for (std::size_t k = 0; k < a.times.size(); ++k) {
    const double t = a.times[k];
    VectorField du = minus(a.velocity[k], b.velocity[k]);
    double v = std::pow(t, 1.0 - 1.0 / q) * lq_norm(axpy(-1.0, a.omega[k], b.omega[k]), q) +
               std::pow(t, 0.5 - 1.0 / p) * vector_lp_norm(du, p) +
               std::pow(t, 1.0 - 1.0 / p) * gradient_lp_norm(du, p);
    best = std::max(best, v);
  }
  return best;
}

MildSolution picard_solve(const VorticityMeasure& mu0, const TimeMesh& mesh, const HalfPlaneGrid& grid,
                          const SolverOptions& opt) {
  opt.validate();
  mu0.validate();
  if (mesh.nodes.empty() || !(mesh.t_end > 0.0)) throw ConfigError("picard_solve: empty time mesh");
  const auto& cfg = opt.kernel;
  const int pad = 4;
  MildSolution sol;
  sol.metrics.q = opt.q;
  sol.metrics.p = opt.p;
  std::vector<double> times = mesh.nodes;
  std::sort(times.begin(), times.end());
  if (times.back() < mesh.t_end) times.push_back(mesh.t_end);

  SolutionPath first;
  first.times = times;
  for (double t : times) {
    first.omega.push_back(apply_T_composite(mu0, t, grid, cfg));
    first.velocity.push_back(velocity_of(first.omega.back(), pad));
  }
  auto record = [&](const SolutionPath& p) {
    IterateMetrics m = iteration_metrics(p, opt.q, opt.p);
    sol.metrics.N.push_back(m.N);
    sol.metrics.L.push_back(m.L);
    sol.metrics.u_inf_scaled.push_back(m.u_inf_scaled);
  };
  auto sweep = [&](const SolutionPath& cur) {
    auto flux = path_fluxes(cur, pad);
    SolutionPath next;
    next.times = times;
    for (std::size_t k = 0; k < times.size(); ++k) {
      ScalarField d = duhamel_from_fluxes(flux, times, times[k], cfg, opt.duhamel_nodes);
      next.omega.push_back(axpy(1.0, first.omega[k], d));
      next.omega.back().check_finite();
      next.velocity.push_back(velocity_of(next.omega.back(), pad));
    }
    return next;
  };

  record(first);
  SolutionPath cur = first;
  for (std::size_t it = 1; it <= opt.max_iter; ++it) {
    SolutionPath next = sweep(cur);
    double rel = relative_l1_change(next, cur);
    sol.metrics.rel_l1_diff.push_back(rel);
    sol.metrics.diff_norms.push_back(diff_norm(next, cur, opt.q, opt.p));
    record(next);
    cur = std::move(next);
    sol.iterations = it;
    if (rel < opt.tol) {
      sol.converged = true;
      break;
    }
  }
  // defect of the returned path in the integral equation
  SolutionPath check = sweep(cur);
  sol.residual = relative_l1_change(cur, check);
  sol.path = std::move(cur);
  return sol;
}

ScalarField fd_oracle_linear(const ScalarField& omega0, double t_end, double dt, int pad) {
  omega0.check_finite();
  if (!(t_end > 0.0)) throw InvalidArgument("fd_oracle_linear: t_end must be positive");
  const auto& g = omega0.grid;
  const double h = std::min(g.h1(), g.h2());
  if (dt <= 0.0) dt = 0.2 * h * h;
  if (dt > 0.25 * h * h) throw ConfigError("fd_oracle_linear: dt exceeds the explicit stability bound h^2/4");
  const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt));
  dt = t_end / static_cast<double>(steps);
  const std::size_t n1 = g.n1(), n2 = g.n2();
  const double r1 = dt / (g.h1() * g.h1()), r2 = dt / (g.h2() * g.h2());
  std::vector<double> w = omega0.values, nw(w.size(), 0.0);
  LineSamples bnd(g.x1_min(), g.x1_max(), n1);
  for (std::size_t step = 0; step < steps; ++step) {
    std::copy(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(n1), bnd.values.begin());
    // A with the symbol -(2/h1)|sin(xi h1 / 2)|, i.e. -sqrt of the 5-point x1
    // Laplacian symbol; the exact -|xi| exceeds it near the grid cutoff and
    // makes the explicit boundary row unstable.
    const double h1 = g.h1();
    LineSamples Aw = apply_line_multiplier(
        bnd, [h1](double xi) { return cplx(-2.0 / h1 * std::abs(std::sin(0.5 * xi * h1)), 0.0); }, pad);
    std::fill(nw.begin(), nw.end(), 0.0);
    for (std::size_t j = 0; j + 1 < n2; ++j)
      for (std::size_t i = 1; i + 1 < n1; ++i) {
        const std::size_t k = j * n1 + i;
        double lap1 = w[k + 1] - 2 * w[k] + w[k - 1];
        double lap2 = j == 0 ? 2.0 * (w[k + n1] - w[k]) - 2.0 * g.h2() * Aw.values[i]
                             : w[k + n1] - 2 * w[k] + w[k - n1];
        nw[k] = w[k] + r1 * lap1 + r2 * lap2;
      }
    std::swap(w, nw);
  }
  return ScalarField(g, w);
}

}  // namespace hpv
