#include "hpvort/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hpvort/errors.hpp"

namespace hpv {

HalfPlaneGrid::HalfPlaneGrid(double a, double b, double x2max, std::size_t n1, std::size_t n2)
    : x1_min_(a), x1_max_(b), x2_max_(x2max), n1_(n1), n2_(n2) {
  if (!(a < b) || !(x2max > 0) || n1 < 4 || n2 < 4)
    throw InvalidArgument("HalfPlaneGrid: need x1_min < x1_max, x2_max > 0, n1, n2 >= 4");
  h1_ = (b - a) / static_cast<double>(n1 - 1);
  h2_ = x2max / static_cast<double>(n2 - 1);
}

HalfPlaneGrid HalfPlaneGrid::centered(double L1, double L2, std::size_t n1, std::size_t n2) {
  return HalfPlaneGrid(-L1, L1, L2, n1, n2);
}

double HalfPlaneGrid::weight(std::size_t i, std::size_t j) const {
  double w = h1_ * h2_;
  if (i == 0 || i == n1_ - 1) w *= 0.5;
  if (j == 0 || j == n2_ - 1) w *= 0.5;
  return w;
}

bool HalfPlaneGrid::contains(Point2 p, double slack) const {
  return p.x1 >= x1_min_ - slack && p.x1 <= x1_max_ + slack && p.x2 >= -slack &&
         p.x2 <= x2_max_ + slack;
}

bool HalfPlaneGrid::operator==(const HalfPlaneGrid& o) const {
  return x1_min_ == o.x1_min_ && x1_max_ == o.x1_max_ && x2_max_ == o.x2_max_ && n1_ == o.n1_ &&
         n2_ == o.n2_;
}

ScalarField::ScalarField(const HalfPlaneGrid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (values.size() != g.size()) throw InvalidArgument("ScalarField: size mismatch");
}

void ScalarField::check_finite() const {
  for (double v : values)
    if (!std::isfinite(v)) throw CorruptField("field contains a non-finite value");
}

LineSamples::LineSamples(double a, double b, std::vector<double> v) : x1_min(a), x1_max(b), values(std::move(v)) {
  if (!(a < b) || values.size() < 2) throw InvalidArgument("LineSamples: bad window");
}

bool VorticityMeasure::empty() const {
  return atoms.empty() && sheet.empty() && !density && !boundary_sheet;
}

void VorticityMeasure::validate() const {
  auto check = [](const std::vector<WeightedPoint>& pts, const char* what) {
    for (const auto& a : pts) {
      if (!std::isfinite(a.pos.x1) || !std::isfinite(a.pos.x2) || !std::isfinite(a.weight))
        throw InvalidArgument(std::string(what) + ": non-finite entry");
      if (a.pos.x2 < 0) throw InvalidArgument(std::string(what) + ": location below x2 = 0");
    }
  };
  check(atoms, "atom");
  check(sheet, "sheet sample");
  if (density) density->check_finite();
  if (boundary_sheet)
    for (double v : boundary_sheet->values)
      if (!std::isfinite(v)) throw InvalidArgument("boundary sheet: non-finite entry");
}

TimeMesh TimeMesh::graded(double t_end, std::size_t n) {
  if (!(t_end > 0) || n < 2) throw InvalidArgument("TimeMesh: need t_end > 0 and n >= 2");
  std::vector<double> th, w;
  gauss_legendre(n, th, w);
  TimeMesh m;
  m.t_end = t_end;
  for (std::size_t k = 0; k < n; ++k) {
    double s = 0.5 * (th[k] + 1.0);
    m.nodes.push_back(t_end * s * s * (3.0 - 2.0 * s));
    m.weights.push_back(0.5 * w[k] * 6.0 * t_end * s * (1.0 - s));
  }
  return m;
}

static double pairwise_rec(const double* v, std::size_t n) {
  if (n <= 16) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  std::size_t m = n / 2;
  return pairwise_rec(v, m) + pairwise_rec(v + m, n - m);
}

double pairwise_sum(const double* v, std::size_t n) { return pairwise_rec(v, n); }
double pairwise_sum(const std::vector<double>& v) { return pairwise_rec(v.data(), v.size()); }

void gauss_legendre(std::size_t n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(M_PI * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (std::size_t k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = static_cast<double>(n) * (z * p1 - p0) / (z * z - 1.0);
      double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

double integrate_field(const ScalarField& f) {
  f.check_finite();
  const auto& g = f.grid;
  std::vector<double> terms(g.size());
  for (std::size_t j = 0; j < g.n2(); ++j)
    for (std::size_t i = 0; i < g.n1(); ++i) terms[g.index(i, j)] = f.at(i, j) * g.weight(i, j);
  return pairwise_sum(terms);
}

double lq_norm(const ScalarField& f, double q) {
  if (!(q >= 1.0)) throw InvalidArgument("lq_norm: exponent must be >= 1");
  f.check_finite();
  const auto& g = f.grid;
  if (std::isinf(q)) return max_abs(f.values);
  std::vector<double> terms(g.size());
  for (std::size_t j = 0; j < g.n2(); ++j)
    for (std::size_t i = 0; i < g.n1(); ++i) {
      double a = std::abs(f.at(i, j));
      terms[g.index(i, j)] = (q == 1.0 ? a : std::pow(a, q)) * g.weight(i, j);
    }
  double s = pairwise_sum(terms);
  return q == 1.0 ? s : std::pow(s, 1.0 / q);
}

double weak_lp_quasinorm(const ScalarField& f, double p) {
  if (!(p > 1.0) || std::isinf(p)) throw InvalidArgument("weak_lp_quasinorm: need 1 < p < inf");
  f.check_finite();
  const auto& g = f.grid;
  std::vector<std::pair<double, double>> cells;  // (|f|, area)
  cells.reserve(g.size());
  for (std::size_t j = 0; j < g.n2(); ++j)
    for (std::size_t i = 0; i < g.n1(); ++i) cells.emplace_back(std::abs(f.at(i, j)), g.weight(i, j));
  std::stable_sort(cells.begin(), cells.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  double area = 0.0, best = 0.0;
  for (const auto& c : cells) {
    area += c.second;
    best = std::max(best, std::pow(area, 1.0 / p) * c.first);
  }
  return best;
}

double integrate_line(const LineSamples& g) {
  std::vector<double> t(g.values);
  t.front() *= 0.5;
  t.back() *= 0.5;
  return g.h() * pairwise_sum(t);
}

static double abs_line_integral(const LineSamples& g) {
  LineSamples a = g;
  for (double& v : a.values) v = std::abs(v);
  return integrate_line(a);
}

double total_variation(const VorticityMeasure& mu) {
  double s = 0.0;
  for (const auto& a : mu.atoms) s += std::abs(a.weight);
  for (const auto& a : mu.sheet) s += std::abs(a.weight);
  if (mu.density) s += lq_norm(*mu.density, 1.0);
  if (mu.boundary_sheet) s += abs_line_integral(*mu.boundary_sheet);
  return s;
}

double total_mass(const VorticityMeasure& mu) {
  double s = 0.0;
  for (const auto& a : mu.atoms) s += a.weight;
  for (const auto& a : mu.sheet) s += a.weight;
  if (mu.density) s += integrate_field(*mu.density);
  if (mu.boundary_sheet) s += integrate_line(*mu.boundary_sheet);
  return s;
}

double interpolate(const ScalarField& f, Point2 p) {
  const auto& g = f.grid;
  if (!g.contains(p)) throw DomainError("interpolate: point outside grid");
  double s = (p.x1 - g.x1_min()) / g.h1();
  double r = p.x2 / g.h2();
  std::size_t i = static_cast<std::size_t>(std::clamp(std::floor(s), 0.0, double(g.n1() - 2)));
  std::size_t j = static_cast<std::size_t>(std::clamp(std::floor(r), 0.0, double(g.n2() - 2)));
  double a = s - static_cast<double>(i), b = r - static_cast<double>(j);
  return (1 - a) * (1 - b) * f.at(i, j) + a * (1 - b) * f.at(i + 1, j) + (1 - a) * b * f.at(i, j + 1) +
         a * b * f.at(i + 1, j + 1);
}

double interpolate(const LineSamples& g, double x1) {
  const double slack = 1e-12 * (g.x1_max - g.x1_min);
  if (x1 < g.x1_min - slack || x1 > g.x1_max + slack) throw DomainError("interpolate: outside line");
  double s = (x1 - g.x1_min) / g.h();
  std::size_t i = static_cast<std::size_t>(std::clamp(std::floor(s), 0.0, double(g.n() - 2)));
  double a = s - static_cast<double>(i);
  return (1 - a) * g.values[i] + a * g.values[i + 1];
}

double measure_pairing(const VorticityMeasure& mu, const ScalarField& phi) {
  std::vector<double> terms;
  for (const auto& a : mu.atoms) terms.push_back(a.weight * interpolate(phi, a.pos));
  for (const auto& a : mu.sheet) terms.push_back(a.weight * interpolate(phi, a.pos));
  if (mu.density) {
    const auto& d = *mu.density;
    ScalarField prod(d.grid);
    for (std::size_t j = 0; j < d.grid.n2(); ++j)
      for (std::size_t i = 0; i < d.grid.n1(); ++i) {
        double v = d.grid == phi.grid ? phi.at(i, j) : interpolate(phi, d.grid.node(i, j));
        prod.at(i, j) = d.at(i, j) * v;
      }
    terms.push_back(integrate_field(prod));
  }
  if (mu.boundary_sheet) {
    LineSamples b = *mu.boundary_sheet;
    for (std::size_t i = 0; i < b.n(); ++i) b.values[i] *= interpolate(phi, Point2{b.x(i), 0.0});
    terms.push_back(integrate_line(b));
  }
  return pairwise_sum(terms);
}

ScalarField axpy(double a, const ScalarField& x, const ScalarField& y) {
  ScalarField r(y.grid);
  for (std::size_t k = 0; k < r.values.size(); ++k) r.values[k] = a * x.values[k] + y.values[k];
  return r;
}

ScalarField scaled(const ScalarField& x, double a) {
  ScalarField r(x.grid);
  for (std::size_t k = 0; k < r.values.size(); ++k) r.values[k] = a * x.values[k];
  return r;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace hpv
