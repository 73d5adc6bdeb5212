#pragma once
/// @file grid.hpp
/// Truncated uniform discretization of the closed upper half plane, sampled
/// fields, vorticity measures, time meshes and the norms used throughout.

#include <cstddef>
#include <optional>
#include <vector>

namespace hpv {

struct Point2 {
  double x1 = 0.0;
  double x2 = 0.0;
};

/// Reflection across the boundary line, y* = (y1, -y2).
inline Point2 reflect(Point2 p) { return {p.x1, -p.x2}; }

/// Nodes x1_min + i*h1 (i < n1) by j*h2 (j < n2); row j = 0 is the boundary.
class HalfPlaneGrid {
 public:
  HalfPlaneGrid() = default;
  HalfPlaneGrid(double x1_min, double x1_max, double x2_max, std::size_t n1, std::size_t n2);

  /// [-L1, L1] x [0, L2].
  static HalfPlaneGrid centered(double L1, double L2, std::size_t n1, std::size_t n2);

  double x1_min() const { return x1_min_; }
  double x1_max() const { return x1_max_; }
  double x2_max() const { return x2_max_; }
  std::size_t n1() const { return n1_; }
  std::size_t n2() const { return n2_; }
  double h1() const { return h1_; }
  double h2() const { return h2_; }
  std::size_t size() const { return n1_ * n2_; }

  double x1(std::size_t i) const { return x1_min_ + static_cast<double>(i) * h1_; }
  double x2(std::size_t j) const { return static_cast<double>(j) * h2_; }
  Point2 node(std::size_t i, std::size_t j) const { return {x1(i), x2(j)}; }
  /// x1-fastest flat index.
  std::size_t index(std::size_t i, std::size_t j) const { return j * n1_ + i; }

  /// Trapezoid cell weight of node (i, j).
  double weight(std::size_t i, std::size_t j) const;

  bool contains(Point2 p, double slack = 1e-12) const;
  bool operator==(const HalfPlaneGrid& o) const;

 private:
  double x1_min_ = -1, x1_max_ = 1, x2_max_ = 1;
  std::size_t n1_ = 4, n2_ = 4;
  double h1_ = 0, h2_ = 0;
};

struct ScalarField {
  HalfPlaneGrid grid;
  std::vector<double> values;

  ScalarField() = default;
  explicit ScalarField(const HalfPlaneGrid& g) : grid(g), values(g.size(), 0.0) {}
  ScalarField(const HalfPlaneGrid& g, std::vector<double> v);

  double& at(std::size_t i, std::size_t j) { return values[grid.index(i, j)]; }
  double at(std::size_t i, std::size_t j) const { return values[grid.index(i, j)]; }

  /// Throws CorruptField on NaN/Inf.
  void check_finite() const;
};

struct VectorField {
  HalfPlaneGrid grid;
  std::vector<double> u1, u2;

  VectorField() = default;
  explicit VectorField(const HalfPlaneGrid& g) : grid(g), u1(g.size(), 0.0), u2(g.size(), 0.0) {}
};

/// Uniform samples on [x1_min, x1_max] of a function on the boundary line.
struct LineSamples {
  double x1_min = 0.0, x1_max = 1.0;
  std::vector<double> values;

  LineSamples() = default;
  LineSamples(double a, double b, std::vector<double> v);
  LineSamples(double a, double b, std::size_t n) : x1_min(a), x1_max(b), values(n, 0.0) {}

  std::size_t n() const { return values.size(); }
  double h() const { return (x1_max - x1_min) / static_cast<double>(values.size() - 1); }
  double x(std::size_t i) const { return x1_min + static_cast<double>(i) * h(); }
};

/// Weighted point (atom or curve sample).
struct WeightedPoint {
  Point2 pos;
  double weight = 0.0;
};

/// atoms (pure-point part) + sheet samples + gridded density + signed
/// boundary layer density on x2 = 0.
struct VorticityMeasure {
  std::vector<WeightedPoint> atoms;
  std::vector<WeightedPoint> sheet;
  std::optional<ScalarField> density;
  std::optional<LineSamples> boundary_sheet;

  bool empty() const;
  /// Throws InvalidArgument for atoms/sheet points below x2 = 0 or non-finite data.
  void validate() const;
};

/// Quadrature for integrals over (0, t_end).
struct TimeMesh {
  double t_end = 0.0;
  std::vector<double> nodes;
  std::vector<double> weights;

  /// Gauss-Legendre in theta with s = t_end * theta^2 (3 - 2 theta); nodes
  /// cluster at both ends.
  static TimeMesh graded(double t_end, std::size_t n);
};

/// Pairwise (cascade) summation in index order.
double pairwise_sum(const double* v, std::size_t n);
double pairwise_sum(const std::vector<double>& v);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(std::size_t n, std::vector<double>& nodes, std::vector<double>& weights);

double integrate_field(const ScalarField& f);
double lq_norm(const ScalarField& f, double q);
double weak_lp_quasinorm(const ScalarField& f, double p);
double total_variation(const VorticityMeasure& mu);
double total_mass(const VorticityMeasure& mu);
double measure_pairing(const VorticityMeasure& mu, const ScalarField& phi);

/// Trapezoid integral of line samples.
double integrate_line(const LineSamples& g);

/// Bilinear interpolation; throws DomainError outside the grid.
double interpolate(const ScalarField& f, Point2 p);
/// Linear interpolation on the line; throws DomainError outside.
double interpolate(const LineSamples& g, double x1);

/// Pointwise combinations.
ScalarField axpy(double a, const ScalarField& x, const ScalarField& y);
ScalarField scaled(const ScalarField& x, double a);
double max_abs(const std::vector<double>& v);

}  // namespace hpv
