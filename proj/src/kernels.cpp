#include "hpvort/kernels.hpp"

#include <cmath>

#include "hpvort/errors.hpp"

namespace hpv {
namespace {

void require_time(double t) {
  if (!(t > 0.0)) throw InvalidArgument("kernel: time must be positive");
}

double norm2(Point2 x) { return x.x1 * x.x1 + x.x2 * x.x2; }

void require_regular(Point2 x) {
  if (std::sqrt(norm2(x)) < eps_singular) throw SingularityError("kernel evaluated at its singularity");
}

// Antiderivative of log(x^2 + y^2) in both variables.
double F_log(double x, double y) {
  double r2 = x * x + y * y;
  double v = 0.0;
  if (r2 > 0) v += x * y * std::log(r2);
  v -= 3.0 * x * y;
  if (x != 0) v += x * x * std::atan(y / x);
  if (y != 0) v += y * y * std::atan(x / y);
  return v;
}

// Antiderivative of x / (x^2 + y^2) in both variables.
double G_lin(double x, double y) {
  double r2 = x * x + y * y;
  double v = -2.0 * y;
  if (r2 > 0) v += y * std::log(r2);
  if (x != 0) v += 2.0 * x * std::atan(y / x);
  return 0.5 * v;
}

template <class F>
double rect(F f, double x0, double x1, double y0, double y1) {
  return f(x1, y1) - f(x0, y1) - f(x1, y0) + f(x0, y0);
}

}  // namespace

double gauss2d(Point2 x, double t) {
  require_time(t);
  return std::exp(-norm2(x) / (4.0 * t)) / (4.0 * M_PI * t);
}

double gauss1d(double r, double t) {
  require_time(t);
  return std::exp(-r * r / (4.0 * t)) / std::sqrt(4.0 * M_PI * t);
}

double gauss1d_dr(double r, double t) { return -r / (2.0 * t) * gauss1d(r, t); }

double log_potential(Point2 x) {
  require_regular(x);
  return -std::log(norm2(x)) / (4.0 * M_PI);
}

std::array<double, 2> grad_E(Point2 x) {
  require_regular(x);
  double r2 = norm2(x);
  return {-x.x1 / (2.0 * M_PI * r2), -x.x2 / (2.0 * M_PI * r2)};
}

double d11_E(Point2 x) {
  require_regular(x);
  double r2 = norm2(x);
  return (x.x1 * x.x1 - x.x2 * x.x2) / (2.0 * M_PI * r2 * r2);
}

double d12_E(Point2 x) {
  require_regular(x);
  double r2 = norm2(x);
  return x.x1 * x.x2 / (M_PI * r2 * r2);
}

double d22_E(Point2 x) { return -d11_E(x); }

double poisson_P(double x1, double s) {
  if (!(s > 0)) throw InvalidArgument("poisson_P: s must be positive");
  return s / (M_PI * (x1 * x1 + s * s));
}

double conj_poisson_Q(double x1, double s) {
  if (!(s > 0)) throw InvalidArgument("conj_poisson_Q: s must be positive");
  return x1 / (M_PI * (x1 * x1 + s * s));
}

double dirichlet_green(Point2 x, Point2 y) {
  Point2 d{x.x1 - y.x1, x.x2 - y.x2};
  require_regular(d);
  Point2 e{x.x1 - y.x1, x.x2 + y.x2};
  if (std::sqrt(norm2(e)) < eps_singular) return 0.0;  // both points on the boundary
  // |x - y*|^2 - |x - y|^2 = 4 x2 y2; log1p keeps the far field accurate
  return std::log1p(4.0 * x.x2 * y.x2 / norm2(d)) / (4.0 * M_PI);
}

double neumann_green(Point2 x, Point2 y) {
  Point2 d{x.x1 - y.x1, x.x2 - y.x2};
  Point2 e{x.x1 - y.x1, x.x2 + y.x2};
  require_regular(d);
  require_regular(e);
  return -(std::log(norm2(d)) + std::log(norm2(e))) / (4.0 * M_PI);
}

std::array<double, 2> biot_savart_kernel(Point2 x, Point2 y) {
  Point2 d{x.x1 - y.x1, x.x2 - y.x2};
  require_regular(d);
  if (y.x2 == 0.0) return {0.0, 0.0};
  Point2 e{x.x1 - y.x1, x.x2 + y.x2};
  // direct and image terms combined, so nothing cancels when |x - y| >> x2, y2
  const double rd = norm2(d), re = norm2(e), den = M_PI * rd * re;
  return {y.x2 * (d.x1 * d.x1 + y.x2 * y.x2 - x.x2 * x.x2) / den, 2.0 * d.x1 * x.x2 * y.x2 / den};
}

double cell_average_E(Point2 c, double a, double b) {
  double I = rect(F_log, c.x1 - a, c.x1 + a, c.x2 - b, c.x2 + b);
  return -I / (4.0 * M_PI) / (4.0 * a * b);
}

std::array<double, 2> cell_average_grad_perp_E(Point2 c, double a, double b) {
  // grad-perp E(v) = (-v2, v1) / (2 pi |v|^2)
  double i1 = rect(G_lin, c.x1 - a, c.x1 + a, c.x2 - b, c.x2 + b);
  double i2 = rect([](double x, double y) { return G_lin(y, x); }, c.x1 - a, c.x1 + a, c.x2 - b,
                   c.x2 + b);
  double area = 4.0 * a * b;
  return {-i2 / (2.0 * M_PI * area), i1 / (2.0 * M_PI * area)};
}

}  // namespace hpv
