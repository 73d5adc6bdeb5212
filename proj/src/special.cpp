#include "hpvort/special.hpp"

#include <cmath>

namespace hpv {

double erfcx(double u) {
  if (u < 25.0) return std::exp(u * u) * std::erfc(u);
  // asymptotic series; relative error below 1e-13 for u >= 25
  double z = 1.0 / (u * u);
  return (1.0 - 0.5 * z * (1.0 - 1.5 * z * (1.0 - 2.5 * z * (1.0 - 3.5 * z)))) / (u * std::sqrt(M_PI));
}

double gauss_exp_integral(double k, double a, double b, double t) {
  if (b <= 0.0) return 0.0;
  const double st = 2.0 * std::sqrt(t);
  const double u1 = (2.0 * t * k - a) / st;
  const double u2 = (2.0 * t * k - a - b) / st;  // u2 < u1
  if (u2 >= 0.0) {
    return 0.5 * (std::exp(-(a + b) * (a + b) / (4.0 * t)) * erfcx(u2) -
                  std::exp(-b * k - a * a / (4.0 * t)) * erfcx(u1));
  }
  const double pre = std::exp(t * k * k - k * (a + b));
  if (u1 >= 0.0) return 0.5 * (pre * std::erfc(u2) - std::exp(-b * k - a * a / (4.0 * t)) * erfcx(u1));
  return 0.5 * pre * (std::erf(u1) - std::erf(u2));
}

}  // namespace hpv
