#include <cmath>
#include <random>

#include "doctest.h"
#include "hpvort/errors.hpp"
#include "hpvort/kernels.hpp"
#include "oracles.hpp"

using namespace hpv;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("heat kernel values") {
    CHECK(gauss2d({0, 0}, 1.0) == doctest::Approx(1.0 / (4 * oracle::pi)).epsilon(1e-15));
    const double t = 0.7, r = std::sqrt(4 * t);
    CHECK(gauss2d({r / std::sqrt(2.0), r / std::sqrt(2.0)}, t) ==
          doctest::Approx(std::exp(-1.0) / (4 * oracle::pi * t)).epsilon(1e-14));
    CHECK(gauss1d(0.0, 1.0) == doctest::Approx(1.0 / std::sqrt(4 * oracle::pi)).epsilon(1e-15));
    CHECK_THROWS_AS(gauss2d({0, 0}, 0.0), InvalidArgument);
    CHECK_THROWS_AS(gauss1d(0.0, -1.0), InvalidArgument);
  }

  TEST_CASE("heat kernel factorization, scaling and mass") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> U(-3, 3), T(0.05, 3);
    double fac = 0, sc = 0;
    for (int k = 0; k < 500; ++k) {
      const Point2 x{U(rng), U(rng)};
      const double t = T(rng);
      fac = std::max(fac, rel(gauss2d(x, t), oracle::gamma0(x.x1, t) * oracle::gamma0(x.x2, t)));
      for (double lam : {0.5, 2.0, 3.0, 10.0})
        sc = std::max(sc, rel(lam * lam * gauss2d({lam * x.x1, lam * x.x2}, lam * lam * t), gauss2d(x, t)));
    }
    CHECK(fac <= 1e-14);
    CHECK(sc <= 1e-13);
    const double m = oracle::integrate([](double r) { return gauss1d(r, 0.4); }, oracle::panels(-10, 10, 40));
    CHECK(std::abs(m - 1.0) <= 1e-8);
  }

  TEST_CASE("log potential and derivatives") {
    CHECK(std::abs(log_potential({0.6, 0.8})) <= 1e-16);
    CHECK_THROWS_AS(log_potential({0.0, 0.0}), SingularityError);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> U(-2, 2), P(0.1, 2);
    double e1 = 0, fd = 0, lap = 0, sc = 0;
    for (int k = 0; k < 200; ++k) {
      const Point2 x{U(rng), P(rng)};
      const auto g = grad_E(x);
      // d1 E = -Q_{x2}(x1) / 2
      e1 = std::max(e1, std::abs(g[0] + 0.5 * oracle::conj_poisson(x.x1, x.x2)));
      const double h = 1e-5;
      const double d1 = (log_potential({x.x1 + h, x.x2}) - log_potential({x.x1 - h, x.x2})) / (2 * h);
      const double d2 = (log_potential({x.x1, x.x2 + h}) - log_potential({x.x1, x.x2 - h})) / (2 * h);
      fd = std::max({fd, std::abs(d1 - g[0]), std::abs(d2 - g[1])});
      // fourth-order Laplacian stencil, |x| >= 0.5
      const Point2 z{x.x1, x.x2 + 0.5};
      const double hh = 1e-2;
      auto E = [&](double a, double b) { return log_potential({z.x1 + a, z.x2 + b}); };
      const double L = (-(E(2 * hh, 0) + E(-2 * hh, 0) + E(0, 2 * hh) + E(0, -2 * hh)) +
                        16 * (E(hh, 0) + E(-hh, 0) + E(0, hh) + E(0, -hh)) - 60 * E(0, 0)) /
                       (12 * hh * hh);
      lap = std::max(lap, std::abs(L));
      CHECK(std::abs(d11_E(x) + d22_E(x)) <= 1e-12 * (1 + std::abs(d11_E(x))));
      // second derivatives scale like lambda^-2
      const double lam = 2.0;
      sc = std::max(sc, rel(lam * lam * d12_E({lam * x.x1, lam * x.x2}), d12_E(x)));
    }
    CHECK(e1 <= 1e-14);
    CHECK(fd <= 1e-7);
    CHECK(lap <= 1e-6);
    CHECK(sc <= 1e-13);
  }

  TEST_CASE("Poisson kernels") {
    CHECK(poisson_P(0.0, 2.0) == doctest::Approx(1.0 / (2 * oracle::pi)).epsilon(1e-15));
    CHECK(conj_poisson_Q(1.0, 1.0) == doctest::Approx(1.0 / (2 * oracle::pi)).epsilon(1e-15));
    CHECK_THROWS_AS(poisson_P(1.0, 0.0), InvalidArgument);
    // mass through the substitution x = s tan(theta)
    const double s = 0.3;
    const double m = oracle::integrate(
        [&](double th) { return poisson_P(s * std::tan(th), s) * s / (std::cos(th) * std::cos(th)); },
        oracle::panels(-oracle::pi / 2 + 1e-9, oracle::pi / 2 - 1e-9, 20));
    CHECK(std::abs(m - 1.0) <= 1e-6);
    for (double lam : {0.5, 2.0, 10.0})
      for (double x : {-1.3, 0.2, 4.0}) {
        CHECK(rel(lam * poisson_P(lam * x, lam * 0.7), poisson_P(x, 0.7)) <= 1e-13);
        CHECK(rel(lam * conj_poisson_Q(lam * x, lam * 0.7), conj_poisson_Q(x, 0.7)) <= 1e-13);
      }
  }

  TEST_CASE("Dirichlet Green function and Biot-Savart kernel") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> U(-2, 2), P(0.1, 2);
    for (int k = 0; k < 100; ++k) {
      const Point2 x{U(rng), P(rng)}, y{U(rng), P(rng)};
      CHECK(dirichlet_green({x.x1, 0.0}, y) == 0.0);
      const auto K0 = biot_savart_kernel(x, {y.x1, 0.0});
      CHECK(K0[0] == 0.0);
      CHECK(K0[1] == 0.0);
      const auto K = biot_savart_kernel(x, y);
      // grad-perp of D by central differences
      const double h = 1e-5;
      const double d1 = (dirichlet_green({x.x1 + h, x.x2}, y) - dirichlet_green({x.x1 - h, x.x2}, y)) / (2 * h);
      const double d2 = (dirichlet_green({x.x1, x.x2 + h}, y) - dirichlet_green({x.x1, x.x2 - h}, y)) / (2 * h);
      const double sc = std::abs(K[0]) + std::abs(K[1]) + 1.0;
      CHECK(std::abs(K[0] - d2) <= 1e-6 * sc);
      CHECK(std::abs(K[1] + d1) <= 1e-6 * sc);
      // divergence-free and curl-free (it is a perpendicular gradient of a harmonic function)
      const double hh = 1e-4;
      auto Kp = [&](double a, double b) { return biot_savart_kernel({a, b}, y); };
      const double div = (Kp(x.x1 + hh, x.x2)[0] - Kp(x.x1 - hh, x.x2)[0] + Kp(x.x1, x.x2 + hh)[1] -
                          Kp(x.x1, x.x2 - hh)[1]) /
                         (2 * hh);
      const double curl = (Kp(x.x1 + hh, x.x2)[1] - Kp(x.x1 - hh, x.x2)[1] - Kp(x.x1, x.x2 + hh)[0] +
                           Kp(x.x1, x.x2 - hh)[0]) /
                          (2 * hh);
      const double scale = 1.0 / (std::pow(std::hypot(x.x1 - y.x1, x.x2 - y.x2), 2) + 1e-3);
      CHECK(std::abs(div) <= 1e-6 * scale);
      CHECK(std::abs(curl) <= 1e-6 * scale);
    }
    CHECK_THROWS_AS(biot_savart_kernel({0.0, 1.0}, {0.0, 1.0}), SingularityError);
  }

  TEST_CASE("cell averages") {
    // far from the origin the cell mean equals the centre value to O(h^2)
    const Point2 c{1.0, 0.5};
    const double a = 1e-3, b = 2e-3;
    CHECK(std::abs(cell_average_E(c, a, b) - log_potential(c)) <= 1e-6);
    const auto g = cell_average_grad_perp_E(c, a, b);
    const auto ge = grad_E(c);
    CHECK(std::abs(g[0] - ge[1]) <= 1e-5);
    CHECK(std::abs(g[1] + ge[0]) <= 1e-5);
    // centred cell: odd part cancels
    const auto g0 = cell_average_grad_perp_E({0.0, 0.0}, 0.1, 0.1);
    CHECK(std::abs(g0[0]) <= 1e-14);
    CHECK(std::abs(g0[1]) <= 1e-14);
    // the log mean over a square centred at 0 is finite; compare with quadrature
    const double ref = oracle::integrate(
                           [](double y) {
                             return oracle::integrate(
                                 [&](double x) { return -std::log(std::hypot(x, y) + 1e-300) / (2 * oracle::pi); },
                                 oracle::graded_to_end(-0.1, 0.0, 40), 12);
                           },
                           oracle::graded_to_end(-0.1, 0.0, 40), 12) /
                       0.01;  // one quadrant, mean over it equals the full mean by symmetry
    CHECK(cell_average_E({0.0, 0.0}, 0.1, 0.1) == doctest::Approx(ref).epsilon(1e-8));
  }
}
