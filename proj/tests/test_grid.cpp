#include <cmath>
#include <random>

#include "doctest.h"
#include "hpvort/errors.hpp"
#include "hpvort/grid.hpp"
#include "oracles.hpp"

using namespace hpv;

TEST_SUITE("grid_core") {
  TEST_CASE("grid geometry") {
    HalfPlaneGrid g(-2.0, 2.0, 3.0, 9, 7);
    CHECK(g.h1() == doctest::Approx(0.5));
    CHECK(g.h2() == doctest::Approx(0.5));
    CHECK(g.x2(0) == 0.0);
    CHECK(g.x1(8) == doctest::Approx(2.0));
    CHECK(g.index(3, 2) == 2 * 9 + 3);
    CHECK_THROWS_AS(HalfPlaneGrid(1.0, 1.0, 1.0, 8, 8), InvalidArgument);
    CHECK_THROWS_AS(HalfPlaneGrid(-1.0, 1.0, 1.0, 3, 8), InvalidArgument);
  }

  TEST_CASE("integrate_field: area of a constant") {
    HalfPlaneGrid g(-1.0, 1.0, 1.0, 21, 11);
    ScalarField f(g);
    for (auto& v : f.values) v = 1.0;
    CHECK(integrate_field(f) == doctest::Approx(2.0).epsilon(1e-14));
  }

  TEST_CASE("integrate_field: heat kernel mass") {
    const auto g = HalfPlaneGrid::centered(8, 8, 321, 161);  // h = 0.05
    const double t = 0.1;
    // centred at height 2 the mass below x2 = 0 and the trapezoid end error are both negligible
    const auto f = oracle::sample(g, [&](double x1, double x2) { return oracle::gamma2(x1, x2 - 2.0, t); });
    CHECK(std::abs(integrate_field(f) - 1.0) <= 1e-5);
    CHECK(std::abs(integrate_field(f) - 0.5 * std::erfc(-2.0 / std::sqrt(4 * t))) <= 1e-6);
    // at height 1, 1.3% of the mass lies below the boundary; the trapezoid end
    // correction h^2 f'(0) / 12 is about 1e-4
    const auto f1 = oracle::sample(g, [&](double x1, double x2) { return oracle::gamma2(x1, x2 - 1.0, t); });
    CHECK(std::abs(integrate_field(f1) - 0.5 * std::erfc(-1.0 / std::sqrt(4 * t))) <= 2e-4);
  }

  TEST_CASE("integrate_field: odd field and bilinear exactness") {
    const auto g = HalfPlaneGrid::centered(3, 2, 31, 17);
    const auto odd = oracle::sample(g, [](double x1, double x2) { return x1 * std::exp(-x2 - x1 * x1); });
    CHECK(std::abs(integrate_field(odd)) <= 1e-12);
    const auto bil = oracle::sample(g, [](double x1, double x2) { return 1.0 + 2 * x1 + 3 * x2 + 4 * x1 * x2; });
    // exact integral over [-3, 3] x [0, 2]
    CHECK(integrate_field(bil) == doctest::Approx(6 * 2 + 3 * 6 * 2).epsilon(1e-12));
  }

  TEST_CASE("integrate_field rejects non-finite data") {
    HalfPlaneGrid g(-1.0, 1.0, 1.0, 8, 8);
    ScalarField f(g);
    f.values[5] = std::nan("");
    CHECK_THROWS_AS(integrate_field(f), CorruptField);
  }

  TEST_CASE("lq_norm examples") {
    HalfPlaneGrid g(0.0, 4.0, 4.0, 5, 5);
    ScalarField f(g);
    f.at(2, 2) = 1.0;  // interior node, cell area 1
    CHECK(lq_norm(f, 1.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(lq_norm(f, 0.5), InvalidArgument);

    const auto gg = HalfPlaneGrid::centered(6, 6, 241, 241);
    const double t = 0.3;
    const auto gam = oracle::sample(gg, [&](double x1, double x2) { return oracle::gamma2(x1, x2, t); });
    CHECK(lq_norm(gam, INFINITY) == doctest::Approx(1.0 / (4 * oracle::pi * t)).epsilon(1e-14));
    // the half-plane carries half of int Gamma^2 = 1 / (8 pi t)
    CHECK(std::abs(lq_norm(gam, 2.0) - std::sqrt(0.5 / (8 * oracle::pi * t))) <= 1e-6);
  }

  TEST_CASE("lq_norm monotone and triangle inequality") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> U(-1, 1);
    HalfPlaneGrid g(-1.0, 1.0, 1.0, 12, 9);
    for (int k = 0; k < 20; ++k) {
      ScalarField a(g), b(g), big(g);
      for (std::size_t i = 0; i < g.size(); ++i) {
        a.values[i] = U(rng);
        b.values[i] = U(rng);
        big.values[i] = a.values[i] * (1.5 + U(rng) * 0.4);
      }
      for (double q : {1.0, 1.5, 2.0, 4.0, double(INFINITY)}) {
        CHECK(lq_norm(axpy(1.0, a, b), q) <= lq_norm(a, q) + lq_norm(b, q) + 1e-14);
        CHECK(lq_norm(a, q) <= lq_norm(big, q));
      }
    }
  }

  TEST_CASE("weak_lp_quasinorm") {
    HalfPlaneGrid g(0.0, 10.0, 10.0, 11, 11);
    ScalarField f(g);
    CHECK(weak_lp_quasinorm(f, 2.0) == 0.0);
    // indicator of four interior cells: area 4
    f.at(3, 3) = f.at(4, 3) = f.at(3, 4) = f.at(4, 4) = 1.0;
    for (double p : {1.5, 2.0, 3.0}) CHECK(weak_lp_quasinorm(f, p) == doctest::Approx(std::pow(4.0, 1.0 / p)));

    // |x|^{-1} on the half plane has distribution pi / (2 s^2) and quasinorm
    // sqrt(pi / 2). Capping at 2 keeps the quasinorm and replaces the
    // unresolvable spike at the origin by a plateau of radius 0.5.
    const auto gg = HalfPlaneGrid::centered(20, 20, 801, 401);
    auto inv = oracle::sample(gg, [](double x1, double x2) { return std::min(2.0, 1.0 / std::hypot(x1, x2)); });
    CHECK(std::abs(weak_lp_quasinorm(inv, 2.0) / std::sqrt(oracle::pi / 2) - 1.0) <= 0.03);
  }

  TEST_CASE("weak quasinorm below the Lp norm") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> U(-2, 2);
    HalfPlaneGrid g(-1.0, 1.0, 1.0, 16, 10);
    for (int k = 0; k < 10; ++k) {
      ScalarField f(g);
      for (auto& v : f.values) v = U(rng);
      for (double p : {1.5, 2.0, 4.0}) CHECK(weak_lp_quasinorm(f, p) <= lq_norm(f, p) * (1 + 1e-12));
    }
  }

  TEST_CASE("total_variation and total_mass") {
    VorticityMeasure a;
    CHECK(total_variation(a) == 0.0);
    a.atoms.push_back({{0.0, 1.0}, -2.0});
    CHECK(total_variation(a) == doctest::Approx(2.0));

    HalfPlaneGrid g(0.0, 4.0, 4.0, 5, 5);
    VorticityMeasure b;
    b.atoms.push_back({{1.0, 1.0}, 1.0});
    b.atoms.push_back({{2.0, 1.0}, -1.0});
    ScalarField d(g);
    d.at(2, 2) = -0.5;
    b.density = d;
    CHECK(total_variation(b) == doctest::Approx(2.5));
    CHECK(total_mass(b) == doctest::Approx(-0.5));
  }

  TEST_CASE("measure validation") {
    VorticityMeasure m;
    m.atoms.push_back({{0.0, -0.1}, 1.0});
    CHECK_THROWS_AS(m.validate(), InvalidArgument);
    VorticityMeasure b;
    b.atoms.push_back({{0.0, 0.0}, 1.0});  // boundary atoms are allowed
    CHECK_NOTHROW(b.validate());
  }

  TEST_CASE("measure_pairing") {
    const auto g = HalfPlaneGrid::centered(4, 4, 161, 161);
    ScalarField one(g);
    for (auto& v : one.values) v = 1.0;
    VorticityMeasure d;
    d.atoms.push_back({{0.0, 1.0}, 1.0});
    CHECK(measure_pairing(d, one) == doctest::Approx(1.0));

    // boundary layers pair with the trace, which vanishes for x2 * psi
    VorticityMeasure layer;
    layer.boundary_sheet = LineSamples(-4.0, 4.0, std::vector<double>(161, 0.7));
    const auto phi = oracle::sample(g, [](double x1, double x2) { return x2 * std::cos(x1); });
    CHECK(std::abs(measure_pairing(layer, phi)) <= 1e-14);

    // near-delta density
    const auto gh = HalfPlaneGrid::centered(4, 4, 321, 321);
    VorticityMeasure nd;
    nd.density = oracle::sample(gh, [](double x1, double x2) { return oracle::gamma2(x1, x2 - 1.0, 0.01); });
    const auto smooth = oracle::sample(gh, [](double x1, double x2) { return std::cos(x1) * std::exp(-x2); });
    CHECK(std::abs(measure_pairing(nd, smooth) - std::exp(-1.0)) <= 1e-3);

    VorticityMeasure out;
    out.atoms.push_back({{10.0, 1.0}, 1.0});
    CHECK_THROWS_AS(measure_pairing(out, one), DomainError);
  }

  TEST_CASE("measure_pairing is bilinear") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> U(-1, 1), P(0, 1);
    HalfPlaneGrid g(-1.0, 1.0, 1.0, 12, 9);
    ScalarField p1(g), p2(g), d(g);
    for (std::size_t i = 0; i < g.size(); ++i) p1.values[i] = U(rng), p2.values[i] = U(rng), d.values[i] = U(rng);
    VorticityMeasure m;
    m.atoms.push_back({{U(rng), P(rng)}, U(rng)});
    m.sheet.push_back({{U(rng), P(rng)}, U(rng)});
    m.density = d;
    const double a = 0.7, b = -1.3;
    const double lhs = measure_pairing(m, axpy(a, p1, scaled(p2, b)));
    const double rhs = a * measure_pairing(m, p1) + b * measure_pairing(m, p2);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }

  TEST_CASE("time mesh") {
    TimeMesh m = TimeMesh::graded(0.5, 12);
    CHECK(m.nodes.size() == 12);
    double s = 0.0;
    for (std::size_t k = 0; k < m.nodes.size(); ++k) {
      CHECK(m.nodes[k] > 0.0);
      CHECK(m.nodes[k] < 0.5);
      if (k) CHECK(m.nodes[k] > m.nodes[k - 1]);
      s += m.weights[k];
    }
    CHECK(s == doctest::Approx(0.5).epsilon(1e-12));
    // clustered at both ends
    CHECK(m.nodes[1] - m.nodes[0] < m.nodes[6] - m.nodes[5]);
    CHECK(m.nodes[11] - m.nodes[10] < m.nodes[6] - m.nodes[5]);
    CHECK_THROWS_AS(TimeMesh::graded(-1.0, 4), InvalidArgument);
  }

  TEST_CASE("pairwise_sum is order-fixed") {
    std::vector<double> v(1000);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 / (1.0 + i);
    const double a = pairwise_sum(v), b = pairwise_sum(v);
    CHECK(a == b);
    double naive = 0.0;
    for (double x : v) naive += x;
    CHECK(a == doctest::Approx(naive).epsilon(1e-14));
  }
}
