#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "hpvort/biot_savart.hpp"
#include "hpvort/errors.hpp"
#include "hpvort/scenario.hpp"
#include "hpvort/vorticity_semigroup.hpp"
#include "json.hpp"
#include "oracles.hpp"

using namespace hpv;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("hpvort_unit_" + name);
  fs::remove_all(p);
  return p;
}

std::string read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string small_config(const std::string& scenario, const std::string& initial, const fs::path& dir,
                         const std::string& extra_solver = "") {
  return R"({"scenario": ")" + scenario + R"(",
    "grid": {"L1": 8, "L2": 8, "n1": 64, "n2": 32},
    "time": {"t_end": 0.5, "snapshots": 4, "duhamel_nodes": 8},
    "initial": )" + initial + R"(,
    "solver": {"tol": 1e-8)" + extra_solver + R"(},
    "output": {"directory": ")" + dir.string() + R"(", "formats": ["csv", "gnuplot"]}})";
}

const char* one_atom = R"({"atoms": [{"x1": 0.0, "x2": 1.0, "kappa": 0.05}]})";

}  // namespace

TEST_SUITE("cli_app") {
  TEST_CASE("config parsing") {
    const auto cfg = parse_run_config(small_config("point_vortex", one_atom, "out"));
    CHECK(cfg.scenario == "point_vortex");
    CHECK(cfg.n1 == 64);
    CHECK(cfg.snapshots == 4);
    REQUIRE(cfg.atoms.size() == 1);
    CHECK(cfg.atoms[0].kappa == 0.05);
    CHECK(cfg.formats == std::vector<std::string>{"csv", "gnuplot"});
    // defaults for absent blocks
    const auto d = parse_run_config(R"({"scenario": "point_vortex", "initial": )" + std::string(one_atom) + "}");
    CHECK(d.n1 == 256);
    CHECK(d.q == doctest::Approx(4.0 / 3.0));

    CHECK_THROWS_AS(parse_run_config("{not json"), ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"scenario": "point_vortex", "initial": {}, "extra": 1})"), ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"scenario": "point_vortex", "grid": {"n1": "many"}})"), ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"scenario": "warp_drive", "initial": {}})"), ConfigError);
    // a point vortex needs exactly one atom
    CHECK_THROWS_AS(parse_run_config(R"({"scenario": "point_vortex", "initial": {}})"), ConfigError);
    CHECK_THROWS_AS(parse_run_config(small_config("point_vortex", one_atom, "o", R"(, "max_iter": 0)")), ConfigError);
    CHECK_THROWS_AS(load_run_config("/nonexistent/config.json"), ConfigError);
  }

  TEST_CASE("config hash is deterministic and sensitive") {
    const auto a = parse_run_config(small_config("point_vortex", one_atom, "out"));
    const auto b = parse_run_config(small_config("point_vortex", one_atom, "out"));
    auto c = a;
    c.atoms[0].kappa = 0.06;
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a) != config_hash(c));
    CHECK(config_hash(a).size() == 16);
  }

  TEST_CASE("builtin initial data") {
    SheetSpec s;
    s.present = true;
    const auto sheet = vortex_sheet(s);
    CHECK(std::abs(total_mass(sheet) - 2.0) <= 1e-10);
    CHECK(sheet.sheet.size() == s.samples);

    const auto g = HalfPlaneGrid::centered(8, 8, 256, 128);
    DipoleSpec d;
    d.present = true;
    const auto dip = trace_zero_dipole(d, g);
    CHECK(std::abs(integrate_field(*dip.density)) <= 1e-10);
    CHECK(oracle::sup_abs(boundary_trace(dip, g).values) <= 1e-6);
    DipoleSpec off = d;
    off.center = {0.0, 2.0};  // support would cross the boundary
    CHECK_THROWS_AS(trace_zero_dipole(off, g), InvalidArgument);

    const auto pair = vortex_pair(0.3, 0.5, 1.0);
    REQUIRE(pair.atoms.size() == 2);
    CHECK(total_mass(pair) == 0.0);
    CHECK(pair.atoms[0].pos.x1 == -pair.atoms[1].pos.x1);
  }

  TEST_CASE("evolve writes bitwise-reproducible artifacts") {
    const auto dir1 = scratch("stokes1"), dir2 = scratch("stokes2");
    const std::string init = R"({"atoms": [{"x1": 0.0, "x2": 1.0, "kappa": 1.0}]})";
    std::stringstream log;
    CHECK(run_scenario(parse_run_config(small_config("stokes_only", init, dir1)), log) == 0);
    CHECK(run_scenario(parse_run_config(small_config("stokes_only", init, dir2)), log) == 0);
    const auto meta = nlohmann::json::parse(read_file(dir1 / "metadata.json"));
    const auto times = meta.at("times").get<std::vector<double>>();
    REQUIRE(times.size() == 5);  // snapshot nodes plus t_end
    for (std::size_t k = 0; k < times.size(); ++k) {
      char name[64];
      std::snprintf(name, sizeof name, "snapshot_%03zu.csv", k);
      const auto a = read_file(dir1 / name), b = read_file(dir2 / name);
      CHECK(!a.empty());
      CHECK(a == b);
    }
    CHECK(read_file(dir1 / "snapshot_000_omega.dat") == read_file(dir2 / "snapshot_000_omega.dat"));

    // CSV layout and the exact Stokes solution omega = kappa W(., x0, t)
    std::istringstream csv(read_file(dir1 / "snapshot_002.csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "x1,x2,omega,u1,u2");
    const auto g = HalfPlaneGrid::centered(8, 8, 64, 32);
    double e = 0.0, m = 0.0;
    std::size_t rows = 0;
    while (std::getline(csv, line)) {
      double x1, x2, w, u1, u2;
      REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf", &x1, &x2, &w, &u1, &u2) == 5);
      if (rows % 37 == 0) {
        const double ref = kernel_W({x1, x2}, {0.0, 1.0}, times[2]).total();
        e = std::max(e, std::abs(w - ref));
        m = std::max(m, std::abs(ref));
      }
      // x1 runs fastest
      if (rows == 1) CHECK(x1 == doctest::Approx(g.x1(1)));
      ++rows;
    }
    CHECK(rows == g.size());
    CHECK(e <= 1e-4 * m);
  }

  TEST_CASE("evolve exit codes") {
    std::stringstream log;
    const auto dir = scratch("unconverged");
    const auto cfg = parse_run_config(small_config("point_vortex", one_atom, dir, R"(, "max_iter": 1)"));
    CHECK(run_scenario(cfg, log) == 3);
    // metrics are still written
    const auto metrics = nlohmann::json::parse(read_file(dir / "metrics.json"));
    CHECK(metrics.at("converged") == false);

    const auto ok = scratch("converged");
    CHECK(run_scenario(parse_run_config(small_config("point_vortex", one_atom, ok)), log) == 0);
    const auto m2 = nlohmann::json::parse(read_file(ok / "metrics.json"));
    CHECK(m2.at("converged") == true);
    const auto dn = m2.at("diff_norms").get<std::vector<double>>();
    for (std::size_t k = 1; k < dn.size(); ++k) CHECK(dn[k] < dn[k - 1]);
  }

  TEST_CASE("kernel dump") {
    const auto g = HalfPlaneGrid::centered(2, 2, 16, 8);
    std::stringstream out;
    kernel_dump("W", 0.5, {0.0, 1.0}, g, out);
    std::string line;
    std::getline(out, line);
    CHECK(line == "x1,x2,W");
    std::size_t rows = 0;
    double e = 0.0;
    while (std::getline(out, line)) {
      double x1, x2, w;
      REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf", &x1, &x2, &w) == 3);
      e = std::max(e, std::abs(w - kernel_W({x1, x2}, {0.0, 1.0}, 0.5).total()));
      ++rows;
    }
    CHECK(rows == g.size());
    CHECK(e <= 1e-6);
    std::stringstream gout;
    kernel_dump("G", 0.5, {0.0, 1.0}, g, gout);
    std::getline(gout, line);
    CHECK(line == "x1,x2,G11,G12,G21,G22");
    std::stringstream bad;
    CHECK_THROWS_AS(kernel_dump("Q", 0.5, {0.0, 1.0}, g, bad), InvalidArgument);
  }

  TEST_CASE("number formatting round-trips") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) CHECK(std::stod(format_double(v)) == v);
  }
}
