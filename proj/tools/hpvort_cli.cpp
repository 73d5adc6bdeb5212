// hpvort: evolve a configured scenario, run the self-check suites, or dump
// kernel slices. Thread count comes from HPVORT_THREADS.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hpvort/errors.hpp"
#include "hpvort/scenario.hpp"
#include "hpvort/verify.hpp"

namespace {

std::vector<double> split_numbers(const std::string& s, std::size_t expect, const char* what) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw hpv::ConfigError(std::string("bad number in ") + what + ": " + item);
    v.push_back(x);
  }
  if (v.size() != expect)
    throw hpv::ConfigError(std::string(what) + " expects " + std::to_string(expect) + " comma-separated values");
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stokes and Navier-Stokes vorticity in the half plane"};
  app.require_subcommand(1);

  std::string config_path;
  auto* evolve = app.add_subcommand("evolve", "run the scenario described by a JSON config");
  evolve->add_option("config", config_path, "configuration file")->required();

  std::string suite;
  auto* verify = app.add_subcommand("verify", "run a self-check suite");
  verify->add_option("suite", suite, "kernels, line_ops, semigroup, biot_savart, T_operator, appendix, nonlinear, all")
      ->required();

  std::string kernel, y_text, grid_text = "8,8,256,128", out_path;
  double t = 0.0;
  auto* dump = app.add_subcommand("kernel-dump", "write x -> K(x, y, t) on the grid as CSV");
  dump->add_option("--kernel", kernel, "W, Wtilde or G")->required();
  dump->add_option("--t", t, "time")->required();
  dump->add_option("--y", y_text, "source point y1,y2")->required();
  dump->add_option("--grid", grid_text, "L1,L2,n1,n2 of the centred grid");
  dump->add_option("--out", out_path, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (evolve->parsed()) {
    hpv::RunConfig cfg;
    try {
      cfg = hpv::load_run_config(config_path);
    } catch (const hpv::Error& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return 2;
    }
    try {
      return hpv::run_scenario(cfg, std::cerr);
    } catch (const std::exception& e) {
      std::cerr << "run failed: " << e.what() << "\n";
      return 1;
    }
  }

  if (verify->parsed()) {
    try {
      return hpv::run_verify(suite, std::cout);
    } catch (const std::exception& e) {
      std::cerr << "verify failed: " << e.what() << "\n";
      return 1;
    }
  }

  try {
    const auto y = split_numbers(y_text, 2, "--y");
    const auto gv = split_numbers(grid_text, 4, "--grid");
    if (gv[2] < 8 || gv[3] < 8 || gv[2] != static_cast<double>(static_cast<std::size_t>(gv[2])) ||
        gv[3] != static_cast<double>(static_cast<std::size_t>(gv[3])))
      throw hpv::ConfigError("--grid node counts must be integers >= 8");
    const auto grid = hpv::HalfPlaneGrid::centered(gv[0], gv[1], static_cast<std::size_t>(gv[2]),
                                                   static_cast<std::size_t>(gv[3]));
    if (out_path.empty()) {
      hpv::kernel_dump(kernel, t, {y[0], y[1]}, grid, std::cout);
    } else {
      std::ofstream f(out_path, std::ios::binary);
      if (!f) throw hpv::Error("cannot write " + out_path);
      hpv::kernel_dump(kernel, t, {y[0], y[1]}, grid, f);
    }
  } catch (const hpv::ConfigError& e) {
    std::cerr << "argument error: " << e.what() << "\n";
    return 2;
  } catch (const hpv::InvalidArgument& e) {
    std::cerr << "argument error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "kernel-dump failed: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
