#include "hpvort/scenario.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "hpvort/biot_savart.hpp"
#include "hpvort/errors.hpp"
#include "hpvort/navier_stokes.hpp"
#include "hpvort/vorticity_semigroup.hpp"

namespace hpv {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!ok.count(it.key())) throw ConfigError(where + ": unknown key '" + it.key() + "'");
}

double get_number(const json& j, const char* key, const std::string& where, double def) {
  if (!j.contains(key)) return def;
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  return v.get<double>();
}

std::size_t get_count(const json& j, const char* key, const std::string& where, std::size_t def) {
  if (!j.contains(key)) return def;
  const json& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() <= 0)
    throw ConfigError(where + "." + key + ": expected a positive integer");
  return static_cast<std::size_t>(v.get<long long>());
}

Point2 get_point(const json& j, const char* key, const std::string& where, Point2 def) {
  if (!j.contains(key)) return def;
  const json& v = j.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw ConfigError(where + "." + key + ": expected [x1, x2]");
  return {v[0].get<double>(), v[1].get<double>()};
}

json to_json(const RunConfig& c) {
  json j;
  j["scenario"] = c.scenario;
  j["grid"] = {{"L1", c.L1}, {"L2", c.L2}, {"n1", c.n1}, {"n2", c.n2}};
  j["time"] = {{"t_end", c.t_end}, {"snapshots", c.snapshots}, {"duhamel_nodes", c.duhamel_nodes}};
  json init = json::object();
  if (!c.atoms.empty()) {
    json a = json::array();
    for (const auto& s : c.atoms) a.push_back({{"x1", s.x1}, {"x2", s.x2}, {"kappa", s.kappa}});
    init["atoms"] = a;
  }
  if (c.sheet.present)
    init["sheet"] = {{"from", {c.sheet.from.x1, c.sheet.from.x2}},
                     {"to", {c.sheet.to.x1, c.sheet.to.x2}},
                     {"density", c.sheet.density},
                     {"samples", c.sheet.samples}};
  if (c.density.present)
    init["density"] = {{"center", {c.density.center.x1, c.density.center.x2}},
                       {"width", c.density.width},
                       {"amplitude", c.density.amplitude}};
  if (c.dipole.present)
    init["trace_zero_dipole"] = {{"amplitude", c.dipole.amplitude},
                                 {"center", {c.dipole.center.x1, c.dipole.center.x2}},
                                 {"radius", c.dipole.radius}};
  j["initial"] = init;
  j["solver"] = {{"tol", c.tol}, {"max_iter", c.max_iter}, {"q", c.q}, {"p", c.p}};
  j["output"] = {{"directory", c.directory}, {"formats", c.formats}};
  return j;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error("cannot write " + p.string());
  f << text;
  if (!f) throw Error("write failed: " + p.string());
}

std::string snapshot_csv(const ScalarField& w, const VectorField& u) {
  const auto& g = w.grid;
  std::string s = "x1,x2,omega,u1,u2\n";
  s.reserve(g.size() * 100);
  for (std::size_t j = 0; j < g.n2(); ++j)
    for (std::size_t i = 0; i < g.n1(); ++i) {
      const std::size_t k = g.index(i, j);
      s += format_double(g.x1(i));
      s += ',';
      s += format_double(g.x2(j));
      s += ',';
      s += format_double(w.values[k]);
      s += ',';
      s += format_double(u.u1[k]);
      s += ',';
      s += format_double(u.u2[k]);
      s += '\n';
    }
  return s;
}

// gnuplot "matrix nonuniform" layout: first row x1 nodes, first column x2.
std::string gnuplot_matrix(const ScalarField& w) {
  const auto& g = w.grid;
  std::string s = format_double(static_cast<double>(g.n1()));
  for (std::size_t i = 0; i < g.n1(); ++i) s += ' ' + format_double(g.x1(i));
  s += '\n';
  for (std::size_t j = 0; j < g.n2(); ++j) {
    s += format_double(g.x2(j));
    for (std::size_t i = 0; i < g.n1(); ++i) s += ' ' + format_double(w.at(i, j));
    s += '\n';
  }
  return s;
}

std::string snapshot_name(std::size_t k, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "snapshot_%03zu%s", k, ext);
  return buf;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

HalfPlaneGrid RunConfig::grid() const { return HalfPlaneGrid::centered(L1, L2, n1, n2); }

void RunConfig::validate() const {
  const auto& names = scenario_names();
  if (std::find(names.begin(), names.end(), scenario) == names.end())
    throw ConfigError("unknown scenario '" + scenario + "'");
  if (!(L1 > 0.0) || !(L2 > 0.0) || !std::isfinite(L1) || !std::isfinite(L2))
    throw ConfigError("grid extents must be positive");
  if (n1 < 8 || n2 < 8) throw ConfigError("grid needs at least 8 nodes per direction");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ConfigError("t_end must be positive");
  if (snapshots < 1 || duhamel_nodes < 2) throw ConfigError("snapshots >= 1 and duhamel_nodes >= 2 required");
  if (sheet.present && sheet.samples < 1) throw ConfigError("sheet samples must be positive");
  if (density.present && !(density.width > 0.0)) throw ConfigError("density width must be positive");
  if (dipole.present && !(dipole.radius > 0.0)) throw ConfigError("dipole radius must be positive");
  if (directory.empty()) throw ConfigError("output directory is empty");
  for (const auto& f : formats)
    if (f != "csv" && f != "gnuplot") throw ConfigError("unknown output format '" + f + "'");
  SolverOptions opt;
  opt.tol = tol;
  opt.max_iter = max_iter;
  opt.q = q;
  opt.p = p;
  opt.duhamel_nodes = duhamel_nodes;
  opt.validate();

  const bool any = !atoms.empty() || sheet.present || density.present || dipole.present;
  if (scenario == "point_vortex" && atoms.size() != 1) throw ConfigError("point_vortex needs exactly one atom");
  if (scenario == "vortex_pair" && atoms.size() != 2) throw ConfigError("vortex_pair needs exactly two atoms");
  if (scenario == "vortex_sheet" && !sheet.present) throw ConfigError("vortex_sheet needs initial.sheet");
  if (scenario == "smooth_blob" && !density.present) throw ConfigError("smooth_blob needs initial.density");
  if (scenario == "trace_zero_dipole" && !dipole.present)
    throw ConfigError("trace_zero_dipole needs initial.trace_zero_dipole");
  if (!any) throw ConfigError("no initial data given");
  for (const auto& a : atoms)
    if (!(a.x2 >= 0.0) || !std::isfinite(a.x1) || !std::isfinite(a.kappa))
      throw ConfigError("atoms must lie in the closed upper half plane");
}

RunConfig parse_run_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(j, "config", {"scenario", "grid", "time", "initial", "solver", "output"});
  RunConfig c;
  if (!j.contains("scenario") || !j["scenario"].is_string()) throw ConfigError("config.scenario: expected a string");
  c.scenario = j["scenario"].get<std::string>();
  if (j.contains("grid")) {
    const json& g = j["grid"];
    check_keys(g, "grid", {"L1", "L2", "n1", "n2"});
    c.L1 = get_number(g, "L1", "grid", c.L1);
    c.L2 = get_number(g, "L2", "grid", c.L2);
    c.n1 = get_count(g, "n1", "grid", c.n1);
    c.n2 = get_count(g, "n2", "grid", c.n2);
  }
  if (j.contains("time")) {
    const json& t = j["time"];
    check_keys(t, "time", {"t_end", "snapshots", "duhamel_nodes"});
    c.t_end = get_number(t, "t_end", "time", c.t_end);
    c.snapshots = get_count(t, "snapshots", "time", c.snapshots);
    c.duhamel_nodes = get_count(t, "duhamel_nodes", "time", c.duhamel_nodes);
  }
  if (j.contains("initial")) {
    const json& in = j["initial"];
    check_keys(in, "initial", {"atoms", "sheet", "density", "trace_zero_dipole"});
    if (in.contains("atoms")) {
      if (!in["atoms"].is_array()) throw ConfigError("initial.atoms: expected an array");
      for (const json& a : in["atoms"]) {
        check_keys(a, "initial.atoms[]", {"x1", "x2", "kappa"});
        AtomSpec s;
        s.x1 = get_number(a, "x1", "atom", s.x1);
        s.x2 = get_number(a, "x2", "atom", s.x2);
        s.kappa = get_number(a, "kappa", "atom", s.kappa);
        c.atoms.push_back(s);
      }
    }
    if (in.contains("sheet")) {
      const json& s = in["sheet"];
      check_keys(s, "initial.sheet", {"from", "to", "density", "samples"});
      c.sheet.present = true;
      c.sheet.from = get_point(s, "from", "sheet", c.sheet.from);
      c.sheet.to = get_point(s, "to", "sheet", c.sheet.to);
      c.sheet.density = get_number(s, "density", "sheet", c.sheet.density);
      c.sheet.samples = get_count(s, "samples", "sheet", c.sheet.samples);
    }
    if (in.contains("density")) {
      const json& d = in["density"];
      check_keys(d, "initial.density", {"center", "width", "amplitude"});
      c.density.present = true;
      c.density.center = get_point(d, "center", "density", c.density.center);
      c.density.width = get_number(d, "width", "density", c.density.width);
      c.density.amplitude = get_number(d, "amplitude", "density", c.density.amplitude);
    }
    if (in.contains("trace_zero_dipole")) {
      const json& d = in["trace_zero_dipole"];
      check_keys(d, "initial.trace_zero_dipole", {"amplitude", "center", "radius"});
      c.dipole.present = true;
      c.dipole.amplitude = get_number(d, "amplitude", "trace_zero_dipole", c.dipole.amplitude);
      c.dipole.center = get_point(d, "center", "trace_zero_dipole", c.dipole.center);
      c.dipole.radius = get_number(d, "radius", "trace_zero_dipole", c.dipole.radius);
    }
  }
  if (j.contains("solver")) {
    const json& s = j["solver"];
    check_keys(s, "solver", {"tol", "max_iter", "q", "p"});
    c.tol = get_number(s, "tol", "solver", c.tol);
    c.max_iter = get_count(s, "max_iter", "solver", c.max_iter);
    c.q = get_number(s, "q", "solver", c.q);
    c.p = get_number(s, "p", "solver", c.p);
  }
  if (j.contains("output")) {
    const json& o = j["output"];
    check_keys(o, "output", {"directory", "formats"});
    if (o.contains("directory")) {
      if (!o["directory"].is_string()) throw ConfigError("output.directory: expected a string");
      c.directory = o["directory"].get<std::string>();
    }
    if (o.contains("formats")) {
      if (!o["formats"].is_array()) throw ConfigError("output.formats: expected an array");
      c.formats.clear();
      for (const json& f : o["formats"]) {
        if (!f.is_string()) throw ConfigError("output.formats: expected strings");
        c.formats.push_back(f.get<std::string>());
      }
    }
  }
  c.validate();
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_run_config(ss.str());
}

std::string config_hash(const RunConfig& cfg) {
  const std::string s = to_json(cfg).dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

VorticityMeasure point_vortex(double kappa, Point2 x0) {
  VorticityMeasure m;
  m.atoms.push_back({x0, kappa});
  m.validate();
  return m;
}

VorticityMeasure vortex_pair(double kappa, double a, double h) {
  VorticityMeasure m;
  m.atoms.push_back({{a, h}, kappa});
  m.atoms.push_back({{-a, h}, -kappa});
  m.validate();
  return m;
}

VorticityMeasure vortex_sheet(const SheetSpec& s) {
  if (s.samples < 1) throw InvalidArgument("vortex_sheet: samples must be positive");
  const double dx = s.to.x1 - s.from.x1, dy = s.to.x2 - s.from.x2;
  const double len = std::hypot(dx, dy);
  const double w = s.density * len / static_cast<double>(s.samples);
  VorticityMeasure m;
  m.sheet.reserve(s.samples);
  for (std::size_t k = 0; k < s.samples; ++k) {
    const double th = (static_cast<double>(k) + 0.5) / static_cast<double>(s.samples);
    m.sheet.push_back({{s.from.x1 + th * dx, s.from.x2 + th * dy}, w});
  }
  m.validate();
  return m;
}

VorticityMeasure smooth_blob(const BlobSpec& b, const HalfPlaneGrid& grid) {
  if (!(b.width > 0.0)) throw InvalidArgument("smooth_blob: width must be positive");
  ScalarField f(grid);
  for (std::size_t j = 0; j < grid.n2(); ++j)
    for (std::size_t i = 0; i < grid.n1(); ++i) {
      const double d1 = grid.x1(i) - b.center.x1, d2 = grid.x2(j) - b.center.x2;
      f.at(i, j) = b.amplitude * std::exp(-(d1 * d1 + d2 * d2) / (b.width * b.width));
    }
  VorticityMeasure m;
  m.density = std::move(f);
  return m;
}

VorticityMeasure trace_zero_dipole(const DipoleSpec& d, const HalfPlaneGrid& grid) {
  const double R = d.radius;
  if (!(R > 0.0)) throw InvalidArgument("trace_zero_dipole: radius must be positive");
  if (d.center.x2 - R <= 0.0 || d.center.x1 - R < grid.x1_min() || d.center.x1 + R > grid.x1_max() ||
      d.center.x2 + R > grid.x2_max())
    throw InvalidArgument("trace_zero_dipole: support must lie inside the open computational domain");
  constexpr double a = 6.0;
  ScalarField f(grid);
  for (std::size_t j = 0; j < grid.n2(); ++j)
    for (std::size_t i = 0; i < grid.n1(); ++i) {
      const double r = std::hypot(grid.x1(i) - d.center.x1, grid.x2(j) - d.center.x2);
      const double s = r / R;
      if (s >= 1.0) continue;
      const double q = 1.0 - s * s;
      const double b = std::exp(a - a / q);
      const double dphi = -2.0 * a * s / (q * q);
      const double d2phi = -2.0 * a / (q * q) - 8.0 * a * s * s / (q * q * q);
      // Laplacian of the radial profile: psi'' + psi'/r with psi' = b phi' / R
      const double lap = d.amplitude * b * (d2phi + dphi * dphi - 2.0 * a / (q * q)) / (R * R);
      f.at(i, j) = -lap;
    }
  VorticityMeasure m;
  m.density = std::move(f);
  return m;
}

VorticityMeasure builtin_initial(const RunConfig& cfg, const HalfPlaneGrid& grid) {
  VorticityMeasure m;
  for (const auto& a : cfg.atoms) m.atoms.push_back({{a.x1, a.x2}, a.kappa});
  if (cfg.sheet.present) m.sheet = vortex_sheet(cfg.sheet).sheet;
  if (cfg.density.present || cfg.dipole.present) {
    ScalarField f(grid);
    if (cfg.density.present) f = axpy(1.0, f, *smooth_blob(cfg.density, grid).density);
    if (cfg.dipole.present) f = axpy(1.0, f, *trace_zero_dipole(cfg.dipole, grid).density);
    m.density = std::move(f);
  }
  m.validate();
  return m;
}

int run_scenario(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  const HalfPlaneGrid grid = cfg.grid();
  const VorticityMeasure mu0 = builtin_initial(cfg, grid);
  const TimeMesh mesh = TimeMesh::graded(cfg.t_end, cfg.snapshots);

  SolutionPath path;
  json metrics;
  bool converged = true;
  metrics["scenario"] = cfg.scenario;
  if (cfg.scenario == "stokes_only") {
    path.times = mesh.nodes;
    std::sort(path.times.begin(), path.times.end());
    if (path.times.back() < mesh.t_end) path.times.push_back(mesh.t_end);
    for (double t : path.times) {
      log << "T(t) mu0 at t = " << format_double(t) << "\n";
      path.omega.push_back(apply_T_composite(mu0, t, grid));
      VorticityMeasure m;
      m.density = path.omega.back();
      path.velocity.push_back(velocity_from_measure(m, grid));
    }
    const IterateMetrics im = iteration_metrics(path, cfg.q, cfg.p);
    metrics["solver"] = "none";
    metrics["N"] = im.N;
    metrics["L"] = im.L;
    metrics["u_inf_scaled"] = im.u_inf_scaled;
  } else {
    SolverOptions opt;
    opt.tol = cfg.tol;
    opt.max_iter = cfg.max_iter;
    opt.q = cfg.q;
    opt.p = cfg.p;
    opt.duhamel_nodes = cfg.duhamel_nodes;
    log << "Picard iteration on " << mesh.nodes.size() << " snapshot times\n";
    MildSolution sol = picard_solve(mu0, mesh, grid, opt);
    converged = sol.converged;
    path = std::move(sol.path);
    const auto& m = sol.metrics;
    std::vector<double> ratios;
    for (std::size_t k = 1; k < m.diff_norms.size(); ++k)
      ratios.push_back(m.diff_norms[k - 1] > 0.0 ? m.diff_norms[k] / m.diff_norms[k - 1] : 0.0);
    metrics["solver"] = "picard";
    metrics["converged"] = sol.converged;
    metrics["iterations"] = sol.iterations;
    metrics["residual"] = sol.residual;
    metrics["q"] = m.q;
    metrics["p"] = m.p;
    metrics["N"] = m.N;
    metrics["L"] = m.L;
    metrics["u_inf_scaled"] = m.u_inf_scaled;
    metrics["diff_norms"] = m.diff_norms;
    metrics["rel_l1_diff"] = m.rel_l1_diff;
    metrics["contraction_ratios"] = ratios;
    log << "iterations " << sol.iterations << ", residual " << format_double(sol.residual)
        << (sol.converged ? "" : " (not converged)") << "\n";
  }

  // Measured constants of the run: the largest ratio of the scaled sup norm
  // to the scaled Lp norm, and the largest scaled discrete divergence.
  double sobolev_ratio = 0.0, div_scaled = 0.0;
  std::vector<double> l1, mass;
  for (std::size_t k = 0; k < path.times.size(); ++k) {
    const double t = path.times[k];
    const double up = vector_lp_norm(path.velocity[k], cfg.p) * std::pow(t, 0.5 - 1.0 / cfg.p);
    const double ui = std::sqrt(t) * std::max(max_abs(path.velocity[k].u1), max_abs(path.velocity[k].u2));
    if (up > 0.0) sobolev_ratio = std::max(sobolev_ratio, ui / up);
    const double gu = max_abs(path.velocity[k].u1) + max_abs(path.velocity[k].u2);
    const double hmax = std::max(grid.h1(), grid.h2());
    if (gu > 0.0) div_scaled = std::max(div_scaled, max_abs(divergence_h(path.velocity[k]).values) * hmax / gu);
    l1.push_back(lq_norm(path.omega[k], 1.0));
    mass.push_back(integrate_field(path.omega[k]));
  }
  metrics["times"] = path.times;
  metrics["omega_l1"] = l1;
  metrics["omega_mass"] = mass;

  json meta;
  meta["grid"] = {{"x1_min", grid.x1_min()}, {"x1_max", grid.x1_max()}, {"x2_max", grid.x2_max()},
                  {"n1", grid.n1()},         {"n2", grid.n2()},         {"h1", grid.h1()},
                  {"h2", grid.h2()}};
  meta["times"] = path.times;
  meta["config_hash"] = config_hash(cfg);
  meta["config"] = to_json(cfg);
  meta["measured_constants"] = {{"sup_over_lp_velocity", sobolev_ratio},
                                {"scaled_divergence", div_scaled},
                                {"initial_total_variation", total_variation(mu0)},
                                {"initial_mass", total_mass(mu0)}};
  json files = json::array();

  namespace fs = std::filesystem;
  const fs::path dir(cfg.directory);
  fs::create_directories(dir);
  const bool csv = std::find(cfg.formats.begin(), cfg.formats.end(), "csv") != cfg.formats.end();
  const bool gp = std::find(cfg.formats.begin(), cfg.formats.end(), "gnuplot") != cfg.formats.end();
  for (std::size_t k = 0; k < path.times.size(); ++k) {
    if (csv) {
      write_file(dir / snapshot_name(k, ".csv"), snapshot_csv(path.omega[k], path.velocity[k]));
      files.push_back(snapshot_name(k, ".csv"));
    }
    if (gp) {
      write_file(dir / snapshot_name(k, "_omega.dat"), gnuplot_matrix(path.omega[k]));
      files.push_back(snapshot_name(k, "_omega.dat"));
    }
  }
  meta["files"] = files;
  write_file(dir / "metrics.json", metrics.dump(2) + "\n");
  write_file(dir / "metadata.json", meta.dump(2) + "\n");
  log << "wrote " << files.size() << " field files to " << dir.string() << "\n";
  return converged ? 0 : 3;
}

void kernel_dump(const std::string& kernel, double t, Point2 y, const HalfPlaneGrid& grid, std::ostream& out) {
  if (!(t > 0.0)) throw InvalidArgument("kernel_dump: t must be positive");
  if (kernel == "W" || kernel == "Wtilde") {
    const ScalarField f = kernel_W_field(y, t, grid, {}, kernel == "W" ? KernelPart::full : KernelPart::tilde);
    out << "x1,x2," << kernel << "\n";
    for (std::size_t j = 0; j < grid.n2(); ++j)
      for (std::size_t i = 0; i < grid.n1(); ++i)
        out << format_double(grid.x1(i)) << ',' << format_double(grid.x2(j)) << ',' << format_double(f.at(i, j))
            << '\n';
  } else if (kernel == "G") {
    const auto G = green_field(y, t, grid);
    out << "x1,x2,G11,G12,G21,G22\n";
    for (std::size_t j = 0; j < grid.n2(); ++j)
      for (std::size_t i = 0; i < grid.n1(); ++i) {
        out << format_double(grid.x1(i)) << ',' << format_double(grid.x2(j));
        for (int c = 0; c < 4; ++c) out << ',' << format_double(G[c].at(i, j));
        out << '\n';
      }
  } else {
    throw InvalidArgument("kernel_dump: unknown kernel '" + kernel + "' (W, Wtilde or G)");
  }
}

}  // namespace hpv
