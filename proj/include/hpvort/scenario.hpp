#pragma once
/// @file scenario.hpp
/// Run configuration, built-in initial data, scenario runs with artifact
/// output, and kernel slices for the command line tool.

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "hpvort/grid.hpp"

namespace hpv {

struct AtomSpec {
  double x1 = 0.0, x2 = 1.0, kappa = 0.0;
};

struct SheetSpec {
  bool present = false;
  Point2 from{-1.0, 1.0}, to{1.0, 1.0};  ///< straight segment
  double density = 1.0;                  ///< circulation per unit length
  std::size_t samples = 400;
};

struct BlobSpec {
  bool present = false;
  Point2 center{0.0, 1.0};
  double width = 0.5;
  double amplitude = 1.0;
};

struct DipoleSpec {
  bool present = false;
  double amplitude = 1.0;
  Point2 center{0.0, 3.5};
  double radius = 2.5;
};

struct RunConfig {
  std::string scenario;
  double L1 = 8.0, L2 = 8.0;
  std::size_t n1 = 256, n2 = 128;
  double t_end = 0.5;
  std::size_t snapshots = 12;
  std::size_t duhamel_nodes = 12;
  std::vector<AtomSpec> atoms;
  SheetSpec sheet;
  BlobSpec density;
  DipoleSpec dipole;
  double tol = 1e-8;
  std::size_t max_iter = 20;
  double q = 4.0 / 3.0, p = 4.0;
  std::string directory = "hpvort_out";
  std::vector<std::string> formats{"csv"};

  HalfPlaneGrid grid() const;
  /// Throws ConfigError for bad counts, times, names or missing initial data.
  void validate() const;
};

inline const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> n{"point_vortex", "vortex_pair",      "vortex_sheet",
                                          "smooth_blob",  "trace_zero_dipole", "stokes_only"};
  return n;
}

/// Parses the JSON configuration; unknown keys and wrong types are errors.
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);

/// 64-bit FNV-1a of the canonical JSON form of the configuration, as hex.
std::string config_hash(const RunConfig& cfg);

VorticityMeasure point_vortex(double kappa, Point2 x0);
/// +kappa at (a, h) and -kappa at (-a, h), odd under x1 -> -x1.
VorticityMeasure vortex_pair(double kappa, double a, double h);
/// Midpoint samples along the segment, weights density * |segment| / samples.
VorticityMeasure vortex_sheet(const SheetSpec& s);
VorticityMeasure smooth_blob(const BlobSpec& b, const HalfPlaneGrid& grid);
/// omega = -Lap psi with psi = amplitude * exp(6 - 6 / (1 - s^2)), s = |x - c| / radius,
/// a compactly supported smooth bump; the Laplacian is taken in closed form.
VorticityMeasure trace_zero_dipole(const DipoleSpec& d, const HalfPlaneGrid& grid);

/// All initial blocks of the configuration combined into one measure.
VorticityMeasure builtin_initial(const RunConfig& cfg, const HalfPlaneGrid& grid);

/// Runs the scenario and writes artifacts. Returns 0, or 3 when the Picard
/// iteration did not converge (artifacts are still written).
int run_scenario(const RunConfig& cfg, std::ostream& log);

/// Gridded slice x -> K(x, y, t) as CSV; kernel in {W, Wtilde, G}.
void kernel_dump(const std::string& kernel, double t, Point2 y, const HalfPlaneGrid& grid, std::ostream& out);

/// Formats with 17 significant digits.
std::string format_double(double v);

}  // namespace hpv
