#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "doifbp/grid.hpp"
#include "doifbp/hydro.hpp"

namespace doifbp {

/// Everything a `run` or `sweep` needs. Parsed from a `key = value` file.
struct RunConfig {
  int dim = 1;
  std::vector<int> cells{128};
  std::vector<double> lengths{1.0};
  Boundary bc = Boundary::periodic;
  int sphere_degree = 7;
  std::vector<double> gammas{5.0};
  PhysCoeffs coeffs{};

  std::string preset = "colliding_streams";
  double rho0 = 0.9;
  double amplitude = 0.5;
  double eta0 = 0.1;
  double anisotropy = 0.0;
  double noise = 0.0;

  double t_final = 0.5;
  double cfl_safety = 0.3;
  int record_every = 1;
  int snapshot_every = 0;
  double congestion_eps = 0.05;
  std::string output_dir = "out";
  std::uint64_t seed = 0;

  Grid grid() const;
  bool operator==(const RunConfig&) const = default;
};

/// Known initial-data presets.
const std::vector<std::string>& preset_names();

/// Parses and validates. Unknown keys, malformed values and violated
/// constraints throw ConfigError with the line number or key name.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Canonical text form: every key, fixed order, 17 significant digits.
std::string serialize_config(const RunConfig& config);

/// Checks every constraint; throws ConfigError naming the key.
void validate_config(const RunConfig& config);

}  // namespace doifbp
