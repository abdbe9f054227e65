#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "doifbp/integrator.hpp"

namespace doifbp {

/// Exponents reported for the excess density (rho - 1)_+.
inline const std::vector<double> kExcessNorms{1.0, 2.0, 4.0, std::numeric_limits<double>::infinity()};

/// L^p norms of (rho - 1)_+ for each p in `p_list`.
std::vector<double> excess_density_norms(const FluidState& state, const std::vector<double>& p_list = kExcessNorms);

/// Integral of |rho^gamma (rho - 1)|: how far pi (rho - 1) = 0 is from holding.
double complementarity_residual(const FluidState& state);

struct IncompressibilityDefect {
  double defect = 0.0;             // L2 norm of div u on {rho >= 1 - eps}
  double congested_volume = 0.0;   // measure of {rho >= 1 - eps}
};

IncompressibilityDefect incompressibility_defect(const FluidState& state, double eps);

struct SweepRow {
  double gamma = 0.0;
  std::vector<double> excess;          // aligned with kExcessNorms
  double rho_gamma_time_integral = 0.0;
  double complementarity = 0.0;
  double incompressibility_defect = 0.0;
  double congested_volume = 0.0;
  long steps = 0;
  std::vector<DiagnosticsRecord> records;
};

struct SweepResult {
  std::vector<SweepRow> rows;          // increasing gamma
  std::optional<double> slope_l2;      // d ln||(rho-1)_+||_2 / d ln gamma over the largest three gammas
  double eps = 0.05;
};

/// Builds the initial state for one gamma. Every run must receive identical
/// data apart from the pressure law.
using StateFactory = std::function<FluidState(double gamma)>;

struct SweepOptions {
  double t_final = 0.5;
  double eps = 0.05;
  double cfl_safety = 0.3;
  int record_every = 1;
  /// Worker threads; 0 means one per hardware thread.
  unsigned threads = 0;
};

/// Runs the coupled integrator once per gamma (concurrently when allowed)
/// and assembles the limit diagnostics in gamma order. A failing run is
/// rethrown as a NumericalError tagged with its gamma.
SweepResult gamma_sweep(const StateFactory& factory, const std::vector<double>& gammas, const SweepOptions& options);

/// Least-squares slope of ln y against ln x; empty if any y <= 0 or fewer than two points.
std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace doifbp
