#pragma once

#include <string>
#include <vector>

#include "doifbp/config.hpp"

namespace doifbp {

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

/// The 1D colliding-streams benchmark: rho0 = 0.9, u = -0.5 sin(x), eta0 = 0.1,
/// uniform f, n = 256 cells on a periodic domain of length 2 pi, T = 0.5.
RunConfig colliding_streams_benchmark();

/// Sphere quadrature moments and Laplace-Beltrami spectrum, L = 2..7.
CheckResult check_quadrature();
/// Mass and rod mass over 1000 periodic steps in 1D (128) and 2D (64 x 64).
CheckResult check_conservation();
/// |eta_moment(f) - eta|_inf at T = 0.1 over three refinement levels.
CheckResult check_moment_consistency();
/// Per-step monotonicity with u frozen at 0, and the cumulative violation
/// of the discrete energy inequality on the coupled benchmark.
CheckResult check_energy();
/// Symmetry and trace of the kinetic stress on random band-limited f, and
/// the closed form for f = (1 + b P2(tau_3)) / (4 pi).
CheckResult check_stress();
/// Gamma sweep {5, 10, 20, 40, 80} of the benchmark.
CheckResult check_gamma_limit(unsigned threads = 0);
/// Renormalized continuity residual for b(z) = z and b(z) = z / (1 + z).
CheckResult check_renormalized();
/// Snapshot mid-run, restore, and replay the remainder bit-exactly.
/// Scratch files go to `scratch_dir`.
CheckResult check_replay(const std::string& scratch_dir);

/// Suites run by the `check` subcommand.
inline const std::vector<int> kCheckSuites{1, 2, 3, 4, 5, 7};

/// Runs one suite by number (1-8). Exceptions become failed results.
CheckResult run_check(int id, const std::string& scratch_dir = ".", unsigned threads = 0);

}  // namespace doifbp
