#pragma once

#include <functional>
#include <vector>

#include "doifbp/state.hpp"

namespace doifbp {

/// One row of the energy ledger. Dissipation entries are rates (per unit
/// time) evaluated on the current fields, already weighted by the physical
/// coefficients: 4 D_tau |grad_tau sqrt f|^2, 4 D |grad sqrt f|^2,
/// mu |grad u|^2, lambda |div u|^2 and 2 D |grad eta|^2.
struct DiagnosticsRecord {
  double t = 0.0;
  double E_total = 0.0;
  double E_kinetic = 0.0;
  double E_pressure = 0.0;
  double E_eta = 0.0;
  double E_entropy = 0.0;
  double D_fisher_tau = 0.0;
  double D_fisher_x = 0.0;
  double D_grad_u = 0.0;
  double D_div_u = 0.0;
  double D_grad_eta = 0.0;
  double mass = 0.0;
  double rod_mass = 0.0;

  double dissipation() const noexcept { return D_fisher_tau + D_fisher_x + D_grad_u + D_div_u + D_grad_eta; }
  bool operator==(const DiagnosticsRecord&) const = default;
};

/// Energy  int rho|u|^2/2 + rho^gamma/(gamma-1) + eta^2 + psi  and its dissipation.
DiagnosticsRecord energy_total(const FluidState& state);

/// One Lie-split step in the fixed order rho -> eta -> f -> u.
/// Throws StepError naming the failing substep.
FluidState step(const FluidState& state, double dt);

/// Called after every step with the states on both sides of it.
using StepObserver = std::function<void(const FluidState& before, const FluidState& after, double dt)>;

struct RunResult {
  std::vector<DiagnosticsRecord> records;
  FluidState final_state;
  long steps = 0;
};

/// Advances to `t_final` with dt = cfl_dt(state, safety), clipped to land on
/// t_final. Records the initial state, every `record_every` steps, and the
/// final state.
RunResult run(const FluidState& initial, double t_final, int record_every, double safety = 0.3,
              const StepObserver& observer = {});

/// A renormalizing function b with its derivative.
struct Renormalization {
  std::function<double(double)> b;
  std::function<double(double)> db;

  static Renormalization identity();
  static Renormalization constant(double c);
  /// b(z) = z / (1 + z).
  static Renormalization saturating();
};

/// L1 norm of the discrete residual of
///   d_t b(rho) + div(b(rho) u) + (b'(rho) rho - b(rho)) div u = 0
/// between two consecutive states, using the continuity step's own upwind
/// flux and face divergence at the earlier state.
double renormalized_residual(const FluidState& before, const FluidState& after, const Renormalization& b);

}  // namespace doifbp
