#pragma once

#include "doifbp/grid.hpp"
#include "doifbp/transport.hpp"

namespace doifbp {

/// Barotropic law pi = rho^gamma, gamma > 3/2.
class PressureLaw {
 public:
  explicit PressureLaw(double gamma);
  double gamma() const noexcept { return gamma_; }
  /// rho^gamma as exp(gamma ln rho), 0 at rho = 0.
  double pressure(double rho) const;
  bool operator==(const PressureLaw&) const = default;

 private:
  double gamma_;
};

/// Shear viscosity mu, bulk-type viscosity lambda, translational and
/// rotational diffusivities. All default to 1.
struct PhysCoeffs {
  double mu = 1.0;
  double lambda = 1.0;
  double D = 1.0;
  double D_tau = 1.0;

  void validate() const;
  bool operator==(const PhysCoeffs&) const = default;
};

/// Density below which a cell is treated as vacuum (u forced to 0).
inline constexpr double kDensityFloor = 1e-10;

ScalarField fluid_pressure(const ScalarField& rho, const PressureLaw& law);

/// P = pi + eta + eta^2.
ScalarField total_pressure(const ScalarField& pi, const ScalarField& eta);

/// One explicit step of  s_t + div(s u) = diffusivity lap s  with the
/// conservative upwind flux. Rejects negative input and steps that break
/// the advective (dt max|u|/h <= 1) or diffusive (dt <= h^2/(2 d D)) limits.
ScalarField transport_step(const ScalarField& s, const VectorField& u, double dt, double diffusivity);

/// Largest dt accepted by transport_step's advective check: 1 / sum_a(max|u_a| / h_a).
double advective_limit(const VectorField& u);

struct FluidState;

struct MomentumOptions {
  double tolerance = 1e-10;
  int max_iterations = 20000;
};

/// Momentum update on the fields produced by the transport substeps.
///
/// `state` carries rho^{n+1}, eta^{n+1}, f^{n+1} and the old velocity
/// u^n; `rho_old` is the density the velocity belongs to. The explicit part
/// advects m = rho_old u with the same upwind mass flux as the continuity
/// step, subtracts grad P and adds div sigma; the viscous part is the
/// backward-Euler solve
///   (rho I - dt (mu lap + lambda grad div)) u_new = m*
/// by conjugate gradients. `body_force` (per unit volume) is optional.
VectorField momentum_step(const FluidState& state, const ScalarField& rho_old, double dt,
                          const MomentumOptions& options = {}, const VectorField* body_force = nullptr);

/// Stable explicit step:
///   safety * min( advective 1/sum(max|u_a|/h_a),
///                 acoustic h / sqrt(gamma max rho^(gamma-1)),
///                 diffusive h^2 / (2 d max(D, 1)),
///                 drift 1 / (L(L+1) max|grad u|),
///                 rotational 1 / (D_tau L(L+1)) ).
double cfl_dt(const FluidState& state, double safety);

}  // namespace doifbp
