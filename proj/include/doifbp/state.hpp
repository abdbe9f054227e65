#pragma once

#include "doifbp/grid.hpp"
#include "doifbp/hydro.hpp"
#include "doifbp/kinetics.hpp"

namespace doifbp {

/// The unknowns (rho, u, eta, f) at one time level plus the model parameters.
struct FluidState {
  ScalarField rho;
  VectorField u;
  ScalarField eta;
  OrientationField f;
  double t = 0.0;
  PressureLaw law;
  PhysCoeffs coeffs;

  const Grid& grid() const noexcept { return rho.grid; }
  const SphereBasis& basis() const noexcept { return *f.basis; }

  /// Shared grid, nonnegative rho and eta, f positive within tolerance.
  /// Throws NumericalError naming the broken invariant.
  void validate() const;
};

}  // namespace doifbp
