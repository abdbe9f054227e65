#pragma once

#include "doifbp/config.hpp"
#include "doifbp/state.hpp"

namespace doifbp {

/// f = eta / (4 pi) * (1 + b (3 tau_3^2 - 1)) in every cell.
OrientationField aligned_orientation(const ScalarField& eta, std::shared_ptr<const SphereBasis> basis, double anisotropy);

/// Initial state for `config.preset` with pressure exponent `gamma`.
///
///   uniform            rho0, u = 0, eta0
///   colliding_streams  rho0, u_x = -A sin(2 pi x / L_x), eta0
///   smooth             smooth perturbations of every field (refinement studies)
///   pulse              rho0, u = 0, eta0 plus a Gaussian bump in eta
///
/// f always carries the cell's eta, so the moment identity holds at t = 0.
/// `init.noise` multiplies rho by (1 + noise * U(-1, 1)) from a seeded
/// generator. Throws ConfigError if the resulting mean density is not below 1.
FluidState make_initial_state(const RunConfig& config, double gamma);

}  // namespace doifbp
