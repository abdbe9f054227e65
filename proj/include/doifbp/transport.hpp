#pragma once

#include "doifbp/grid.hpp"

namespace doifbp {

/// Normal velocity on the face between cell (i, j) and its +axis neighbor:
/// the average of the two cell values, or zero on a Dirichlet wall.
double face_velocity(const VectorField& u, int axis, int i, int j);

/// Conservative first-order upwind advection plus centered diffusion,
/// returned as a rate:  out = -div(s u) + diffusivity * lap(s).
///
/// `data` holds `ncomp` values per cell, cell-major (component c of cell n at
/// data[n * ncomp + c]); every component is transported independently with
/// the same velocity. Wall faces carry no advective flux; the diffusive wall
/// flux uses the odd ghost (s = 0 on the wall).
void advection_diffusion_rate(const Grid& g, const double* data, int ncomp, const VectorField& u, double diffusivity,
                              double* out);

}  // namespace doifbp
