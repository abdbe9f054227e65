#include "doifbp/state.hpp"

#include <cmath>
#include <string>

#include "doifbp/errors.hpp"

namespace doifbp {

void FluidState::validate() const {
  require_same_grid(rho.grid, u.grid, "state velocity");
  require_same_grid(rho.grid, eta.grid, "state eta");
  require_same_grid(rho.grid, f.grid, "state orientation field");
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (!(rho[i] >= 0.0)) throw NumericalError("density negative or NaN at cell " + std::to_string(i));
    if (!(eta[i] >= 0.0)) throw NumericalError("eta negative or NaN at cell " + std::to_string(i));
  }
  for (double v : u.values)
    if (!std::isfinite(v)) throw NumericalError("velocity is not finite");
  require_positive(f);
}

}  // namespace doifbp
