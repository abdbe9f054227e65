#include "doifbp/transport.hpp"

#include <algorithm>

namespace doifbp {

double face_velocity(const VectorField& u, int axis, int i, int j) {
  const Grid& g = u.grid;
  int ni = i + (axis == 0 ? 1 : 0);
  int nj = j + (axis == 1 ? 1 : 0);
  const int n = g.cells(axis);
  const int along = axis == 0 ? ni : nj;
  if (along >= n) {
    if (g.bc() == Boundary::dirichlet) return 0.0;
    if (axis == 0) ni = 0; else nj = 0;
  }
  const auto comp = u.component(axis);
  return 0.5 * (comp[g.index(i, j)] + comp[g.index(ni, nj)]);
}

void advection_diffusion_rate(const Grid& g, const double* data, int ncomp, const VectorField& u, double diffusivity,
                              double* out) {
  const std::size_t total = g.size() * static_cast<std::size_t>(ncomp);
  std::fill(out, out + total, 0.0);
  const bool periodic = g.bc() == Boundary::periodic;
  for (int a = 0; a < g.dim(); ++a) {
    const double inv_h = 1.0 / g.h(a);
    const double kappa = diffusivity / (g.h(a) * g.h(a));
    const int n_axis = g.cells(a);
    for (int j = 0; j < g.cells(1); ++j) {
      for (int i = 0; i < g.cells(0); ++i) {
        const int along = a == 0 ? i : j;
        const std::size_t self = g.index(i, j);
        const double* s = data + self * ncomp;
        double* r = out + self * ncomp;
        // Low wall face of a Dirichlet grid: only the diffusive ghost flux.
        if (!periodic && along == 0 && kappa != 0.0) {
          for (int c = 0; c < ncomp; ++c) r[c] -= 2.0 * kappa * s[c];
        }
        const bool last = along == n_axis - 1;
        if (last && !periodic) {
          if (kappa != 0.0)
            for (int c = 0; c < ncomp; ++c) r[c] -= 2.0 * kappa * s[c];
          continue;
        }
        int ni = i, nj = j;
        if (a == 0) ni = last ? 0 : i + 1; else nj = last ? 0 : j + 1;
        const std::size_t other = g.index(ni, nj);
        const double* sn = data + other * ncomp;
        double* rn = out + other * ncomp;
        const double uf = face_velocity(u, a, i, j);
        const double* upwind = uf > 0.0 ? s : sn;
        for (int c = 0; c < ncomp; ++c) {
          const double flux = uf * upwind[c] * inv_h - kappa * (sn[c] - s[c]);
          r[c] -= flux;
          rn[c] += flux;
        }
      }
    }
  }
}

}  // namespace doifbp
