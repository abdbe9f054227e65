#include "doifbp/hydro.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "doifbp/errors.hpp"
#include "doifbp/state.hpp"

namespace doifbp {

PressureLaw::PressureLaw(double gamma) : gamma_(gamma) {
  if (!(gamma > 1.5) || !std::isfinite(gamma)) throw std::invalid_argument("gamma must exceed 3/2");
}

double PressureLaw::pressure(double rho) const { return rho > 0.0 ? std::exp(gamma_ * std::log(rho)) : 0.0; }

void PhysCoeffs::validate() const {
  auto check = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(name) + " must be strictly positive");
  };
  check(mu, "mu");
  check(lambda, "lambda");
  check(D, "D");
  check(D_tau, "D_tau");
}

ScalarField fluid_pressure(const ScalarField& rho, const PressureLaw& law) {
  ScalarField out(rho.grid);
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (rho[i] < 0.0) throw NumericalError("fluid_pressure: negative density " + std::to_string(rho[i]));
    out[i] = law.pressure(rho[i]);
  }
  return out;
}

ScalarField total_pressure(const ScalarField& pi, const ScalarField& eta) {
  require_same_grid(pi.grid, eta.grid, "total_pressure");
  ScalarField out(pi.grid);
  for (std::size_t i = 0; i < pi.size(); ++i) out[i] = pi[i] + eta[i] + eta[i] * eta[i];
  return out;
}

double advective_limit(const VectorField& u) {
  double rate = 0.0;
  for (int a = 0; a < u.dim(); ++a) {
    double m = 0.0;
    for (double v : u.component(a)) m = std::max(m, std::abs(v));
    rate += m / u.grid.h(a);
  }
  return rate > 0.0 ? 1.0 / rate : std::numeric_limits<double>::infinity();
}

namespace {

double min_spacing(const Grid& g) { return g.dim() == 1 ? g.h(0) : std::min(g.h(0), g.h(1)); }

}  // namespace

ScalarField transport_step(const ScalarField& s, const VectorField& u, double dt, double diffusivity) {
  require_same_grid(s.grid, u.grid, "transport_step");
  if (!(dt >= 0.0)) throw std::invalid_argument("transport_step: dt must be nonnegative");
  for (double v : s.values)
    if (v < 0.0) throw NumericalError("transport_step: negative input value " + std::to_string(v));
  constexpr double slack = 1.0 + 1e-12;
  if (dt > advective_limit(u) * slack)
    throw NumericalError("transport_step: advective CFL violated (dt=" + std::to_string(dt) + ")");
  const double h = min_spacing(s.grid);
  if (diffusivity > 0.0 && dt * 2.0 * s.grid.dim() * diffusivity > h * h * slack)
    throw NumericalError("transport_step: diffusive CFL violated (dt=" + std::to_string(dt) + ")");
  ScalarField out(s.grid);
  advection_diffusion_rate(s.grid, s.values.data(), 1, u, diffusivity, out.values.data());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = s[i] + dt * out[i];
  return out;
}

namespace {

// Viscous operator  A u = rho u - dt (mu lap u + lambda grad div u), component-major.
class ViscousOperator {
 public:
  ViscousOperator(const Grid& g, std::vector<double> mass, double dt, double mu, double lambda)
      : grid_(g), mass_(std::move(mass)), dt_(dt), mu_(mu), lambda_(lambda), tmp_(g.size()), dv_(g.size()) {}

  void apply(const std::vector<double>& u, std::vector<double>& out) {
    const std::size_t n = grid_.size();
    const int d = grid_.dim();
    // div u (odd ghosts: velocity vanishes on walls)
    std::fill(dv_.begin(), dv_.end(), 0.0);
    for (int a = 0; a < d; ++a) {
      centered_derivative(grid_, std::span<const double>(u.data() + a * n, n), a, Ghost::odd, tmp_);
      for (std::size_t i = 0; i < n; ++i) dv_[i] += tmp_[i];
    }
    for (int c = 0; c < d; ++c) {
      std::span<const double> uc(u.data() + c * n, n);
      std::span<double> oc(out.data() + c * n, n);
      laplacian(grid_, uc, Ghost::odd, oc);
      centered_derivative(grid_, dv_, c, Ghost::even, tmp_);
      for (std::size_t i = 0; i < n; ++i) oc[i] = mass_[i] * uc[i] - dt_ * (mu_ * oc[i] + lambda_ * tmp_[i]);
    }
  }

 private:
  const Grid& grid_;
  std::vector<double> mass_;
  double dt_, mu_, lambda_;
  std::vector<double> tmp_, dv_;
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

VectorField momentum_step(const FluidState& state, const ScalarField& rho_old, double dt, const MomentumOptions& options,
                          const VectorField* body_force) {
  const Grid& g = state.grid();
  require_same_grid(g, rho_old.grid, "momentum_step");
  if (body_force) require_same_grid(g, body_force->grid, "momentum_step body force");
  const std::size_t n = g.size();
  const int d = g.dim();
  const VectorField& u = state.u;

  // Explicit part: m* = m - dt div(m u) - dt grad P + dt div sigma (+ dt F).
  std::vector<double> m(d * n);
  for (int c = 0; c < d; ++c)
    for (std::size_t i = 0; i < n; ++i) m[c * n + i] = rho_old[i] * u.component(c)[i];

  const bool periodic = g.bc() == Boundary::periodic;
  for (int a = 0; a < d; ++a) {
    const double inv_h = 1.0 / g.h(a);
    for (int j = 0; j < g.cells(1); ++j) {
      for (int i = 0; i < g.cells(0); ++i) {
        const int along = a == 0 ? i : j;
        const bool last = along == g.cells(a) - 1;
        if (last && !periodic) continue;
        int ni = i, nj = j;
        if (a == 0) ni = last ? 0 : i + 1; else nj = last ? 0 : j + 1;
        const std::size_t self = g.index(i, j);
        const std::size_t other = g.index(ni, nj);
        const double uf = face_velocity(u, a, i, j);
        const std::size_t up = uf > 0.0 ? self : other;
        const double mass_flux = uf * rho_old[up];
        for (int c = 0; c < d; ++c) {
          const double flux = dt * mass_flux * u.component(c)[up] * inv_h;
          m[c * n + self] -= flux;
          m[c * n + other] += flux;
        }
      }
    }
  }

  const ScalarField p = total_pressure(fluid_pressure(state.rho, state.law), state.eta);
  const TensorField sigma = stress_moment(state.f);
  std::vector<double> dp(n), comp(n), dsig(n);
  for (int c = 0; c < d; ++c) {
    centered_derivative(g, p.values, c, Ghost::even, dp);
    for (std::size_t i = 0; i < n; ++i) m[c * n + i] -= dt * dp[i];
    for (int jx = 0; jx < d; ++jx) {
      for (std::size_t i = 0; i < n; ++i) comp[i] = sigma[i](c, jx);
      centered_derivative(g, comp, jx, Ghost::even, dsig);
      for (std::size_t i = 0; i < n; ++i) m[c * n + i] += dt * dsig[i];
    }
    if (body_force)
      for (std::size_t i = 0; i < n; ++i) m[c * n + i] += dt * body_force->component(c)[i];
  }

  // Implicit viscous solve.
  std::vector<double> mass(n);
  for (std::size_t i = 0; i < n; ++i) mass[i] = std::max(state.rho[i], kDensityFloor);
  ViscousOperator op(g, mass, dt, state.coeffs.mu, state.coeffs.lambda);

  std::vector<double> x(d * n);
  for (int c = 0; c < d; ++c)
    for (std::size_t i = 0; i < n; ++i) x[c * n + i] = m[c * n + i] / mass[i];

  const double bnorm = std::sqrt(dot(m, m));
  VectorField out(g);
  if (bnorm > 0.0) {
    std::vector<double> ax(d * n), r(d * n), pdir(d * n), ap(d * n);
    op.apply(x, ax);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = m[i] - ax[i];
    pdir = r;
    double rr = dot(r, r);
    int it = 0;
    while (std::sqrt(rr) > options.tolerance * bnorm) {
      if (++it > options.max_iterations)
        throw NumericalError("viscous solve did not converge: relative residual " + std::to_string(std::sqrt(rr) / bnorm));
      op.apply(pdir, ap);
      const double alpha = rr / dot(pdir, ap);
      for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] += alpha * pdir[i];
        r[i] -= alpha * ap[i];
      }
      const double rr_new = dot(r, r);
      const double beta = rr_new / rr;
      rr = rr_new;
      for (std::size_t i = 0; i < x.size(); ++i) pdir[i] = r[i] + beta * pdir[i];
    }
    if (periodic) {
      // Uniform shifts lie in the kernel of both viscous terms; use one to put
      // the total momentum exactly on sum(m*).
      double total_mass = 0.0;
      for (double v : mass) total_mass += v;
      for (int c = 0; c < d; ++c) {
        double target = 0.0, have = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          target += m[c * n + i];
          have += mass[i] * x[c * n + i];
        }
        const double shift = (target - have) / total_mass;
        for (std::size_t i = 0; i < n; ++i) x[c * n + i] += shift;
      }
    }
    std::copy(x.begin(), x.end(), out.values.begin());
  }
  for (int c = 0; c < d; ++c)
    for (std::size_t i = 0; i < n; ++i)
      if (state.rho[i] < kDensityFloor) out.component(c)[i] = 0.0;
  return out;
}

double cfl_dt(const FluidState& state, double safety) {
  if (!(safety > 0.0 && safety <= 1.0)) throw std::invalid_argument("cfl safety must lie in (0, 1]");
  const Grid& g = state.grid();
  const double h = min_spacing(g);
  const double gamma = state.law.gamma();
  const double inf = std::numeric_limits<double>::infinity();

  double bound = advective_limit(state.u);

  double max_rho = 0.0;
  for (double v : state.rho.values) max_rho = std::max(max_rho, v);
  const double c2 = max_rho > 0.0 ? gamma * std::exp((gamma - 1.0) * std::log(max_rho)) : 0.0;
  bound = std::min(bound, c2 > 0.0 ? h / std::sqrt(c2) : inf);

  bound = std::min(bound, h * h / (2.0 * g.dim() * std::max(state.coeffs.D, 1.0)));

  const double ll = static_cast<double>(state.basis().degree()) * (state.basis().degree() + 1);
  double max_grad = 0.0;
  for (const auto& m : velocity_gradient(state.u)) max_grad = std::max(max_grad, m.norm());
  if (max_grad > 0.0) bound = std::min(bound, 1.0 / (ll * max_grad));
  bound = std::min(bound, 1.0 / (state.coeffs.D_tau * ll));

  return safety * bound;
}

}  // namespace doifbp
