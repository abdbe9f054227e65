#include "doifbp/integrator.hpp"

#include <cmath>
#include <stdexcept>

#include "doifbp/errors.hpp"

namespace doifbp {

DiagnosticsRecord energy_total(const FluidState& s) {
  const Grid& g = s.grid();
  const double vol = g.cell_volume();
  const double gamma = s.law.gamma();
  DiagnosticsRecord r;
  r.t = s.t;
  double kin = 0.0, pres = 0.0, eta2 = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double u2 = 0.0;
    for (int c = 0; c < g.dim(); ++c) u2 += s.u.component(c)[i] * s.u.component(c)[i];
    kin += 0.5 * s.rho[i] * u2;
    pres += s.law.pressure(s.rho[i]) / (gamma - 1.0);
    eta2 += s.eta[i] * s.eta[i];
  }
  r.E_kinetic = kin * vol;
  r.E_pressure = pres * vol;
  r.E_eta = eta2 * vol;
  const EntropyFisher ef = entropy_and_fisher(s.f);
  r.E_entropy = integral(ef.psi);
  r.E_total = r.E_kinetic + r.E_pressure + r.E_eta + r.E_entropy;

  r.D_fisher_tau = 4.0 * s.coeffs.D_tau * ef.fisher_tau;
  r.D_fisher_x = 4.0 * s.coeffs.D * ef.fisher_x;
  double gu = 0.0;
  for (const auto& m : velocity_gradient(s.u)) gu += m.squaredNorm();
  r.D_grad_u = s.coeffs.mu * gu * vol;
  const ScalarField dv = div(s.u);
  r.D_div_u = s.coeffs.lambda * inner(dv, dv);
  const VectorField ge = grad(s.eta, Ghost::odd);
  r.D_grad_eta = 2.0 * s.coeffs.D * inner(ge, ge);

  r.mass = integral(s.rho);
  r.rod_mass = integral(eta_moment(s.f));
  return r;
}

namespace {

template <class F>
auto substep(const char* name, double t, F&& fn) {
  try {
    return fn();
  } catch (const StepError&) {
    throw;
  } catch (const std::exception& e) {
    throw StepError(name, t, e.what());
  }
}

}  // namespace

FluidState step(const FluidState& s, double dt) {
  substep("cfl", s.t, [&] {
    const double limit = cfl_dt(s, 1.0);
    if (!(dt > 0.0) || dt > limit * (1.0 + 1e-12))
      throw NumericalError("dt=" + std::to_string(dt) + " exceeds the stability bound " + std::to_string(limit));
    return 0;
  });

  FluidState next = s;
  next.rho = substep("density transport", s.t, [&] { return transport_step(s.rho, s.u, dt, 0.0); });
  next.eta = substep("eta transport", s.t, [&] { return transport_step(s.eta, s.u, dt, s.coeffs.D); });
  substep("fokker-planck", s.t, [&] {
    const OrientationField rate = fp_rhs(s.f, s.u, s.coeffs.D, s.coeffs.D_tau);
    next.f.coeffs = s.f.coeffs + dt * rate.coeffs;
    require_positive(next.f);
    return 0;
  });
  next.u = substep("momentum", s.t, [&] { return momentum_step(next, s.rho, dt); });
  next.t = s.t + dt;
  return next;
}

RunResult run(const FluidState& initial, double t_final, int record_every, double safety, const StepObserver& observer) {
  if (!(t_final >= initial.t)) throw std::invalid_argument("run: t_final precedes the initial time");
  if (record_every < 1) throw std::invalid_argument("run: record_every must be positive");
  RunResult result{{}, initial, 0};
  FluidState& state = result.final_state;
  result.records.push_back(energy_total(state));
  bool recorded_last = true;
  while (state.t < t_final) {
    const double remaining = t_final - state.t;
    const double dt_cfl = substep("cfl", state.t, [&] { return cfl_dt(state, safety); });
    const bool last = dt_cfl >= remaining;
    const double dt = last ? remaining : dt_cfl;
    FluidState next = step(state, dt);
    if (last) next.t = t_final;
    if (observer) observer(state, next, dt);
    state = std::move(next);
    ++result.steps;
    recorded_last = false;
    if (result.steps % record_every == 0 || last) {
      result.records.push_back(energy_total(state));
      recorded_last = true;
    }
  }
  if (!recorded_last) result.records.push_back(energy_total(state));
  return result;
}

Renormalization Renormalization::identity() {
  return {[](double z) { return z; }, [](double) { return 1.0; }};
}

Renormalization Renormalization::constant(double c) {
  return {[c](double) { return c; }, [](double) { return 0.0; }};
}

Renormalization Renormalization::saturating() {
  return {[](double z) { return z / (1.0 + z); }, [](double z) { return 1.0 / ((1.0 + z) * (1.0 + z)); }};
}

double renormalized_residual(const FluidState& before, const FluidState& after, const Renormalization& b) {
  const Grid& g = before.grid();
  require_same_grid(g, after.grid(), "renormalized_residual");
  const double dt = after.t - before.t;
  if (!(dt > 0.0)) throw std::invalid_argument("renormalized_residual: states must be strictly ordered in time");
  const std::size_t n = g.size();
  std::vector<double> b0(n), rate(n);
  for (std::size_t i = 0; i < n; ++i) b0[i] = b.b(before.rho[i]);
  advection_diffusion_rate(g, b0.data(), 1, before.u, 0.0, rate.data());  // -div(b u)
  const ScalarField dv = div(before.u);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r0 = before.rho[i];
    const double res = (b.b(after.rho[i]) - b0[i]) / dt - rate[i] + (b.db(r0) * r0 - b0[i]) * dv[i];
    acc += std::abs(res);
  }
  return acc * g.cell_volume();
}

}  // namespace doifbp
