#include "doifbp/limit_lab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

#include "doifbp/errors.hpp"

namespace doifbp {

std::vector<double> excess_density_norms(const FluidState& state, const std::vector<double>& p_list) {
  ScalarField excess(state.grid());
  for (std::size_t i = 0; i < excess.size(); ++i) excess[i] = std::max(state.rho[i] - 1.0, 0.0);
  std::vector<double> out;
  out.reserve(p_list.size());
  for (double p : p_list) out.push_back(lp_norm(excess, p));
  return out;
}

double complementarity_residual(const FluidState& state) {
  double acc = 0.0;
  for (double r : state.rho.values) acc += std::abs(state.law.pressure(r) * (r - 1.0));
  return acc * state.grid().cell_volume();
}

IncompressibilityDefect incompressibility_defect(const FluidState& state, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("congestion threshold eps must lie in (0, 1)");
  const ScalarField dv = div(state.u);
  const double vol = state.grid().cell_volume();
  IncompressibilityDefect out;
  double acc = 0.0;
  for (std::size_t i = 0; i < dv.size(); ++i) {
    if (state.rho[i] >= 1.0 - eps) {
      acc += dv[i] * dv[i];
      out.congested_volume += vol;
    }
  }
  out.defect = std::sqrt(acc * vol);
  return out;
}

std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) return std::nullopt;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(y[i] > 0.0) || !(x[i] > 0.0)) return std::nullopt;
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) return std::nullopt;
  return (n * sxy - sx * sy) / denom;
}

namespace {

SweepRow run_one(const StateFactory& factory, double gamma, const SweepOptions& options) {
  const FluidState initial = factory(gamma);
  SweepRow row;
  row.gamma = gamma;
  auto rho_gamma = [](const FluidState& s) {
    double acc = 0.0;
    for (double r : s.rho.values) acc += s.law.pressure(r);
    return acc * s.grid().cell_volume();
  };
  double integral_acc = 0.0;
  const StepObserver observer = [&](const FluidState& before, const FluidState& after, double dt) {
    integral_acc += 0.5 * dt * (rho_gamma(before) + rho_gamma(after));
  };
  RunResult res = run(initial, options.t_final, options.record_every, options.cfl_safety, observer);
  const FluidState& fin = res.final_state;
  row.excess = excess_density_norms(fin);
  row.rho_gamma_time_integral = integral_acc;
  row.complementarity = complementarity_residual(fin);
  const IncompressibilityDefect def = incompressibility_defect(fin, options.eps);
  row.incompressibility_defect = def.defect;
  row.congested_volume = def.congested_volume;
  row.steps = res.steps;
  row.records = std::move(res.records);
  return row;
}

}  // namespace

SweepResult gamma_sweep(const StateFactory& factory, const std::vector<double>& gammas, const SweepOptions& options) {
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    if (!(gammas[i] > 1.5)) throw std::invalid_argument("every gamma must exceed 3/2");
    if (i > 0 && !(gammas[i] > gammas[i - 1])) throw std::invalid_argument("gamma list must be strictly increasing");
  }
  SweepResult result;
  result.eps = options.eps;
  result.rows.resize(gammas.size());
  std::vector<std::exception_ptr> errors(gammas.size());

  unsigned workers = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(gammas.size(), 1)));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < gammas.size(); i = next++) {
      try {
        result.rows[i] = run_one(factory, gammas[i], options);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  for (std::size_t i = 0; i < gammas.size(); ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      throw NumericalError("run with gamma=" + std::to_string(gammas[i]) + " failed: " + e.what());
    }
  }

  if (gammas.size() >= 2) {
    const std::size_t first = gammas.size() >= 3 ? gammas.size() - 3 : 0;
    std::vector<double> x, y;
    for (std::size_t i = first; i < gammas.size(); ++i) {
      x.push_back(result.rows[i].gamma);
      y.push_back(result.rows[i].excess[1]);
    }
    result.slope_l2 = loglog_slope(x, y);
  }
  return result;
}

}  // namespace doifbp
