#include "doifbp/presets.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "doifbp/errors.hpp"

namespace doifbp {

OrientationField aligned_orientation(const ScalarField& eta, std::shared_ptr<const SphereBasis> basis, double anisotropy) {
  OrientationField f(eta.grid, basis);
  const SphereBasis& b = *basis;
  // Shape in coefficient space: projection of (1 + b P2(tau_3)) / (4 pi).
  Eigen::VectorXd nodal(b.num_nodes());
  for (int k = 0; k < b.num_nodes(); ++k) {
    const double z = b.node(k).z();
    nodal[k] = (1.0 + anisotropy * (3.0 * z * z - 1.0)) / (4.0 * std::numbers::pi);
  }
  const Eigen::VectorXd shape = b.analysis() * nodal;
  for (std::size_t i = 0; i < eta.size(); ++i) f.coeffs.col(static_cast<Eigen::Index>(i)) = eta[i] * shape;
  return f;
}

FluidState make_initial_state(const RunConfig& cfg, double gamma) {
  validate_config(cfg);
  const Grid g = cfg.grid();
  const auto basis = make_sphere_basis(cfg.sphere_degree);
  const double two_pi = 2.0 * std::numbers::pi;
  const double lx = g.length(0);
  const double ly = g.length(1);
  const bool walls = g.bc() == Boundary::dirichlet;

  ScalarField rho(g, cfg.rho0);
  VectorField u(g);
  ScalarField eta(g, cfg.eta0);
  auto ux = u.component(0);

  for (int j = 0; j < g.cells(1); ++j) {
    for (int i = 0; i < g.cells(0); ++i) {
      const std::size_t c = g.index(i, j);
      const double x = g.center(0, i);
      const double y = g.dim() == 2 ? g.center(1, j) : 0.0;
      const double sx = std::sin(two_pi * x / lx);
      const double cx = std::cos(two_pi * x / lx);
      if (cfg.preset == "colliding_streams") {
        ux[c] = -cfg.amplitude * sx;
      } else if (cfg.preset == "smooth") {
        const double cy = g.dim() == 2 ? std::cos(two_pi * y / ly) : 1.0;
        rho[c] = cfg.rho0 * (1.0 + 0.2 * cx * cy);
        ux[c] = cfg.amplitude * sx * cy;
        if (g.dim() == 2) u.component(1)[c] = 0.5 * cfg.amplitude * std::sin(two_pi * y / ly) * cx;
        if (walls) {
          const double s = std::sin(std::numbers::pi * x / lx);
          eta[c] = 2.0 * cfg.eta0 * s * s;
        } else {
          eta[c] = cfg.eta0 * (1.0 + 0.5 * cx * cy);
        }
      } else if (cfg.preset == "pulse") {
        double r2 = (x - 0.5 * lx) * (x - 0.5 * lx) / (lx * lx);
        if (g.dim() == 2) r2 += (y - 0.5 * ly) * (y - 0.5 * ly) / (ly * ly);
        eta[c] = cfg.eta0 * (1.0 + 4.0 * std::exp(-r2 / (2.0 * 0.08 * 0.08)));
      }
    }
  }

  if (cfg.noise > 0.0) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (double& r : rho.values) r *= 1.0 + cfg.noise * unit(rng);
  }
  const double mean = integral(rho) / g.volume();
  if (!(mean < 1.0)) throw ConfigError("init: mean density " + std::to_string(mean) + " must be below 1");

  OrientationField f = aligned_orientation(eta, basis, cfg.anisotropy);
  FluidState s{std::move(rho), std::move(u), std::move(eta), std::move(f), 0.0, PressureLaw(gamma), cfg.coeffs};
  s.validate();
  return s;
}

}  // namespace doifbp
