#include <doctest.h>

#include <cmath>
#include <numbers>

#include "doifbp/errors.hpp"
#include "doifbp/hydro.hpp"
#include "doifbp/presets.hpp"
#include "doifbp/state.hpp"

using namespace doifbp;
using std::numbers::pi;

namespace {

FluidState bare_state(const Grid& g, double gamma, double rho, int L = 2) {
  return FluidState{ScalarField(g, rho), VectorField(g), ScalarField(g), OrientationField(g, make_sphere_basis(L)), 0.0,
                    PressureLaw(gamma), PhysCoeffs{}};
}

double total_momentum(const ScalarField& rho, const VectorField& u, int c) {
  double acc = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) acc += rho[i] * u.component(c)[i];
  return acc * rho.grid.cell_volume();
}

}  // namespace

TEST_CASE("pressure law") {
  CHECK_THROWS_AS(PressureLaw(1.5), std::invalid_argument);
  CHECK_THROWS_AS(PressureLaw(1.0), std::invalid_argument);
  const PressureLaw p40(40.0);
  CHECK(p40.pressure(1.0) == 1.0);
  CHECK(p40.pressure(0.0) == 0.0);
  CHECK(p40.pressure(1.1) == doctest::Approx(45.259255568175952).epsilon(1e-13));
  CHECK(PressureLaw(20).pressure(0.5) == doctest::Approx(std::ldexp(1.0, -20)).epsilon(1e-13));
  double prev = 0.0;
  for (double r = 0.0; r < 2.0; r += 0.05) {
    CHECK(p40.pressure(r) >= prev);
    prev = p40.pressure(r);
  }
  for (double g : {2.0, 5.0, 20.0}) {
    CHECK(PressureLaw(2 * g).pressure(1.2) > PressureLaw(g).pressure(1.2));
    CHECK(PressureLaw(2 * g).pressure(0.8) < PressureLaw(g).pressure(0.8));
  }
}

TEST_CASE("fluid and total pressure") {
  const Grid g = Grid::uniform(1, 4, 1.0, Boundary::periodic);
  ScalarField rho(g, 1.0);
  for (double v : fluid_pressure(rho, PressureLaw(7)).values) CHECK(v == 1.0);
  rho[2] = -0.1;
  CHECK_THROWS_AS(fluid_pressure(rho, PressureLaw(7)), NumericalError);
  for (double v : total_pressure(ScalarField(g, 0.0), ScalarField(g, 0.0)).values) CHECK(v == 0.0);
  for (double v : total_pressure(ScalarField(g, 1.0), ScalarField(g, 1.0)).values) CHECK(v == 3.0);
  for (double v : total_pressure(ScalarField(g, 0.0), ScalarField(g, 2.0)).values) CHECK(v == 6.0);
  CHECK_THROWS_AS(total_pressure(ScalarField(g), ScalarField(Grid::uniform(1, 5, 1.0, Boundary::periodic))),
                  std::invalid_argument);
}

TEST_CASE("physical coefficients are strictly positive") {
  CHECK_NOTHROW(PhysCoeffs{}.validate());
  CHECK_THROWS_AS((PhysCoeffs{0.0, 1.0, 1.0, 1.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((PhysCoeffs{1.0, 1.0, 1.0, -1.0}.validate()), std::invalid_argument);
}

TEST_CASE("transport step basics") {
  const Grid g(2, {8, 8}, {0.125, 0.125}, Boundary::periodic);
  ScalarField s(g);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = 1.0 + 0.1 * static_cast<double>(i % 5);
  CHECK(transport_step(s, VectorField(g), 0.01, 0.0).values == s.values);

  VectorField u(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    u.component(0)[i] = 0.7;
    u.component(1)[i] = -0.4;
  }
  const ScalarField c(g, 0.9);
  for (double v : transport_step(c, u, 0.05, 0.0).values) CHECK(v == doctest::Approx(0.9).epsilon(1e-12));

  CHECK_THROWS_AS(transport_step(c, u, 1.0, 0.0), NumericalError);
  CHECK_THROWS_AS(transport_step(c, VectorField(g), 0.01, 1.0), NumericalError);
  ScalarField neg = c;
  neg[3] = -1e-3;
  CHECK_THROWS_AS(transport_step(neg, u, 0.01, 0.0), NumericalError);
}

TEST_CASE("square pulse advected once around the period") {
  const int n = 100;
  const Grid g = Grid::uniform(1, n, 1.0, Boundary::periodic);
  ScalarField s(g, 0.1);
  for (int i = 30; i < 50; ++i) s[i] = 1.0;
  VectorField u(g, 1.0);
  const double m0 = integral(s);
  const double dt = 0.5 * g.h(0);
  ScalarField cur = s;
  for (int k = 0; k < 2 * n; ++k) cur = transport_step(cur, u, dt, 0.0);
  CHECK(std::abs(integral(cur) - m0) <= 1e-13 * m0);
  CHECK(*std::max_element(cur.values.begin(), cur.values.end()) <= 1.0);
  CHECK(*std::min_element(cur.values.begin(), cur.values.end()) >= 0.1);
}

TEST_CASE("walls carry no mass flux") {
  const Grid g = Grid::uniform(1, 32, 1.0, Boundary::dirichlet);
  ScalarField s(g);
  VectorField u(g);
  for (int i = 0; i < 32; ++i) {
    s[i] = 1.0 + 0.5 * std::cos(pi * g.center(0, i));
    u.component(0)[i] = 0.6;  // pushes against the right wall
  }
  const double m0 = integral(s);
  for (int k = 0; k < 50; ++k) s = transport_step(s, u, 0.5 * advective_limit(u), 0.0);
  CHECK(std::abs(integral(s) - m0) <= 1e-13 * m0);
}

TEST_CASE("uniform equilibrium is a fixed point of the momentum step") {
  const Grid g(2, {8, 8}, {0.125, 0.125}, Boundary::dirichlet);
  FluidState s = bare_state(g, 5.0, 0.8, 4);
  s.eta = ScalarField(g, 0.3);
  s.f = aligned_orientation(s.eta, make_sphere_basis(4), 0.0);
  const VectorField u = momentum_step(s, s.rho, 1e-3);
  for (double v : u.values) CHECK(std::abs(v) < 1e-14);
}

TEST_CASE("momentum is conserved on a periodic Riemann problem") {
  const int n = 64;
  const Grid g = Grid::uniform(1, n, 1.0, Boundary::periodic);
  FluidState s = bare_state(g, 2.0, 0.5);
  for (int i = 0; i < n; ++i) {
    s.rho[i] = i < n / 2 ? 1.0 : 0.25;
    s.u.component(0)[i] = 0.3;
  }
  for (int k = 0; k < 20; ++k) {
    const double dt = cfl_dt(s, 0.5);
    const double before = total_momentum(s.rho, s.u, 0);
    FluidState next = s;
    next.rho = transport_step(s.rho, s.u, dt, 0.0);
    next.u = momentum_step(next, s.rho, dt);
    const double after = total_momentum(next.rho, next.u, 0);
    CHECK(std::abs(after - before) <= 1e-12 * std::abs(before));
    s = std::move(next);
  }
}

TEST_CASE("momentum step converges at first order on a manufactured solution") {
  // rho = 1 held fixed; u = (1 + t) sin(2 pi x) solves
  //   u_t + (u^2)_x - (mu + lambda) u_xx = F
  auto error = [](int n) {
    const Grid g = Grid::uniform(1, n, 1.0, Boundary::periodic);
    FluidState s = bare_state(g, 2.0, 1.0);
    const double k = 2.0 * pi;
    auto exact = [&](double x, double t) { return (1.0 + t) * std::sin(k * x); };
    for (int i = 0; i < n; ++i) s.u.component(0)[i] = exact(g.center(0, i), 0.0);
    const double T = 0.2;
    const int steps = n / 2;
    const double dt = T / steps;
    for (int m = 0; m < steps; ++m) {
      const double t1 = (m + 1) * dt;
      VectorField F(g);
      for (int i = 0; i < n; ++i) {
        const double x = g.center(0, i);
        const double a = 1.0 + t1;
        F.component(0)[i] = std::sin(k * x) + 2.0 * a * a * k * std::sin(k * x) * std::cos(k * x) + 2.0 * a * k * k * std::sin(k * x);
      }
      s.u = momentum_step(s, s.rho, dt, {}, &F);
      s.t = t1;
    }
    double e = 0.0;
    for (int i = 0; i < n; ++i) e = std::max(e, std::abs(s.u.component(0)[i] - exact(g.center(0, i), T)));
    return e;
  };
  const double e1 = error(256), e2 = error(512), e3 = error(1024);
  MESSAGE("manufactured-solution errors " << e1 << " " << e2 << " " << e3);
  CHECK(e1 / e2 > 1.6);
  CHECK(e2 / e3 > 1.6);
}

TEST_CASE("vacuum cells carry no velocity") {
  const Grid g = Grid::uniform(1, 16, 1.0, Boundary::periodic);
  FluidState s = bare_state(g, 2.0, 0.5);
  for (int i = 0; i < 4; ++i) s.rho[i] = 0.0;
  for (int i = 0; i < 16; ++i) s.u.component(0)[i] = 0.1;
  const VectorField u = momentum_step(s, s.rho, 1e-3);
  for (int i = 0; i < 4; ++i) CHECK(u.component(0)[i] == 0.0);
}

TEST_CASE("cfl bound") {
  const Grid g = Grid::uniform(1, 64, 1.0, Boundary::periodic);
  FluidState s = bare_state(g, 2.0, 1.0);
  CHECK(cfl_dt(s, 1.0) == doctest::Approx(1.0 / 8192.0).epsilon(1e-15));
  CHECK(cfl_dt(s, 0.5) == doctest::Approx(0.5 / 8192.0).epsilon(1e-15));
  CHECK_THROWS_AS(cfl_dt(s, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(cfl_dt(s, 1.5), std::invalid_argument);

  const Grid coarse = Grid::uniform(1, 8, 8.0, Boundary::periodic);  // h = 1: acoustic bound binds
  const double a = cfl_dt(bare_state(coarse, 100.0, 1.0), 1.0);
  const double b = cfl_dt(bare_state(coarse, 200.0, 1.0), 1.0);
  CHECK(a == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(a / b == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));

  FluidState vac = bare_state(g, 2.0, 0.0);
  CHECK(cfl_dt(vac, 1.0) == doctest::Approx(1.0 / 8192.0).epsilon(1e-15));
}
