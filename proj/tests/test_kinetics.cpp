#include <doctest.h>

#include <Eigen/Geometry>
#include <cmath>
#include <numbers>
#include <random>

#include "doifbp/errors.hpp"
#include "doifbp/kinetics.hpp"
#include "doifbp/presets.hpp"

using namespace doifbp;
using std::numbers::pi;

namespace {

OrientationField random_field(const Grid& g, int L, std::uint64_t seed, double floor = 0.0) {
  OrientationField f(g, make_sphere_basis(L));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (Eigen::Index j = 0; j < f.coeffs.cols(); ++j) {
    for (Eigen::Index a = 1; a < f.coeffs.rows(); ++a) f.coeffs(a, j) = 0.05 * unit(rng);
    f.coeffs(0, j) = floor;
  }
  return f;
}

}  // namespace

TEST_CASE("projection drift") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  Eigen::Matrix3d w;
  w << 0, -1, 2, 1, 0, -3, -2, 3, 0;
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Vector3d tau = Eigen::Vector3d(nd(rng), nd(rng), nd(rng)).normalized();
    CHECK(projection_drift(Eigen::Matrix3d::Identity(), tau).norm() < 1e-14);
    CHECK((projection_drift(w, tau) - w * tau).norm() < 1e-13);
    Eigen::Matrix3d g;
    for (int k = 0; k < 9; ++k) g(k / 3, k % 3) = nd(rng);
    CHECK(std::abs(projection_drift(g, tau).dot(tau)) < 1e-12);
  }
  Eigen::Matrix3d shear = Eigen::Matrix3d::Zero();
  shear(0, 1) = 1.0;
  CHECK((projection_drift(shear, Eigen::Vector3d::UnitY()) - Eigen::Vector3d::UnitX()).norm() < 1e-15);
  CHECK_THROWS_AS(projection_drift(shear, Eigen::Vector3d(1.0, 1.0, 0.0)), std::invalid_argument);
}

TEST_CASE("velocity gradient is zero padded") {
  const Grid g(2, {6, 6}, {0.2, 0.2}, Boundary::periodic);
  VectorField u(g);
  for (int j = 0; j < 6; ++j)
    for (int i = 0; i < 6; ++i) {
      u.component(0)[g.index(i, j)] = std::sin(2 * pi * g.center(1, j) / g.length(1));
      u.component(1)[g.index(i, j)] = std::cos(2 * pi * g.center(0, i) / g.length(0));
    }
  for (const auto& m : velocity_gradient(u)) {
    CHECK(m.row(2).norm() == 0.0);
    CHECK(m.col(2).norm() == 0.0);
    CHECK(m(0, 0) == 0.0);
  }
}

TEST_CASE("fp_rhs equilibrium and sphere-mass preservation") {
  const Grid g = Grid::uniform(1, 8, 1.0, Boundary::periodic);
  const auto basis = make_sphere_basis(6);
  const OrientationField uniform = aligned_orientation(ScalarField(g, 1.0), basis, 0.0);
  CHECK(fp_rhs(uniform, VectorField(g), 1.0, 1.0).coeffs.cwiseAbs().maxCoeff() < 1e-14);

  OrientationField f = random_field(g, 6, 4, 1.0);
  f.coeffs = f.coeffs.col(0).replicate(1, f.coeffs.cols());
  const OrientationField r = fp_rhs(f, VectorField(g), 1.0, 1.0);
  for (Eigen::Index j = 0; j < r.coeffs.cols(); ++j) CHECK(std::abs(basis->integrate(basis->inverse(r.coeffs.col(j)))) < 1e-10);
}

TEST_CASE("drift conserves sphere mass and matches the direct weak form") {
  const Grid g(2, {4, 4}, {0.25, 0.25}, Boundary::periodic);
  const OrientationField f = random_field(g, 5, 9, 0.3);
  const SphereBasis& b = *f.basis;
  std::mt19937_64 rng(2);
  std::normal_distribution<double> nd;
  VelocityGradient G(g.size(), Eigen::Matrix3d::Zero());
  for (auto& m : G)
    for (int k = 0; k < 4; ++k) m(k / 2, k % 2) = nd(rng);
  const Eigen::MatrixXd rate = drift_rate(f, G);
  const Eigen::MatrixXd nodal = f.nodal();
  for (Eigen::Index j = 0; j < rate.cols(); ++j) {
    CHECK(std::abs(rate(0, j)) < 1e-12);
    for (int a = 0; a < b.num_coeffs(); ++a) {
      // weak form: int P(G tau) f . grad_tau Y_a
      double oracle = 0.0;
      for (int k = 0; k < b.num_nodes(); ++k) {
        const Eigen::Vector3d v = projection_drift(G[j], b.node(k)) * nodal(k, j);
        for (int i = 0; i < 3; ++i) oracle += b.weight(k) * v[i] * b.tangential_gradient(i)(k, a);
      }
      CHECK(rate(a, j) == doctest::Approx(oracle).epsilon(1e-10).scale(1.0));
    }
  }
}

TEST_CASE("rigid rotation transports f along the rotation") {
  const Grid g(2, {4, 4}, {0.25, 0.25}, Boundary::periodic);
  const int L = 6;
  OrientationField f = random_field(g, L, 21, 0.5);
  f.coeffs = f.coeffs.col(0).replicate(1, f.coeffs.cols());
  const SphereBasis& b = *f.basis;
  const double omega = 0.8;
  Eigen::Matrix3d W = Eigen::Matrix3d::Zero();
  W(0, 1) = -omega;
  W(1, 0) = omega;
  const VelocityGradient G(g.size(), W);
  const Eigen::MatrixXd rate = drift_rate(f, G);

  auto error = [&](double dt) {
    // f(t, tau) = f0(exp(-t W) tau)
    const Eigen::Matrix3d back = Eigen::AngleAxisd(-omega * dt, Eigen::Vector3d::UnitZ()).toRotationMatrix();
    double e = 0.0;
    const Eigen::VectorXd stepped = f.coeffs.col(0) + dt * rate.col(0);
    for (int k = 0; k < b.num_nodes(); ++k) {
      const double exact = b.evaluate(f.coeffs.col(0), back * b.node(k));
      e = std::max(e, std::abs(b.evaluate(stepped, b.node(k)) - exact));
    }
    return e;
  };
  const double e1 = error(1e-2), e2 = error(5e-3);
  CHECK(e1 < 1e-3);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("eta moment") {
  const Grid g = Grid::uniform(1, 6, 1.0, Boundary::periodic);
  const auto basis = make_sphere_basis(7);
  const ScalarField one = eta_moment(aligned_orientation(ScalarField(g, 1.0), basis, 0.0));
  for (double v : one.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
  OrientationField f = random_field(g, 7, 3, 0.0);
  for (double v : eta_moment(f).values) CHECK(std::abs(v) < 1e-12);
  f.coeffs.row(0).setConstant(0.7);
  for (double v : eta_moment(f).values) CHECK(v == doctest::Approx(std::sqrt(4 * pi) * 0.7).epsilon(1e-12));
  for (double v : eta_moment(OrientationField(g, basis)).values) CHECK(v == 0.0);
}

TEST_CASE("stress moment closed forms") {
  const Grid g = Grid::uniform(1, 4, 1.0, Boundary::periodic);
  const auto basis = make_sphere_basis(7);
  for (const auto& s : stress_moment(aligned_orientation(ScalarField(g, 2.5), basis, 0.0))) CHECK(s.cwiseAbs().maxCoeff() < 1e-14);

  OrientationField odd(g, basis);
  Eigen::VectorXd nodal(basis->num_nodes());
  for (int k = 0; k < basis->num_nodes(); ++k) nodal[k] = (1.0 + 0.7 * basis->node(k).z()) / (4 * pi);
  odd.coeffs = (basis->analysis() * nodal).replicate(1, 4);
  for (const auto& s : stress_moment(odd)) CHECK(s.cwiseAbs().maxCoeff() < 1e-14);

  for (double bb : {-0.5, 0.4, 1.0}) {
    const Eigen::Matrix3d expect = bb * Eigen::Vector3d(-0.4, -0.4, 0.8).asDiagonal().toDenseMatrix();
    for (const auto& s : stress_moment(aligned_orientation(ScalarField(g, 1.0), basis, bb)))
      CHECK((s - expect).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("stress only sees degrees 0 and 2") {
  const Grid g = Grid::uniform(1, 4, 1.0, Boundary::periodic);
  OrientationField f = random_field(g, 7, 8, 0.0);
  for (int a = 4; a < 9; ++a) f.coeffs.row(a).setZero();  // drop l = 2
  for (const auto& s : stress_moment(f)) CHECK(s.cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("entropy and fisher information") {
  const Grid g = Grid::uniform(1, 8, 1.0, Boundary::periodic);
  const auto basis = make_sphere_basis(7);
  const EntropyFisher u = entropy_and_fisher(aligned_orientation(ScalarField(g, 1.0), basis, 0.0));
  for (double v : u.psi.values) CHECK(v == doctest::Approx(-std::log(4 * pi)).epsilon(1e-13));
  CHECK(std::abs(u.fisher_tau) < 1e-13);
  CHECK(std::abs(u.fisher_x) < 1e-13);

  const EntropyFisher z = entropy_and_fisher(OrientationField(g, basis));
  for (double v : z.psi.values) CHECK(v == 0.0);

  const EntropyFisher a = entropy_and_fisher(aligned_orientation(ScalarField(g, 1.0), basis, 0.6));
  CHECK(a.fisher_x == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
  CHECK(a.fisher_tau > 0.0);
  CHECK(a.psi[0] > -std::log(4 * pi));  // anisotropy raises the entropy functional

  OrientationField neg = aligned_orientation(ScalarField(g, 1.0), basis, 0.0);
  neg.coeffs(0, 3) = -1e-3;
  CHECK_THROWS_AS(entropy_and_fisher(neg), NumericalError);
  CHECK_THROWS_AS(require_positive(neg), NumericalError);
}

TEST_CASE("entropy is non-increasing under diffusion with u = 0") {
  const Grid g = Grid::uniform(1, 16, 1.0, Boundary::periodic);
  const auto basis = make_sphere_basis(7);
  ScalarField eta(g);
  for (int i = 0; i < 16; ++i) eta[i] = 1.0 + 0.5 * std::sin(2 * pi * g.center(0, i));
  OrientationField f = aligned_orientation(eta, basis, 0.8);
  const VectorField u(g);
  const double dt = 0.3 * std::min(g.h(0) * g.h(0) / 2.0, 1.0 / 56.0);
  double prev = integral(entropy_and_fisher(f).psi);
  for (int k = 0; k < 200; ++k) {
    f.coeffs += dt * fp_rhs(f, u, 1.0, 1.0).coeffs;
    const double now = integral(entropy_and_fisher(f).psi);
    CHECK(now <= prev + 1e-8);
    prev = now;
  }
}
