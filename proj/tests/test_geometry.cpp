#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "doifbp/grid.hpp"
#include "doifbp/sphere.hpp"

using namespace doifbp;
using std::numbers::pi;

namespace {

ScalarField sine(const Grid& g, int axis = 0) {
  ScalarField s(g);
  for (int j = 0; j < g.cells(1); ++j)
    for (int i = 0; i < g.cells(0); ++i) {
      const double x = g.center(axis, axis == 0 ? i : j);
      s[g.index(i, j)] = std::sin(2.0 * pi * x / g.length(axis));
    }
  return s;
}

double laplacian_error(int n) {
  const Grid g = Grid::uniform(1, n, 1.0, Boundary::periodic);
  const ScalarField s = sine(g);
  const ScalarField l = laplacian(s);
  double e = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) e = std::max(e, std::abs(l[i] + 4.0 * pi * pi * s[i]));
  return e;
}

}  // namespace

TEST_CASE("grid invariants") {
  CHECK_THROWS_AS(Grid::uniform(1, 3, 1.0, Boundary::periodic), std::invalid_argument);
  CHECK_THROWS_AS(Grid(1, {8, 1}, {0.0, 1.0}, Boundary::periodic), std::invalid_argument);
  CHECK_THROWS_AS(Grid::uniform(3, 8, 1.0, Boundary::periodic), std::invalid_argument);
  const Grid g(2, {8, 5}, {0.5, 0.25}, Boundary::dirichlet);
  CHECK(g.size() == 40);
  CHECK(g.volume() == doctest::Approx(40 * 0.125));
  const Grid line = Grid::uniform(1, 16, 2.0, Boundary::periodic);
  CHECK(line.cells(1) == 1);
  CHECK(line.h(0) == doctest::Approx(0.125));
  CHECK(VectorField(g).values.size() == 2 * g.size());
}

TEST_CASE("constant field has zero gradient") {
  for (Boundary bc : {Boundary::periodic, Boundary::dirichlet}) {
    const Grid g(2, {6, 7}, {0.1, 0.2}, bc);
    const VectorField d = grad(ScalarField(g, 3.5));
    for (double v : d.values) CHECK(v == 0.0);
  }
}

TEST_CASE("periodic laplacian sums to zero and converges at second order") {
  const Grid g = Grid::uniform(1, 64, 1.0, Boundary::periodic);
  CHECK(std::abs(integral(laplacian(sine(g)))) < 1e-12);
  const double e64 = laplacian_error(64), e128 = laplacian_error(128);
  CHECK(e64 / e128 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("grad and div are negative adjoints") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (Boundary bc : {Boundary::periodic, Boundary::dirichlet}) {
    for (int dim : {1, 2}) {
      const Grid g(dim, {9, dim == 2 ? 6 : 1}, {0.3, 0.7}, bc);
      ScalarField s(g);
      VectorField v(g);
      for (auto& x : s.values) x = unit(rng);
      for (auto& x : v.values) x = unit(rng);
      // even ghosts for the potential, odd for the velocity
      CHECK(std::abs(inner(grad(s, Ghost::even), v) + inner(s, div(v, Ghost::odd))) < 1e-12);
    }
  }
}

TEST_CASE("odd ghost vanishes on the wall") {
  const Grid g = Grid::uniform(1, 8, 1.0, Boundary::dirichlet);
  std::vector<double> s(8, 2.0);
  CHECK(neighbor(g, s, 0, 0, -1, 0, Ghost::odd) == -2.0);
  CHECK(neighbor(g, s, 7, 0, 1, 0, Ghost::even) == 2.0);
  const Grid p = Grid::uniform(1, 8, 1.0, Boundary::periodic);
  s[7] = 5.0;
  CHECK(neighbor(p, s, 0, 0, -1, 0, Ghost::odd) == 5.0);
}

TEST_CASE("lp norms") {
  const Grid g = Grid::uniform(1, 10, 1.0, Boundary::periodic);
  for (double p : {1.0, 2.0, 3.5, std::numeric_limits<double>::infinity()})
    CHECK(lp_norm(ScalarField(g, -0.7), p) == doctest::Approx(0.7).epsilon(1e-14));
  ScalarField half(g);
  for (int i = 0; i < 5; ++i) half[i] = 1.0;
  CHECK(lp_norm(half, 2.0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
  CHECK_THROWS_AS(lp_norm(half, 0.5), std::invalid_argument);

  // re-summation oracle
  const Grid g2(2, {7, 9}, {0.13, 0.21}, Boundary::dirichlet);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  ScalarField r(g2);
  for (auto& x : r.values) x = nd(rng);
  for (double p : {1.0, 2.0, 4.0}) {
    long double acc = 0.0L;
    for (double x : r.values) acc += std::pow(static_cast<long double>(std::abs(x)), static_cast<long double>(p));
    const double oracle = static_cast<double>(std::pow(acc * g2.cell_volume(), 1.0L / p));
    CHECK(std::abs(lp_norm(r, p) - oracle) <= 1e-13 * oracle);
  }
}

TEST_CASE("grid mismatch is rejected") {
  const Grid a = Grid::uniform(1, 8, 1.0, Boundary::periodic);
  const Grid b = Grid::uniform(1, 8, 2.0, Boundary::periodic);
  CHECK_THROWS_AS(inner(ScalarField(a), ScalarField(b)), std::invalid_argument);
}

TEST_CASE("sphere basis quadrature") {
  CHECK_THROWS_AS(make_sphere_basis(1), std::invalid_argument);
  for (int L = 2; L <= 9; ++L) {
    const SphereBasis b(L);
    CHECK(std::abs(b.weights().sum() - 4.0 * pi) < 1e-12 * 4.0 * pi);
    for (int k = 0; k < b.num_nodes(); ++k) CHECK(b.node(k).norm() == doctest::Approx(1.0).epsilon(1e-14));
  }
  // monomials up to degree 4: int x^a y^b z^c over S^2 in closed form
  auto closed = [](int a, int b, int c) {
    if (a % 2 || b % 2 || c % 2) return 0.0;
    auto g = [](double x) { return std::tgamma(x); };
    const double be1 = 0.5 * (a + 1), be2 = 0.5 * (b + 1), be3 = 0.5 * (c + 1);
    return 2.0 * g(be1) * g(be2) * g(be3) / g(be1 + be2 + be3);
  };
  const SphereBasis b(2);
  for (int a = 0; a <= 4; ++a)
    for (int bb = 0; a + bb <= 4; ++bb)
      for (int c = 0; a + bb + c <= 4; ++c) {
        Eigen::VectorXd v(b.num_nodes());
        for (int k = 0; k < b.num_nodes(); ++k) {
          const auto& t = b.node(k);
          v[k] = std::pow(t.x(), a) * std::pow(t.y(), bb) * std::pow(t.z(), c);
        }
        CHECK(std::abs(b.integrate(v) - closed(a, bb, c)) < 1e-12);
      }
}

TEST_CASE("harmonics integrate exactly to degree 2L+1") {
  const int L = 5;
  const SphereBasis b(L);
  const SphereBasis wide(2 * L + 1);  // evaluate high-degree harmonics at the small basis nodes
  for (int a = 1; a < wide.num_coeffs(); ++a) {
    Eigen::VectorXd v(b.num_nodes());
    for (int k = 0; k < b.num_nodes(); ++k) v[k] = wide.basis_at(b.node(k))[a];
    CHECK(std::abs(b.integrate(v)) < 1e-12);
  }
}

TEST_CASE("transform round trip and laplacian") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const SphereBasis b(7);
  Eigen::VectorXd c(b.num_coeffs());
  for (auto& x : c) x = unit(rng);
  CHECK((b.forward(b.inverse(c)) - c).cwiseAbs().maxCoeff() < 1e-12);
  const Eigen::VectorXd nodal = b.inverse(c);
  CHECK((b.inverse(b.forward(nodal)) - nodal).cwiseAbs().maxCoeff() < 1e-12);

  CHECK(std::abs(b.integrate(b.inverse(sphere_laplacian(b, c)))) < 1e-10);
  Eigen::VectorXd y00 = Eigen::VectorXd::Zero(b.num_coeffs());
  y00[0] = 1.0;
  CHECK(sphere_laplacian(b, y00).cwiseAbs().maxCoeff() == 0.0);
  Eigen::VectorXd y20 = Eigen::VectorXd::Zero(b.num_coeffs());
  y20[SphereBasis::index(2, 0)] = 1.0;
  CHECK(sphere_laplacian(b, y20)[SphereBasis::index(2, 0)] == -6.0);
  CHECK_THROWS_AS(sphere_laplacian(b, Eigen::VectorXd::Zero(4)), std::invalid_argument);
}

TEST_CASE("basis matches closed-form low harmonics") {
  const SphereBasis b(3);
  const Eigen::Vector3d t = Eigen::Vector3d(0.3, -0.5, 0.8).normalized();
  const Eigen::VectorXd y = b.basis_at(t);
  CHECK(y[0] == doctest::Approx(0.5 / std::sqrt(pi)));
  CHECK(y[SphereBasis::index(1, 0)] == doctest::Approx(std::sqrt(3.0 / (4.0 * pi)) * t.z()));
  CHECK(y[SphereBasis::index(1, 1)] == doctest::Approx(std::sqrt(3.0 / (4.0 * pi)) * t.x()));
  CHECK(y[SphereBasis::index(1, -1)] == doctest::Approx(std::sqrt(3.0 / (4.0 * pi)) * t.y()));
  CHECK(y[SphereBasis::index(2, 0)] == doctest::Approx(std::sqrt(5.0 / (16.0 * pi)) * (3.0 * t.z() * t.z() - 1.0)));
  CHECK(y[SphereBasis::index(2, -2)] == doctest::Approx(std::sqrt(15.0 / (4.0 * pi)) * t.x() * t.y()));
}

TEST_CASE("tangential gradient matches finite differences") {
  const SphereBasis b(4);
  const int k = 7;
  const Eigen::Vector3d t = b.node(k);
  for (int a = 0; a < b.num_coeffs(); ++a) {
    // differentiate the degree-0 homogeneous extension Y(x/|x|) along each axis
    Eigen::Vector3d g;
    const double eps = 1e-6;
    for (int i = 0; i < 3; ++i) {
      Eigen::Vector3d p = t, m = t;
      p[i] += eps;
      m[i] -= eps;
      g[i] = (b.basis_at(p.normalized())[a] - b.basis_at(m.normalized())[a]) / (2 * eps);
    }
    for (int i = 0; i < 3; ++i) CHECK(b.tangential_gradient(i)(k, a) == doctest::Approx(g[i]).epsilon(1e-6).scale(1.0));
  }
}
