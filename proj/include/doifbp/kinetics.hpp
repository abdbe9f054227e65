#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <array>
#include <memory>
#include <vector>

#include "doifbp/grid.hpp"
#include "doifbp/sphere.hpp"

namespace doifbp {

/// Nodal reconstructions of f may dip this far below zero before the field
/// is considered invalid; entropy evaluation clamps the remainder to 0.
inline constexpr double kPositivityTolerance = 1e-10;

/// Orientation distribution f(x, tau): one harmonic coefficient vector per
/// cell, stored as the columns of a (num_coeffs x cells) matrix.
struct OrientationField {
  Grid grid;
  std::shared_ptr<const SphereBasis> basis;
  Eigen::MatrixXd coeffs;

  OrientationField(const Grid& g, std::shared_ptr<const SphereBasis> b)
      : grid(g), basis(std::move(b)), coeffs(Eigen::MatrixXd::Zero(basis->num_coeffs(), static_cast<Eigen::Index>(g.size()))) {}

  /// f(x, tau_k) at every quadrature node (nodes x cells).
  Eigen::MatrixXd nodal() const { return basis->synthesis() * coeffs; }
  /// Sets every cell from nodal samples (nodes x cells) by quadrature projection.
  void set_nodal(const Eigen::MatrixXd& values) { coeffs = basis->analysis() * values; }
};

/// Per-cell 3x3 velocity gradient G_ij = d u_i / d x_j, zero outside the dim x dim block.
using VelocityGradient = std::vector<Eigen::Matrix3d>;
using TensorField = std::vector<Eigen::Matrix3d>;

VelocityGradient velocity_gradient(const VectorField& u);

/// Tangential part of G tau: G tau - (tau . G tau) tau. Rejects |tau| != 1.
Eigen::Vector3d projection_drift(const Eigen::Matrix3d& g, const Eigen::Vector3d& tau);

/// Galerkin tables of the sphere drift: entry (a, b) of table (i, j) is
/// the quadrature of Y_b tau_j (grad_tau Y_a)_i, so the weak drift rate of
/// coefficient a is sum_ij G_ij (table_ij c)_a. Row 0 vanishes identically,
/// which makes the drift conserve sphere mass exactly.
class DriftCoupling {
 public:
  explicit DriftCoupling(const SphereBasis& basis);
  const Eigen::SparseMatrix<double, Eigen::RowMajor>& table(int i, int j) const { return tables_[3 * i + j]; }

 private:
  std::array<Eigen::SparseMatrix<double, Eigen::RowMajor>, 9> tables_;
};

/// Shared tables for a basis degree; built once per degree, thread-safe.
const DriftCoupling& drift_coupling(const SphereBasis& basis);

/// Sphere drift rate -div_tau(P(G tau) f) for every cell, in coefficient space.
Eigen::MatrixXd drift_rate(const OrientationField& f, const VelocityGradient& g);

/// Time derivative of f:
///   -div(f u) - div_tau(P(grad u tau) f) + D_tau lap_tau f + D lap f.
OrientationField fp_rhs(const OrientationField& f, const VectorField& u, double diffusivity, double rotational_diffusivity);

/// eta = integral of f over S^2, per cell.
ScalarField eta_moment(const OrientationField& f);

/// sigma = integral of (3 tau x tau - I) f over S^2, per cell.
TensorField stress_moment(const OrientationField& f);

struct EntropyFisher {
  ScalarField psi;      // integral of f ln f over S^2, per cell
  double fisher_tau;    // integral over Omega x S^2 of |grad_tau sqrt f|^2
  double fisher_x;      // integral over Omega x S^2 of |grad_x sqrt f|^2
};

/// Rejects nodal values below -kPositivityTolerance; 0 ln 0 = 0.
EntropyFisher entropy_and_fisher(const OrientationField& f);

struct KineticMoments {
  ScalarField eta;
  TensorField sigma;
  ScalarField psi;
};

KineticMoments kinetic_moments(const OrientationField& f);

/// Smallest nodal value of f over all cells and quadrature nodes.
double min_nodal_value(const OrientationField& f);
/// Throws NumericalError if any nodal value is below -kPositivityTolerance.
void require_positive(const OrientationField& f);

}  // namespace doifbp
