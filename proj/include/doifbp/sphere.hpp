#pragma once

#include <Eigen/Dense>
#include <array>
#include <memory>
#include <vector>

namespace doifbp {

/// Discretization of the unit sphere S^2: Gauss-Legendre in cos(theta) times
/// a uniform grid in phi, together with the real spherical-harmonic basis
/// of degree <= L sampled at the nodes.
///
/// Coefficient a = l*l + l + m holds the (l, m) mode, 0 <= l <= L, |m| <= l.
/// Real harmonics are orthonormal on S^2:
///   Y_l0 = Q_l^0,  Y_lm = sqrt2 Q_l^m cos(m phi),  Y_l,-m = sqrt2 Q_l^m sin(m phi)
/// with Q the fully normalized associated Legendre functions (no Condon-Shortley phase).
///
/// The product rule uses L+2 latitudes and 2L+4 longitudes, which integrates
/// every polynomial of degree <= 2L+3 on the sphere exactly. The weak drift
/// operator needs degree 2L+2.
class SphereBasis {
 public:
  explicit SphereBasis(int degree);

  int degree() const noexcept { return degree_; }
  int num_coeffs() const noexcept { return (degree_ + 1) * (degree_ + 1); }
  int num_nodes() const noexcept { return static_cast<int>(weights_.size()); }
  int num_latitudes() const noexcept { return n_theta_; }
  int num_longitudes() const noexcept { return n_phi_; }

  static int index(int l, int m) noexcept { return l * l + l + m; }
  static int degree_of(int a) noexcept;

  const Eigen::Vector3d& node(int k) const { return nodes_[k]; }
  double weight(int k) const { return weights_[k]; }
  const Eigen::VectorXd& weights() const noexcept { return weights_; }

  /// nodes x coeffs; nodal values = synthesis() * coeffs.
  const Eigen::MatrixXd& synthesis() const noexcept { return synthesis_; }
  /// coeffs x nodes; coeffs = analysis() * nodal values (quadrature projection).
  const Eigen::MatrixXd& analysis() const noexcept { return analysis_; }
  /// Tangential gradient component `i` (Cartesian) of each basis function at each node (nodes x coeffs).
  const Eigen::MatrixXd& tangential_gradient(int i) const { return grad_[i]; }
  /// -l(l+1) per coefficient.
  const Eigen::VectorXd& laplace_eigenvalues() const noexcept { return laplace_; }

  Eigen::VectorXd forward(const Eigen::VectorXd& nodal) const { return analysis_ * nodal; }
  Eigen::VectorXd inverse(const Eigen::VectorXd& coeffs) const { return synthesis_ * coeffs; }

  /// Quadrature of nodal values over S^2.
  double integrate(const Eigen::VectorXd& nodal) const { return weights_.dot(nodal); }

  /// All basis functions evaluated at an arbitrary unit vector.
  Eigen::VectorXd basis_at(const Eigen::Vector3d& tau) const;
  /// Band-limited expansion evaluated at an arbitrary unit vector.
  double evaluate(const Eigen::VectorXd& coeffs, const Eigen::Vector3d& tau) const { return basis_at(tau).dot(coeffs); }

 private:
  int degree_;
  int n_theta_;
  int n_phi_;
  std::vector<Eigen::Vector3d> nodes_;
  Eigen::VectorXd weights_;
  Eigen::MatrixXd synthesis_;
  Eigen::MatrixXd analysis_;
  std::array<Eigen::MatrixXd, 3> grad_;
  Eigen::VectorXd laplace_;
};

/// Builds the basis; rejects L < 2.
std::shared_ptr<const SphereBasis> make_sphere_basis(int degree);

/// Applies the Laplace-Beltrami operator: coefficient (l,m) times -l(l+1).
Eigen::VectorXd sphere_laplacian(const SphereBasis& basis, const Eigen::VectorXd& coeffs);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

}  // namespace doifbp
