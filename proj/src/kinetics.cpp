#include "doifbp/kinetics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

#include "doifbp/errors.hpp"
#include "doifbp/transport.hpp"

namespace doifbp {

VelocityGradient velocity_gradient(const VectorField& u) {
  const Grid& g = u.grid;
  VelocityGradient out(g.size(), Eigen::Matrix3d::Zero());
  std::vector<double> d(g.size());
  for (int i = 0; i < g.dim(); ++i) {
    for (int j = 0; j < g.dim(); ++j) {
      centered_derivative(g, u.component(i), j, Ghost::odd, d);
      for (std::size_t n = 0; n < g.size(); ++n) out[n](i, j) = d[n];
    }
  }
  return out;
}

Eigen::Vector3d projection_drift(const Eigen::Matrix3d& g, const Eigen::Vector3d& tau) {
  if (std::abs(tau.norm() - 1.0) > 1e-12) throw std::invalid_argument("projection_drift needs a unit vector");
  const Eigen::Vector3d gt = g * tau;
  return gt - tau.dot(gt) * tau;
}

DriftCoupling::DriftCoupling(const SphereBasis& basis) {
  const int nn = basis.num_nodes();
  for (int j = 0; j < 3; ++j) {
    Eigen::VectorXd wt(nn);
    for (int k = 0; k < nn; ++k) wt[k] = basis.weight(k) * basis.node(k)[j];
    const Eigen::MatrixXd weighted = wt.asDiagonal() * basis.synthesis();
    for (int i = 0; i < 3; ++i) {
      Eigen::MatrixXd dense = basis.tangential_gradient(i).transpose() * weighted;
      const double scale = std::max(dense.cwiseAbs().maxCoeff(), 1.0);
      dense = dense.unaryExpr([scale](double x) { return std::abs(x) < 1e-14 * scale ? 0.0 : x; });
      tables_[3 * i + j] = dense.sparseView();
    }
  }
}

const DriftCoupling& drift_coupling(const SphereBasis& basis) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<DriftCoupling>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[basis.degree()];
  if (!slot) slot = std::make_unique<DriftCoupling>(basis);
  return *slot;
}

Eigen::MatrixXd drift_rate(const OrientationField& f, const VelocityGradient& g) {
  if (g.size() != f.grid.size()) throw std::invalid_argument("velocity gradient does not match orientation grid");
  const DriftCoupling& dc = drift_coupling(*f.basis);
  Eigen::MatrixXd rate = Eigen::MatrixXd::Zero(f.coeffs.rows(), f.coeffs.cols());
  Eigen::VectorXd scale(f.coeffs.cols());
  for (int i = 0; i < f.grid.dim(); ++i) {
    for (int j = 0; j < f.grid.dim(); ++j) {
      bool any = false;
      for (Eigen::Index n = 0; n < scale.size(); ++n) {
        scale[n] = g[n](i, j);
        any = any || scale[n] != 0.0;
      }
      if (!any) continue;
      rate.noalias() += (dc.table(i, j) * f.coeffs) * scale.asDiagonal();
    }
  }
  return rate;
}

OrientationField fp_rhs(const OrientationField& f, const VectorField& u, double diffusivity, double rotational_diffusivity) {
  require_same_grid(f.grid, u.grid, "fp_rhs");
  OrientationField out(f.grid, f.basis);
  advection_diffusion_rate(f.grid, f.coeffs.data(), static_cast<int>(f.coeffs.rows()), u, diffusivity, out.coeffs.data());
  out.coeffs += drift_rate(f, velocity_gradient(u));
  out.coeffs += rotational_diffusivity * (f.basis->laplace_eigenvalues().asDiagonal() * f.coeffs);
  return out;
}

ScalarField eta_moment(const OrientationField& f) {
  const Eigen::RowVectorXd row = f.basis->weights().transpose() * f.basis->synthesis();
  const Eigen::RowVectorXd eta = row * f.coeffs;
  ScalarField out(f.grid);
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = eta[static_cast<Eigen::Index>(n)];
  return out;
}

TensorField stress_moment(const OrientationField& f) {
  const SphereBasis& b = *f.basis;
  const int nn = b.num_nodes();
  TensorField out(f.grid.size(), Eigen::Matrix3d::Zero());
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      Eigen::VectorXd kernel(nn);
      for (int k = 0; k < nn; ++k) kernel[k] = b.weight(k) * (3.0 * b.node(k)[i] * b.node(k)[j] - (i == j ? 1.0 : 0.0));
      const Eigen::RowVectorXd row = kernel.transpose() * b.synthesis();
      const Eigen::RowVectorXd vals = row * f.coeffs;
      for (std::size_t n = 0; n < out.size(); ++n) {
        out[n](i, j) = vals[static_cast<Eigen::Index>(n)];
        out[n](j, i) = out[n](i, j);
      }
    }
  }
  return out;
}

double min_nodal_value(const OrientationField& f) {
  if (f.coeffs.cols() == 0) return 0.0;
  return f.nodal().minCoeff();
}

void require_positive(const OrientationField& f) {
  const double m = min_nodal_value(f);
  if (m < -kPositivityTolerance)
    throw NumericalError("orientation distribution lost positivity (min nodal value " + std::to_string(m) + ")");
}

EntropyFisher entropy_and_fisher(const OrientationField& f) {
  const SphereBasis& b = *f.basis;
  const Grid& g = f.grid;
  const Eigen::MatrixXd nodal = f.nodal();
  if (nodal.size() > 0 && nodal.minCoeff() < -kPositivityTolerance)
    throw NumericalError("entropy of a distribution with negative nodal values (min " + std::to_string(nodal.minCoeff()) + ")");
  const Eigen::MatrixXd clamped = nodal.cwiseMax(0.0);

  EntropyFisher out{ScalarField(g), 0.0, 0.0};
  const Eigen::MatrixXd flnf = clamped.unaryExpr([](double v) { return v > 0.0 ? v * std::log(v) : 0.0; });
  const Eigen::RowVectorXd psi = b.weights().transpose() * flnf;
  for (std::size_t n = 0; n < g.size(); ++n) out.psi[n] = psi[static_cast<Eigen::Index>(n)];

  const Eigen::MatrixXd root = clamped.cwiseSqrt();
  const Eigen::MatrixXd root_hat = b.analysis() * root;
  const Eigen::VectorXd ll = -b.laplace_eigenvalues();
  out.fisher_tau = (ll.asDiagonal() * root_hat.cwiseAbs2()).sum() * g.cell_volume();

  // Node-by-node spatial gradients of sqrt f.
  const Eigen::MatrixXd root_t = root.transpose();  // cells x nodes
  std::vector<double> d(g.size());
  double fx = 0.0;
  for (int k = 0; k < b.num_nodes(); ++k) {
    std::span<const double> col(root_t.col(k).data(), g.size());
    double acc = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
      centered_derivative(g, col, a, Ghost::odd, d);
      for (double v : d) acc += v * v;
    }
    fx += b.weight(k) * acc;
  }
  out.fisher_x = fx * g.cell_volume();
  return out;
}

KineticMoments kinetic_moments(const OrientationField& f) {
  auto ef = entropy_and_fisher(f);
  return {eta_moment(f), stress_moment(f), std::move(ef.psi)};
}

}  // namespace doifbp
