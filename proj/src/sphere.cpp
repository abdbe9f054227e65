#include "doifbp/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace doifbp {

namespace {

constexpr double kPi = std::numbers::pi;

// Fully normalized associated Legendre table Q[l][m], m <= l, at x = cos(theta), s = sin(theta).
std::vector<std::vector<double>> normalized_legendre(int L, double x, double s) {
  std::vector<std::vector<double>> q(L + 2, std::vector<double>(L + 2, 0.0));
  q[0][0] = 1.0 / std::sqrt(4.0 * kPi);
  for (int m = 1; m <= L; ++m) q[m][m] = std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s * q[m - 1][m - 1];
  for (int m = 0; m < L; ++m) q[m + 1][m] = std::sqrt(2.0 * m + 3.0) * x * q[m][m];
  for (int m = 0; m <= L; ++m) {
    for (int l = m + 2; l <= L; ++l) {
      const double a = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - static_cast<double>(m) * m));
      const double b = std::sqrt((static_cast<double>(l - 1) * (l - 1) - static_cast<double>(m) * m) /
                                 (4.0 * (l - 1) * (l - 1) - 1.0));
      q[l][m] = a * (x * q[l - 1][m] - b * q[l - 2][m]);
    }
  }
  return q;
}

struct HarmonicSample {
  Eigen::VectorXd value;
  Eigen::VectorXd d_theta;
  Eigen::VectorXd d_phi;
};

HarmonicSample sample_harmonics(int L, double theta, double phi) {
  const double x = std::cos(theta);
  const double s = std::sin(theta);
  const auto q = normalized_legendre(L, x, s);
  const int n = (L + 1) * (L + 1);
  HarmonicSample out{Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
  const double r2 = std::sqrt(2.0);
  for (int l = 0; l <= L; ++l) {
    for (int m = 0; m <= l; ++m) {
      double dq;
      if (m == 0) {
        dq = l > 0 ? -std::sqrt(static_cast<double>(l) * (l + 1)) * q[l][1] : 0.0;
      } else {
        const double up = m + 1 <= l ? q[l][m + 1] : 0.0;
        dq = 0.5 * (std::sqrt(static_cast<double>(l + m) * (l - m + 1)) * q[l][m - 1] -
                    std::sqrt(static_cast<double>(l + m + 1) * (l - m)) * up);
      }
      if (m == 0) {
        const int a = SphereBasis::index(l, 0);
        out.value[a] = q[l][0];
        out.d_theta[a] = dq;
      } else {
        const double c = std::cos(m * phi);
        const double sn = std::sin(m * phi);
        const int ap = SphereBasis::index(l, m);
        const int am = SphereBasis::index(l, -m);
        out.value[ap] = r2 * q[l][m] * c;
        out.value[am] = r2 * q[l][m] * sn;
        out.d_theta[ap] = r2 * dq * c;
        out.d_theta[am] = r2 * dq * sn;
        out.d_phi[ap] = -m * r2 * q[l][m] * sn;
        out.d_phi[am] = m * r2 * q[l][m] * c;
      }
    }
  }
  return out;
}

}  // namespace

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // Recompute the derivative at the converged root.
    double p0 = 1.0;
    double p1 = z;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (z * p1 - p0) / (z * z - 1.0);
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

int SphereBasis::degree_of(int a) noexcept {
  int l = static_cast<int>(std::sqrt(static_cast<double>(a)));
  while (l * l > a) --l;
  while ((l + 1) * (l + 1) <= a) ++l;
  return l;
}

SphereBasis::SphereBasis(int degree) : degree_(degree), n_theta_(degree + 2), n_phi_(2 * degree + 4) {
  if (degree < 2) throw std::invalid_argument("sphere degree L must be at least 2");
  std::vector<double> gx;
  std::vector<double> gw;
  gauss_legendre(n_theta_, gx, gw);

  const int nn = n_theta_ * n_phi_;
  const int nc = num_coeffs();
  nodes_.resize(nn);
  weights_.resize(nn);
  synthesis_.resize(nn, nc);
  for (auto& g : grad_) g.resize(nn, nc);

  int k = 0;
  for (int it = 0; it < n_theta_; ++it) {
    const double theta = std::acos(gx[it]);
    const double st = std::sin(theta);
    const double ct = std::cos(theta);
    for (int ip = 0; ip < n_phi_; ++ip, ++k) {
      const double phi = 2.0 * kPi * ip / n_phi_;
      const double cp = std::cos(phi);
      const double sp = std::sin(phi);
      nodes_[k] = Eigen::Vector3d(st * cp, st * sp, gx[it]);
      weights_[k] = gw[it] * 2.0 * kPi / n_phi_;
      const HarmonicSample hs = sample_harmonics(degree_, theta, phi);
      const Eigen::Vector3d e_theta(ct * cp, ct * sp, -st);
      const Eigen::Vector3d e_phi(-sp, cp, 0.0);
      synthesis_.row(k) = hs.value.transpose();
      for (int a = 0; a < nc; ++a) {
        const Eigen::Vector3d g = hs.d_theta[a] * e_theta + (hs.d_phi[a] / st) * e_phi;
        for (int i = 0; i < 3; ++i) grad_[i](k, a) = g[i];
      }
    }
  }
  analysis_ = synthesis_.transpose() * weights_.asDiagonal();
  laplace_.resize(nc);
  for (int a = 0; a < nc; ++a) {
    const int l = degree_of(a);
    laplace_[a] = -static_cast<double>(l) * (l + 1);
  }
}

Eigen::VectorXd SphereBasis::basis_at(const Eigen::Vector3d& tau) const {
  const double theta = std::acos(std::clamp(tau[2], -1.0, 1.0));
  const double phi = std::atan2(tau[1], tau[0]);
  return sample_harmonics(degree_, theta, phi).value;
}

std::shared_ptr<const SphereBasis> make_sphere_basis(int degree) { return std::make_shared<const SphereBasis>(degree); }

Eigen::VectorXd sphere_laplacian(const SphereBasis& basis, const Eigen::VectorXd& coeffs) {
  if (coeffs.size() != basis.num_coeffs()) throw std::invalid_argument("coefficient vector does not match basis degree");
  return coeffs.cwiseProduct(basis.laplace_eigenvalues());
}

}  // namespace doifbp
