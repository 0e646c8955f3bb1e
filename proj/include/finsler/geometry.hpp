#pragma once

#include <functional>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/CXX11/Tensor>

namespace finsler {

using Tensor3 = Eigen::Tensor<double, 3>;
using Tensor4 = Eigen::Tensor<double, 4>;

/// Axis-aligned box with an optional extra membership predicate.
struct ChartDomain {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  std::function<bool(const Eigen::VectorXd&)> predicate;

  bool contains(const Eigen::VectorXd& x) const;
  /// Same domain with the box shrunk by `margin` on every side.
  ChartDomain shrunk(double margin) const;
};

/// The Riemannian metric a_ij(x) and one-form b_i(x) of an (alpha, beta) pair.
struct MetricSpec {
  std::string name;
  int dim = 2;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> a;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> b_form;
  ChartDomain domain;
  double regularity_margin = 0.05;
};

/// Pointwise algebraic data of (alpha, beta) at x.
struct PointFrame {
  Eigen::MatrixXd a;
  Eigen::MatrixXd a_inv;
  Eigen::VectorXd b_lower;
  Eigen::VectorXd b_upper;
  double b_norm = 0.0;
};

/// Evaluates a, b at x and inverts a by Cholesky (SingularMetric on failure).
PointFrame point_frame(const MetricSpec& m, const Eigen::VectorXd& x);

/// Levi-Civita symbols gamma(i, j, k) = gamma^i_jk of alpha.
Tensor3 christoffels(const MetricSpec& m, const Eigen::VectorXd& x);

/// Covariant derivative of beta and its r/s decomposition at a point.
struct BetaCalculus {
  PointFrame frame;
  Tensor3 gamma;
  Eigen::MatrixXd b_cov;  // b_{i;j}
  Eigen::MatrixXd r;      // r_ij
  Eigen::MatrixXd s;      // s_ij
  Eigen::VectorXd r_i;    // r_i = b^m r_mi
  Eigen::VectorXd s_i;    // s_i = b^m s_mi
  Eigen::MatrixXd s_up;   // s^i_j = a^{im} s_mj
  double b = 0.0;
};

BetaCalculus beta_derivatives(const MetricSpec& m, const Eigen::VectorXd& x);

struct BetaContractions {
  double r00 = 0.0;
  double r0 = 0.0;
  double s0 = 0.0;
  Eigen::VectorXd r_i0;
  Eigen::VectorXd s_up0;  // s^i_0
};

BetaContractions beta_contractions(const BetaCalculus& bc, const Eigen::VectorXd& y);

/// db/dx^i (finite difference) minus (r_i + s_i) / b.
Eigen::VectorXd beta_norm_gradient_check(const MetricSpec& m, const Eigen::VectorXd& x);

/// max over i,j,k of |d_k a_ij - a_mj gamma^m_ik - a_im gamma^m_jk|.
double metric_compatibility_residual(const MetricSpec& m, const Eigen::VectorXd& x);

/// Largest |T| entry of a dense tensor.
template <int Rank>
double max_abs(const Eigen::Tensor<double, Rank>& t) {
  double out = 0.0;
  for (Eigen::Index k = 0; k < t.size(); ++k) out = std::max(out, std::abs(t.data()[k]));
  return out;
}

}  // namespace finsler
