#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "finsler/geometry.hpp"
#include "finsler/jet.hpp"
#include "finsler/phi.hpp"

namespace finsler {

/// F^2 = alpha^2 phi(beta/alpha)^2 at a point frame, for double or jet directions.
template <class Scalar>
Scalar finsler_squared(const PointFrame& pf, const PhiFamily& f, std::span<const Scalar> y) {
  const int n = static_cast<int>(pf.a.rows());
  if (static_cast<int>(y.size()) != n) fail(Errc::dimension_mismatch, "direction has wrong dimension");
  Scalar alpha2 = y[0] * 0.0;
  Scalar beta = y[0] * 0.0;
  for (int i = 0; i < n; ++i) {
    beta += y[i] * pf.b_lower(i);
    for (int j = 0; j < n; ++j) alpha2 += y[i] * y[j] * pf.a(i, j);
  }
  double a2;
  if constexpr (std::is_same_v<Scalar, double>) a2 = alpha2;
  else a2 = alpha2.value();
  if (!(a2 > 1e-300)) fail(Errc::zero_vector, "alpha(y) = 0");
  using std::sqrt;
  const Scalar alpha = sqrt(alpha2);
  const Scalar phi = phi_apply(f, beta / alpha);
  double p0;
  if constexpr (std::is_same_v<Scalar, double>) p0 = phi;
  else p0 = phi.value();
  if (!(p0 > 0.0)) fail(Errc::non_positive_phi, "phi(s) <= 0");
  return alpha2 * phi * phi;
}

std::vector<JetScalar> direction_jets(const Eigen::VectorXd& y, int order);

/// y-jet of F^2 at (x, y).
JetScalar finsler_squared_jet(const MetricSpec& m, const PhiFamily& f, const Eigen::VectorXd& x,
                              const Eigen::VectorXd& y, int order);

double finsler_eval(const MetricSpec& m, const PhiFamily& f, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

struct FundamentalData {
  double F = 0.0;
  Eigen::MatrixXd g;
  Eigen::MatrixXd g_inv;
  Tensor3 C;  // C_ijk
  Eigen::VectorXd I;
  Eigen::VectorXd y_lower;
  Eigen::VectorXd ell;
  Eigen::MatrixXd h;
  Eigen::VectorXd y;
};

FundamentalData fundamental(const MetricSpec& m, const PhiFamily& f, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& y);

struct SigmaOptions {
  int planar_nodes = 2048;
  int polar_nodes = 128;
  int azimuth_nodes = 256;
};

struct SigmaResult {
  double sigma = 0.0;
  bool approximate = false;
  int shifted_nodes = 0;
};

/// Busemann-Hausdorff density Vol(B^n) / Vol{y : F(x, y) < 1}, n = 2 or 3.
SigmaResult sigma_bh(const MetricSpec& m, const PhiFamily& f, const Eigen::VectorXd& x,
                     const SigmaOptions& opts = {});

}  // namespace finsler
