#include "finsler/geometry.hpp"

#include <cmath>

#include "finsler/errors.hpp"
#include "finsler/finite_difference.hpp"

namespace finsler {

bool ChartDomain::contains(const Eigen::VectorXd& x) const {
  if (x.size() != lower.size()) return false;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (x[i] < lower[i] || x[i] > upper[i]) return false;
  return !predicate || predicate(x);
}

ChartDomain ChartDomain::shrunk(double margin) const {
  ChartDomain d = *this;
  d.lower.array() += margin;
  d.upper.array() -= margin;
  return d;
}

PointFrame point_frame(const MetricSpec& m, const Eigen::VectorXd& x) {
  if (x.size() != m.dim) fail(Errc::dimension_mismatch, "chart point has wrong dimension");
  PointFrame f;
  f.a = m.a(x);
  f.b_lower = m.b_form(x);
  if (f.a.rows() != m.dim || f.a.cols() != m.dim || f.b_lower.size() != m.dim)
    fail(Errc::dimension_mismatch, "metric evaluator returned wrong shape");
  if (!f.a.allFinite() || !f.b_lower.allFinite()) fail(Errc::evaluation, "non-finite metric data");
  Eigen::LLT<Eigen::MatrixXd> llt(f.a);
  if (llt.info() != Eigen::Success) fail(Errc::singular_metric, "a_ij is not positive definite at this point");
  f.a_inv = llt.solve(Eigen::MatrixXd::Identity(m.dim, m.dim));
  f.b_upper = f.a_inv * f.b_lower;
  f.b_norm = std::sqrt(std::max(0.0, f.b_lower.dot(f.b_upper)));
  return f;
}

namespace {

Tensor3 christoffels_with(const MetricSpec& m, const Eigen::VectorXd& x, const Eigen::MatrixXd& a_inv) {
  const int n = m.dim;
  std::vector<Eigen::MatrixXd> da(n);  // da[k](i, j) = d_k a_ij
  for (int k = 0; k < n; ++k) da[k] = base_derivative(m.a, x, k);
  Tensor3 gamma(n, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) {
        double v = 0.0;
        for (int l = 0; l < n; ++l) v += a_inv(i, l) * (da[j](l, k) + da[k](l, j) - da[l](j, k));
        gamma(i, j, k) = 0.5 * v;
        gamma(i, k, j) = 0.5 * v;
      }
  return gamma;
}

}  // namespace

Tensor3 christoffels(const MetricSpec& m, const Eigen::VectorXd& x) {
  return christoffels_with(m, x, point_frame(m, x).a_inv);
}

BetaCalculus beta_derivatives(const MetricSpec& m, const Eigen::VectorXd& x) {
  const int n = m.dim;
  BetaCalculus bc;
  bc.frame = point_frame(m, x);
  bc.gamma = christoffels_with(m, x, bc.frame.a_inv);
  bc.b_cov.resize(n, n);
  for (int j = 0; j < n; ++j) {
    const Eigen::VectorXd db = base_derivative(m.b_form, x, j);
    for (int i = 0; i < n; ++i) {
      double v = db[i];
      for (int k = 0; k < n; ++k) v -= bc.frame.b_lower[k] * bc.gamma(k, i, j);
      bc.b_cov(i, j) = v;
    }
  }
  bc.r = 0.5 * (bc.b_cov + bc.b_cov.transpose());
  bc.s = 0.5 * (bc.b_cov - bc.b_cov.transpose());
  bc.r_i = bc.r.transpose() * bc.frame.b_upper;
  bc.s_i = bc.s.transpose() * bc.frame.b_upper;
  bc.s_up = bc.frame.a_inv * bc.s;
  bc.b = bc.frame.b_norm;
  return bc;
}

BetaContractions beta_contractions(const BetaCalculus& bc, const Eigen::VectorXd& y) {
  if (y.size() != bc.r.rows()) fail(Errc::dimension_mismatch, "direction has wrong dimension");
  if (y.norm() == 0.0) fail(Errc::zero_vector, "direction must be nonzero");
  BetaContractions c;
  c.r_i0 = bc.r * y;
  c.r00 = y.dot(c.r_i0);
  c.r0 = bc.r_i.dot(y);
  c.s0 = bc.s_i.dot(y);
  c.s_up0 = bc.s_up * y;
  return c;
}

Eigen::VectorXd beta_norm_gradient_check(const MetricSpec& m, const Eigen::VectorXd& x) {
  const BetaCalculus bc = beta_derivatives(m, x);
  if (bc.b <= 1e-12) fail(Errc::zero_norm, "||beta||_alpha vanishes at this point");
  auto norm = [&](const Eigen::VectorXd& xs) { return point_frame(m, xs).b_norm; };
  return base_gradient(norm, x) - (bc.r_i + bc.s_i) / bc.b;
}

double metric_compatibility_residual(const MetricSpec& m, const Eigen::VectorXd& x) {
  const int n = m.dim;
  const Eigen::MatrixXd a = m.a(x);
  const Tensor3 gamma = christoffels(m, x);
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    const Eigen::MatrixXd da = base_derivative(m.a, x, k);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double v = da(i, j);
        for (int l = 0; l < n; ++l) v -= a(l, j) * gamma(l, i, k) + a(i, l) * gamma(l, j, k);
        worst = std::max(worst, std::abs(v));
      }
  }
  return worst;
}

}  // namespace finsler
