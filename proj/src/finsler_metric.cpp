#include "finsler/finsler_metric.hpp"

#include <cmath>

#include "finsler/quadrature.hpp"

namespace finsler {
namespace {

constexpr double kPi = 3.14159265358979323846;

// Radial extent 1/F of the indicatrix in direction u, with the unicorn
// singular cone counted as unusable.
bool radius(const PointFrame& pf, const PhiFamily& f, const Eigen::VectorXd& u, double& r) {
  const double alpha = std::sqrt(u.dot(pf.a * u));
  const double s = pf.b_lower.dot(u) / alpha;
  if (f.variant() == PhiFamily::Variant::unicorn && std::abs(s) > f.regular_bound()) return false;
  try {
    const double phi = f.value(s);
    if (!(phi > 0.0) || !std::isfinite(phi)) return false;
    r = 1.0 / (alpha * phi);
    return true;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

std::vector<JetScalar> direction_jets(const Eigen::VectorXd& y, int order) {
  const int n = static_cast<int>(y.size());
  std::vector<JetScalar> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(JetScalar::variable(i, y(i), n, order));
  return out;
}

JetScalar finsler_squared_jet(const MetricSpec& m, const PhiFamily& f, const Eigen::VectorXd& x,
                              const Eigen::VectorXd& y, int order) {
  const PointFrame pf = point_frame(m, x);
  const auto yj = direction_jets(y, order);
  return finsler_squared<JetScalar>(pf, f, yj);
}

double finsler_eval(const MetricSpec& m, const PhiFamily& f, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const PointFrame pf = point_frame(m, x);
  if (y.size() != m.dim) fail(Errc::dimension_mismatch, "direction has wrong dimension");
  const double alpha2 = y.dot(pf.a * y);
  if (!(alpha2 > 1e-300)) fail(Errc::zero_vector, "alpha(y) = 0");
  const double alpha = std::sqrt(alpha2);
  const double phi = f.value(pf.b_lower.dot(y) / alpha);
  if (!(phi > 0.0)) fail(Errc::non_positive_phi, "phi(s) <= 0");
  return alpha * phi;
}

FundamentalData fundamental(const MetricSpec& m, const PhiFamily& f, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& y) {
  const int n = m.dim;
  const JetScalar E = finsler_squared_jet(m, f, x, y, 3);
  FundamentalData d;
  d.y = y;
  d.F = std::sqrt(E.value());
  d.g.resize(n, n);
  d.C = Tensor3(n, n, n);
  std::vector<int> alpha(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      ++alpha[i];
      ++alpha[j];
      d.g(i, j) = 0.5 * E.derivative(alpha);
      for (int k = 0; k < n; ++k) {
        ++alpha[k];
        d.C(i, j, k) = 0.25 * E.derivative(alpha);
        --alpha[k];
      }
      --alpha[i];
      --alpha[j];
    }
  Eigen::LLT<Eigen::MatrixXd> llt(d.g);
  if (llt.info() != Eigen::Success) fail(Errc::singular_g, "fundamental tensor is not positive definite");
  d.g_inv = llt.solve(Eigen::MatrixXd::Identity(n, n));
  d.I = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) d.I(i) += d.g_inv(j, k) * d.C(i, j, k);
  d.y_lower = d.g * y;
  d.ell = y / d.F;
  d.h = d.g - d.y_lower * d.y_lower.transpose() / (d.F * d.F);
  return d;
}

SigmaResult sigma_bh(const MetricSpec& m, const PhiFamily& f, const Eigen::VectorXd& x, const SigmaOptions& opts) {
  const PointFrame pf = point_frame(m, x);
  SigmaResult out;
  auto node = [&](auto dir_at, double t, double half) {
    double r = 0.0;
    if (radius(pf, f, dir_at(t), r)) return r;
    ++out.shifted_nodes;
    out.approximate = true;
    for (double shift : {half, -half})
      if (radius(pf, f, dir_at(t + shift), r)) return r;
    fail(Errc::singular_direction_in_quadrature, "indicatrix is singular at a quadrature node");
  };
  if (m.dim == 2) {
    const int N = opts.planar_nodes + (opts.planar_nodes % 2);
    const double h = 2.0 * kPi / N;
    auto dir = [](double t) {
      Eigen::VectorXd u(2);
      u << std::cos(t), std::sin(t);
      return u;
    };
    // periodic composite Simpson: the endpoint weights merge
    double area = 0.0;
    for (int k = 0; k < N; ++k) {
      const double r = node(dir, k * h, 0.5 * h);
      area += (k % 2 == 0 ? 2.0 : 4.0) * 0.5 * r * r;
    }
    area *= h / 3.0;
    out.sigma = kPi / area;
  } else if (m.dim == 3) {
    const auto& gl = gauss_legendre(opts.polar_nodes);
    const int M = opts.azimuth_nodes;
    const double h = 2.0 * kPi / M;
    double vol = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      const double z = gl.nodes[i];
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      auto dir = [&](double t) {
        Eigen::VectorXd u(3);
        u << rho * std::cos(t), rho * std::sin(t), z;
        return u;
      };
      double ring = 0.0;
      for (int j = 0; j < M; ++j) {
        const double r = node(dir, j * h, 0.5 * h);
        ring += r * r * r / 3.0;
      }
      vol += gl.weights[i] * ring * h;
    }
    out.sigma = 4.0 * kPi / 3.0 / vol;
  } else {
    fail(Errc::dimension_mismatch, "sigma_bh supports n = 2 or 3");
  }
  return out;
}

}  // namespace finsler
