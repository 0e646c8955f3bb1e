#include "finsler/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "finsler/expr.hpp"
#include "finsler/finsler_metric.hpp"

namespace finsler {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

ChartDomain box(int n, double lo, double hi) {
  ChartDomain d;
  d.lower = VectorXd::Constant(n, lo);
  d.upper = VectorXd::Constant(n, hi);
  return d;
}

double param(const ParamMap& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

void allow_only(const ParamMap& p, std::initializer_list<const char*> keys, const std::string& entry) {
  for (const auto& [k, v] : p) {
    bool ok = false;
    for (const char* key : keys) ok = ok || k == key;
    if (!ok) fail(Errc::param_out_of_range, "unknown parameter '" + k + "' for " + entry);
    if (!std::isfinite(v)) fail(Errc::param_out_of_range, "parameter '" + k + "' is not finite");
  }
}

// Rotation-like matrix of the projective chart on S^3.
MatrixXd chart_matrix(const VectorXd& X) {
  const double x = X(0), y = X(1), z = X(2);
  MatrixXd M(3, 3);
  M << 1, -z, y,
       z, 1, -x,
       -y, x, 1;
  return M;
}

CatalogEntry make_entry(std::string name, std::string description, ParamMap params, MetricSpec m, PhiFamily phi) {
  m.name = name;
  return CatalogEntry{std::move(name), std::move(description), std::move(params), std::move(m), std::move(phi)};
}

}  // namespace

std::vector<std::string> catalog_names() {
  return {"euclid", "euclid_randers", "lie_group", "fish_tank", "mw", "sphere_randers", "bao_shen",
          "proj_sphere_killing"};
}

CatalogEntry get_metric(const std::string& raw_name, const ParamMap& params) {
  const std::string name = lower(raw_name);
  MetricSpec m;
  if (name == "euclid") {
    allow_only(params, {}, name);
    m.dim = 2;
    m.a = [](const VectorXd&) { return MatrixXd::Identity(2, 2); };
    m.b_form = [](const VectorXd&) { return VectorXd::Zero(2); };
    m.domain = box(2, -5.0, 5.0);
    return make_entry(name, "Euclidean plane, beta = 0", params, m, PhiFamily::randers());
  }
  if (name == "euclid_randers") {
    allow_only(params, {"eps"}, name);
    const double eps = param(params, "eps", 0.5);
    if (!(std::abs(eps) < 1.0)) fail(Errc::param_out_of_range, "euclid_randers needs |eps| < 1");
    m.dim = 2;
    m.a = [](const VectorXd&) { return MatrixXd::Identity(2, 2); };
    m.b_form = [eps](const VectorXd&) { return VectorXd{{eps, 0.0}}; };
    m.domain = box(2, -5.0, 5.0);
    return make_entry(name, "Minkowski Randers metric |y| + eps y^1", {{"eps", eps}}, m, PhiFamily::randers());
  }
  if (name == "lie_group") {
    allow_only(params, {}, name);
    m.dim = 2;
    m.a = [](const VectorXd& X) {
      const double w = 1.0 / (X(1) * X(1));
      return MatrixXd{{2.0 * w, w}, {w, 2.0 * w}};
    };
    m.b_form = [](const VectorXd& X) { return VectorXd{{1.0 / X(1), 1.0 / X(1)}}; };
    m.domain.lower = VectorXd{{-3.0, 0.2}};
    m.domain.upper = VectorXd{{3.0, 5.0}};
    return make_entry(name, "left-invariant Randers metric on the affine group of the line", params, m,
                      PhiFamily::randers());
  }
  if (name == "fish_tank") {
    allow_only(params, {}, name);
    m.dim = 2;
    m.a = [](const VectorXd& X) {
      const double x = X(0), y = X(1);
      const double lam = 1.0 - x * x - y * y;
      const double l2 = lam * lam;
      return MatrixXd{{(1.0 - x * x) / l2, -x * y / l2}, {-x * y / l2, (1.0 - y * y) / l2}};
    };
    m.b_form = [](const VectorXd& X) {
      const double lam = 1.0 - X.squaredNorm();
      return VectorXd{{X(1) / lam, -X(0) / lam}};
    };
    m.domain = box(2, -0.95, 0.95);
    m.domain.predicate = [](const VectorXd& X) { return X.squaredNorm() < 0.95 * 0.95; };
    return make_entry(name, "Randers metric of navigation on the Euclidean disc under rotational wind", params, m,
                      PhiFamily::randers());
  }
  if (name == "mw") {
    allow_only(params, {"k"}, name);
    const double k = param(params, "k", 1.0);
    m.dim = 2;
    m.a = [](const VectorXd& X) { return MatrixXd{{1.0, 0.0}, {0.0, std::exp(2.0 * X(0))}}; };
    m.b_form = [](const VectorXd&) { return VectorXd{{1.0, 0.0}}; };
    m.domain = box(2, -1.0, 1.0);
    return make_entry(name, "alpha = sqrt(u^2 + e^{2 x1} v^2), beta = u, phi = sqrt(1 + k s^2)", {{"k", k}}, m,
                      PhiFamily::riemann_sqrt(k));
  }
  if (name == "sphere_randers") {
    allow_only(params, {"eps"}, name);
    const double eps = param(params, "eps", 0.5);
    if (!(std::abs(eps) < 1.0)) fail(Errc::param_out_of_range, "sphere_randers needs |eps| < 1");
    m.dim = 2;
    m.a = [eps](const VectorXd& X) {
      const double r2 = X(0) * X(0);
      const double D = 1.0 + (1.0 - eps * eps) * r2;
      return MatrixXd{{1.0 / ((1.0 + r2) * D), 0.0}, {0.0, r2 * (1.0 + r2) / (D * D)}};
    };
    m.b_form = [eps](const VectorXd& X) {
      const double r2 = X(0) * X(0);
      return VectorXd{{0.0, -eps * r2 / (1.0 + (1.0 - eps * eps) * r2)}};
    };
    m.domain.lower = VectorXd{{0.1, 0.0}};
    m.domain.upper = VectorXd{{3.0, 2.0 * std::acos(-1.0)}};
    return make_entry(name, "Randers metric on the sphere in polar coordinates (r, theta)", {{"eps", eps}}, m,
                      PhiFamily::randers());
  }
  if (name == "bao_shen") {
    allow_only(params, {"K", "sign"}, name);
    const double K = param(params, "K", 2.0);
    const double sign = param(params, "sign", 1.0);
    if (!(K > 1.0)) fail(Errc::param_out_of_range, "bao_shen needs K > 1");
    if (sign != 1.0 && sign != -1.0) fail(Errc::param_out_of_range, "bao_shen sign must be +1 or -1");
    m.dim = 3;
    m.a = [K](const VectorXd& X) {
      const MatrixXd M = chart_matrix(X);
      const double D = 1.0 + X.squaredNorm();
      const Eigen::Vector3d w(K, 1.0, 1.0);
      return MatrixXd(M.transpose() * w.asDiagonal() * M / (D * D));
    };
    m.b_form = [K, sign](const VectorXd& X) {
      const MatrixXd M = chart_matrix(X);
      const double D = 1.0 + X.squaredNorm();
      return VectorXd(sign * std::sqrt(K - 1.0) * M.row(0).transpose() / D);
    };
    m.domain = box(3, -2.0, 2.0);
    return make_entry(name, "homogeneous Randers metric on S^3 in a projective chart", {{"K", K}, {"sign", sign}}, m,
                      PhiFamily::randers());
  }
  if (name == "proj_sphere_killing") {
    allow_only(params, {"kappa"}, name);
    const double kappa = param(params, "kappa", 0.5);
    if (!(kappa > 0.0 && kappa < 1.0)) fail(Errc::param_out_of_range, "proj_sphere_killing needs 0 < kappa < 1");
    m.dim = 3;
    m.a = [](const VectorXd& X) {
      const MatrixXd M = chart_matrix(X);
      const double D = 1.0 + X.squaredNorm();
      return MatrixXd(M.transpose() * M / (D * D));
    };
    m.b_form = [kappa](const VectorXd& X) {
      const double D = 1.0 + X.squaredNorm();
      return VectorXd(kappa * Eigen::Vector3d(X(2), 1.0, -X(0)) / D);
    };
    m.domain = box(3, -2.0, 2.0);
    return make_entry(name, "Killing one-form of constant length on the projective round S^3", {{"kappa", kappa}}, m,
                      PhiFamily::randers());
  }
  fail(Errc::unknown_name, "no catalog metric named '" + raw_name + "'");
}

MetricSpec custom_metric(const std::string& name, int dim, const std::vector<std::string>& a,
                         const std::vector<std::string>& b, const ParamMap& params, ChartDomain domain) {
  if (dim < 2 || dim > 3) fail(Errc::dimension_mismatch, "custom metrics support n = 2 or 3");
  if (static_cast<int>(a.size()) != dim * dim) fail(Errc::dimension_mismatch, "a needs n*n entries");
  if (static_cast<int>(b.size()) != dim) fail(Errc::dimension_mismatch, "b needs n entries");
  std::set<std::string> vars;
  for (int i = 1; i <= dim; ++i) vars.insert("x" + std::to_string(i));
  for (int i = 1; i <= 9; ++i) vars.insert("p" + std::to_string(i));
  auto compile = [&](const std::vector<std::string>& src) {
    std::vector<Expr> out;
    for (const auto& s : src) {
      out.push_back(parse(s, vars));
      for (const auto& v : out.back().variables())
        if (v[0] == 'p' && !params.contains(v)) fail(Errc::unbound_variable, "parameter " + v + " has no value");
    }
    return out;
  };
  auto ae = std::make_shared<std::vector<Expr>>(compile(a));
  auto be = std::make_shared<std::vector<Expr>>(compile(b));
  auto bind = [dim, params](const VectorXd& X) {
    Bindings<double> bnd(params.begin(), params.end());
    for (int i = 0; i < dim; ++i) bnd["x" + std::to_string(i + 1)] = X(i);
    return bnd;
  };
  MetricSpec m;
  m.name = name;
  m.dim = dim;
  m.a = [ae, dim, bind](const VectorXd& X) {
    const auto bnd = bind(X);
    MatrixXd A(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) A(i, j) = eval_expr((*ae)[i * dim + j], bnd);
    return MatrixXd(0.5 * (A + A.transpose()));
  };
  m.b_form = [be, dim, bind](const VectorXd& X) {
    const auto bnd = bind(X);
    VectorXd B(dim);
    for (int i = 0; i < dim; ++i) B(i) = eval_expr((*be)[i], bnd);
    return B;
  };
  m.domain = std::move(domain);
  return m;
}

RandersData zermelo_to_randers(const ZermeloData& z, const Eigen::VectorXd& x) {
  const MatrixXd h = z.h(x);
  const VectorXd W = z.W(x);
  const VectorXd Wl = h * W;
  const double lam = 1.0 - W.dot(Wl);
  if (!(lam > 0.0)) fail(Errc::fast_wind, "wind is not slower than the sea metric: |W|_h >= 1");
  return RandersData{(lam * h + Wl * Wl.transpose()) / (lam * lam), -Wl / lam};
}

MetricSpec zermelo_metric(const ZermeloData& z, const std::string& name, ChartDomain domain) {
  MetricSpec m;
  m.name = name;
  m.dim = z.dim;
  m.a = [z](const VectorXd& x) { return zermelo_to_randers(z, x).a; };
  m.b_form = [z](const VectorXd& x) { return zermelo_to_randers(z, x).b; };
  m.domain = std::move(domain);
  return m;
}

double navigation_residual(const ZermeloData& z, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const RandersData rd = zermelo_to_randers(z, x);
  const double F = std::sqrt(y.dot(rd.a * y)) + rd.b.dot(y);
  const VectorXd v = y / F - z.W(x);
  return v.dot(z.h(x) * v) - 1.0;
}

}  // namespace finsler
