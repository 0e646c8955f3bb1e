#include "finsler/spray.hpp"

#include <cmath>

#include "finsler/finite_difference.hpp"

namespace finsler {
namespace {

std::vector<int> multi(int n, std::initializer_list<int> idx) {
  std::vector<int> a(n, 0);
  for (int i : idx) ++a[i];
  return a;
}

Eigen::VectorXd quadratic_spray(const Tensor3& gamma, const Eigen::VectorXd& y) {
  const int n = static_cast<int>(y.size());
  Eigen::VectorXd G = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) G(i) += 0.5 * gamma(i, j, k) * y(j) * y(k);
  return G;
}

// Gaussian elimination over jets, pivoting on the constant terms.
std::vector<JetScalar> solve_jets(std::vector<std::vector<JetScalar>> A, std::vector<JetScalar> rhs) {
  const int n = static_cast<int>(rhs.size());
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(A[r][c].value()) > std::abs(A[piv][c].value())) piv = r;
    if (std::abs(A[piv][c].value()) < 1e-14) fail(Errc::singular_g, "fundamental tensor is singular");
    std::swap(A[c], A[piv]);
    std::swap(rhs[c], rhs[piv]);
    const JetScalar inv = reciprocal(A[c][c]);
    for (int r = c + 1; r < n; ++r) {
      const JetScalar factor = A[r][c] * inv;
      for (int k = c; k < n; ++k) A[r][k] -= factor * A[c][k];
      rhs[r] -= factor * rhs[c];
    }
  }
  std::vector<JetScalar> x(rhs);
  for (int r = n - 1; r >= 0; --r) {
    JetScalar acc = rhs[r];
    for (int k = r + 1; k < n; ++k) acc -= A[r][k] * x[k];
    x[r] = acc / A[r][r];
  }
  return x;
}

double sq(double v) { return v * v; }

}  // namespace

Eigen::VectorXd spray_alpha(const MetricSpec& m, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (y.size() != m.dim) fail(Errc::dimension_mismatch, "direction has wrong dimension");
  return quadratic_spray(christoffels(m, x), y);
}

Eigen::VectorXd spray_ab(const MetricSpec& m, const PhiFamily& f, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& y) {
  const BetaCalculus bc = beta_derivatives(m, x);
  const BetaContractions con = beta_contractions(bc, y);
  const double alpha = std::sqrt(y.dot(bc.frame.a * y));
  const double s = bc.frame.b_lower.dot(y) / alpha;
  if (!f.admissible(s)) fail(Errc::domain, "direction is singular for phi");
  const AlphaBetaScalars sc = ab_scalars(f, bc.b, s, m.dim);
  const double lead = con.r00 - 2.0 * sc.Q * alpha * con.s0;
  return quadratic_spray(bc.gamma, y) + alpha * sc.Q * con.s_up0 +
         lead * (sc.Theta * y / alpha + sc.Psi * bc.frame.b_upper);
}

std::vector<JetScalar> spray_jets(const MetricSpec& m, const PhiFamily& f, const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& y, int order) {
  const int n = m.dim;
  if (y.size() != n || x.size() != n) fail(Errc::dimension_mismatch, "point or direction has wrong dimension");
  if (order + 2 > kMaxJetOrder) fail(Errc::domain, "spray jet order too high");
  const JetScalar E = finsler_squared_jet(m, f, x, y, order + 2);
  std::vector<JetScalar> dE;
  dE.reserve(n);
  for (int l = 0; l < n; ++l)
    dE.push_back(base_derivative([&](const Eigen::VectorXd& xs) { return finsler_squared_jet(m, f, xs, y, order + 1); },
                                 x, l));
  const auto yj = direction_jets(y, order);
  std::vector<JetScalar> Ey;
  for (int i = 0; i < n; ++i) Ey.push_back(E.partial(i));
  std::vector<std::vector<JetScalar>> g(n);
  std::vector<JetScalar> rhs;
  for (int l = 0; l < n; ++l) {
    for (int i = 0; i < n; ++i) g[l].push_back(Ey[i].partial(l) * 0.5);
    JetScalar p = dE[l].truncated(order) * -1.0;
    for (int k = 0; k < n; ++k) p += yj[k] * dE[k].partial(l);
    rhs.push_back(p * 0.25);
  }
  return solve_jets(std::move(g), std::move(rhs));
}

Eigen::VectorXd spray_generic(const MetricSpec& m, const PhiFamily& f, const Eigen::VectorXd& x,
                              const Eigen::VectorXd& y) {
  const auto G = spray_jets(m, f, x, y, 0);
  Eigen::VectorXd out(m.dim);
  for (int i = 0; i < m.dim; ++i) out(i) = G[i].value();
  return out;
}

SprayData spray_data(const MetricSpec& m, const PhiFamily& f, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const int n = m.dim;
  const auto G = spray_jets(m, f, x, y, 2);
  SprayData d;
  d.G.resize(n);
  d.N.resize(n, n);
  d.conn = Tensor3(n, n, n);
  for (int i = 0; i < n; ++i) {
    d.G(i) = G[i].value();
    for (int j = 0; j < n; ++j) {
      d.N(i, j) = G[i].derivative(multi(n, {j}));
      for (int k = 0; k < n; ++k) d.conn(i, j, k) = G[i].derivative(multi(n, {j, k}));
    }
  }
  d.G_alpha = spray_alpha(m, x, y);
  return d;
}

namespace {

Tensor4 third_derivatives(const std::vector<JetScalar>& P, int n) {
  Tensor4 T(n, n, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) T(i, j, k, l) = P[i].derivative(multi(n, {j, k, l}));
  return T;
}

Eigen::MatrixXd mean_berwald(const Tensor4& B, int n) {
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int m = 0; m < n; ++m) E(i, j) += 0.5 * B(m, m, i, j);
  return E;
}

Tensor4 douglas_from(const std::vector<JetScalar>& G, const Eigen::VectorXd& y, int n) {
  const int order = G[0].max_order();
  const auto yj = direction_jets(y, order - 1);
  JetScalar div = G[0].partial(0);
  for (int m = 1; m < n; ++m) div += G[m].partial(m);
  std::vector<JetScalar> P;
  for (int i = 0; i < n; ++i) P.push_back(G[i].truncated(order - 1) - (1.0 / (n + 1)) * div * yj[i]);
  return third_derivatives(P, n);
}

Eigen::MatrixXd mean_berwald_at(const MetricSpec& m, const PhiFamily& f, const Eigen::VectorXd& x,
                                const Eigen::VectorXd& y) {
  const auto G = spray_jets(m, f, x, y, 3);
  return mean_berwald(third_derivatives(G, m.dim), m.dim);
}

}  // namespace

BerwaldData berwald(const MetricSpec& m, const PhiFamily& f, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const auto G = spray_jets(m, f, x, y, 3);
  BerwaldData d;
  d.B = third_derivatives(G, m.dim);
  d.E = mean_berwald(d.B, m.dim);
  return d;
}

Tensor3 landsberg(const FundamentalData& fd, const Tensor4& B) {
  const int n = static_cast<int>(fd.y.size());
  Tensor3 L(n, n, n);
  L.setZero();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) L(j, k, l) += -0.5 * fd.y_lower(i) * B(i, j, k, l);
  return L;
}

Tensor4 douglas(const MetricSpec& m, const PhiFamily& f, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  return douglas_from(spray_jets(m, f, x, y, 4), y, m.dim);
}

namespace {

Eigen::MatrixXd riemann_tensor(const MetricSpec& m, const PhiFamily& f, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& y, const std::vector<JetScalar>& G) {
  const int n = m.dim;
  std::vector<std::vector<JetScalar>> Gx;
  for (int k = 0; k < n; ++k)
    Gx.push_back(base_derivative([&](const Eigen::VectorXd& xs) { return spray_jets(m, f, xs, y, 1); }, x, k));
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      double r = 2.0 * Gx[k][i].value();
      for (int j = 0; j < n; ++j) {
        r -= y(j) * Gx[j][i].derivative(multi(n, {k}));
        r += 2.0 * G[j].value() * G[i].derivative(multi(n, {j, k}));
        r -= G[i].derivative(multi(n, {j})) * G[j].derivative(multi(n, {k}));
      }
      R(i, k) = r;
    }
  return R;
}

double flag_from(const FundamentalData& fd, const Eigen::MatrixXd& R, const Eigen::VectorXd& u) {
  const Eigen::VectorXd& y = fd.y;
  const double den = y.dot(fd.g * y) * u.dot(fd.g * u) - sq(y.dot(fd.g * u));
  if (!(den >= 1e-12)) fail(Errc::degenerate_flag, "flag plane is degenerate");
  return u.dot(fd.g * (R * u)) / den;
}

}  // namespace

FlagData riemann_flag(const MetricSpec& m, const PhiFamily& f, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                      const Eigen::VectorXd& u) {
  if (u.size() != m.dim) fail(Errc::dimension_mismatch, "transverse vector has wrong dimension");
  FlagData out;
  out.R = riemann_tensor(m, f, x, y, spray_jets(m, f, x, y, 2));
  out.K = flag_from(fundamental(m, f, x, y), out.R, u);
  return out;
}

Eigen::VectorXd log_sigma_gradient(const MetricSpec& m, const PhiFamily& f, const Eigen::VectorXd& x,
                                   bool* approximate) {
  bool approx = false;
  auto field = [&](const Eigen::VectorXd& xs) {
    const SigmaResult r = sigma_bh(m, f, xs);
    approx = approx || r.approximate;
    return std::log(r.sigma);
  };
  Eigen::VectorXd g = base_gradient(field, x);
  if (approximate) *approximate = approx;
  return g;
}

double s_curvature_def(const MetricSpec& m, const PhiFamily& f, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                       const std::optional<Eigen::VectorXd>& log_sigma_grad) {
  const Eigen::VectorXd grad = log_sigma_grad ? *log_sigma_grad : log_sigma_gradient(m, f, x);
  const auto G = spray_jets(m, f, x, y, 1);
  double div = 0.0;
  for (int i = 0; i < m.dim; ++i) div += G[i].derivative(multi(m.dim, {i}));
  return div - y.dot(grad);
}

SFormulaTerms s_curvature_formula(const MetricSpec& m, const PhiFamily& f, const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& y, VolumeForm form) {
  const int n = m.dim;
  const BetaCalculus bc = beta_derivatives(m, x);
  const BetaContractions con = beta_contractions(bc, y);
  const double alpha = std::sqrt(y.dot(bc.frame.a * y));
  const double s = bc.frame.b_lower.dot(y) / alpha;
  if (!f.admissible(s)) fail(Errc::domain, "direction is singular for phi");
  const AlphaBetaScalars sc = ab_scalars(f, bc.b, s, n);
  const double b = bc.b;
  const double h = 1e-4;
  auto density = [&](double bb) { return volume_density(f, bb, n, form); };
  SFormulaTerms t;
  t.f_b = density(b);
  double ratio;  // f'(b) / (b f(b))
  if (b > 1e-6) {
    t.df_b = (density(b + h) - density(b - h)) / (2.0 * h);
    ratio = t.df_b / (b * t.f_b);
  } else {
    const double second = (density(h) - 2.0 * density(0.0) + density(-h)) / (h * h);
    t.df_b = second * b;
    ratio = second / t.f_b;
  }
  const double r0 = bc.r_i.dot(y);
  const double s0 = con.s0;
  t.S = (2.0 * sc.Psi - ratio) * (r0 + s0) -
        sc.Phi / (2.0 * alpha * sq(sc.Delta)) * (con.r00 - 2.0 * alpha * sc.Q * s0);
  return t;
}

namespace {

Eigen::MatrixXd h_from(const MetricSpec& m, const PhiFamily& f, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                       const std::vector<JetScalar>& G4) {
  const int n = m.dim;
  // E_ij as order-1 y-jets from the order-4 spray
  std::vector<std::vector<JetScalar>> Ej(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      JetScalar e = JetScalar::constant_like(G4[0].truncated(1), 0.0);
      for (int mm = 0; mm < n; ++mm) {
        JetScalar t = G4[mm].partial(mm).partial(i).partial(j);
        e += t * 0.5;
      }
      Ej[i].push_back(e);
    }
  std::vector<Eigen::MatrixXd> Ex;
  for (int k = 0; k < n; ++k)
    Ex.push_back(base_derivative([&](const Eigen::VectorXd& xs) { return mean_berwald_at(m, f, xs, y); }, x, k));
  Eigen::MatrixXd N(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) N(i, j) = G4[i].derivative(multi(n, {j}));
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double v = 0.0;
      for (int k = 0; k < n; ++k) {
        v += y(k) * Ex[k](i, j);
        v -= 2.0 * G4[k].value() * Ej[i][j].derivative(multi(n, {k}));
        v -= Ej[k][j].value() * N(k, i);
        v -= Ej[i][k].value() * N(k, j);
      }
      H(i, j) = v;
    }
  return H;
}

}  // namespace

Eigen::MatrixXd h_curvature(const MetricSpec& m, const PhiFamily& f, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& y) {
  return h_from(m, f, x, y, spray_jets(m, f, x, y, 4));
}

double berwald_2d_identity(const FundamentalData& fd, const Tensor4& B, const Eigen::MatrixXd& E, const Tensor3& L) {
  const int n = static_cast<int>(fd.y.size());
  if (n != 2) fail(Errc::dimension_mismatch, "the Berwald decomposition holds in dimension 2");
  const double F2 = fd.F * fd.F;
  Eigen::MatrixXd hm(n, n);  // h^i_l
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l) hm(i, l) = (i == l ? 1.0 : 0.0) - fd.y(i) * fd.y_lower(l) / F2;
  double res = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double rhs = -2.0 / F2 * L(j, k, l) * fd.y(i) +
                             2.0 / 3.0 * (E(j, k) * hm(i, l) + E(k, l) * hm(i, j) + E(j, l) * hm(i, k));
          res = std::max(res, std::abs(B(i, j, k, l) - rhs));
        }
  return res;
}

double douglas_2d_identity(const Tensor4& D, const Tensor4& B, const Eigen::MatrixXd& E, const Tensor3& dE,
                           const Eigen::VectorXd& y) {
  const int n = static_cast<int>(y.size());
  if (n != 2) fail(Errc::dimension_mismatch, "the Douglas decomposition holds in dimension 2");
  const double c = 2.0 / (n + 1);
  auto delta = [](int a, int b) { return a == b ? 1.0 : 0.0; };
  double res = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double rhs = B(i, j, k, l) - c * (E(j, k) * delta(i, l) + E(k, l) * delta(i, j) +
                                                  E(l, j) * delta(i, k) + dE(j, k, l) * y(i));
          res = std::max(res, std::abs(D(i, j, k, l) - rhs));
        }
  return res;
}

CurvatureBundle curvature_bundle(const MetricSpec& m, const PhiFamily& f, const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& y, const BundleOptions& opts) {
  const int n = m.dim;
  CurvatureBundle cb;
  cb.fd = fundamental(m, f, x, y);
  const auto G = spray_jets(m, f, x, y, 4);
  cb.spray.G.resize(n);
  cb.spray.N.resize(n, n);
  cb.spray.conn = Tensor3(n, n, n);
  for (int i = 0; i < n; ++i) {
    cb.spray.G(i) = G[i].value();
    for (int j = 0; j < n; ++j) {
      cb.spray.N(i, j) = G[i].derivative(multi(n, {j}));
      for (int k = 0; k < n; ++k) cb.spray.conn(i, j, k) = G[i].derivative(multi(n, {j, k}));
    }
  }
  cb.spray.G_alpha = spray_alpha(m, x, y);
  cb.B = third_derivatives(G, n);
  cb.E = mean_berwald(cb.B, n);
  cb.dE = Tensor3(n, n, n);
  cb.dE.setZero();
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l)
        for (int mm = 0; mm < n; ++mm) cb.dE(j, k, l) += 0.5 * G[mm].derivative(multi(n, {mm, j, k, l}));
  cb.L = landsberg(cb.fd, cb.B);
  cb.D = douglas_from(G, y, n);
  if (opts.with_flag) {
    cb.R = riemann_tensor(m, f, x, y, G);
    if (n == 2) {
      Eigen::VectorXd u(2);
      u << -y(1), y(0);
      cb.K = flag_from(cb.fd, cb.R, u);
    }
  }
  double div = 0.0;
  for (int i = 0; i < n; ++i) div += G[i].derivative(multi(n, {i}));
  const Eigen::VectorXd grad = opts.log_sigma_grad ? *opts.log_sigma_grad : log_sigma_gradient(m, f, x);
  cb.S = div - y.dot(grad);
  if (opts.with_s_formula) cb.S_formula = s_curvature_formula(m, f, x, y, opts.volume_form);
  if (opts.with_h) cb.H = h_from(m, f, x, y, G);
  return cb;
}

}  // namespace finsler
