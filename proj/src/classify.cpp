#include "finsler/classify.hpp"

#include <cmath>
#include <limits>

#include "finsler/finsler_metric.hpp"
#include "finsler/spray.hpp"

namespace finsler {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::riemannian_isotropic: return "RiemannianIsotropic";
    case Verdict::locally_minkowski_like: return "LocallyMinkowskiLike";
    case Verdict::unicorn_case: return "UnicornCase";
    case Verdict::not_generalized_berwald: return "NotGeneralizedBerwald";
    case Verdict::s_nonzero: return "SNonzero";
    case Verdict::inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

std::vector<Eigen::VectorXd> make_grid(const ChartDomain& domain, const std::vector<int>& counts, double margin) {
  const int n = static_cast<int>(domain.lower.size());
  if (static_cast<int>(counts.size()) != n) fail(Errc::dimension_mismatch, "grid needs one count per axis");
  const ChartDomain inner = domain.shrunk(margin);
  std::vector<Eigen::VectorXd> out;
  std::vector<int> idx(n, 0);
  for (int c : counts)
    if (c < 1) fail(Errc::empty_grid, "grid counts must be positive");
  while (true) {
    Eigen::VectorXd x(n);
    for (int a = 0; a < n; ++a) {
      const double lo = inner.lower(a), hi = inner.upper(a);
      x(a) = counts[a] == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * idx[a] / (counts[a] - 1);
    }
    if (inner.contains(x)) out.push_back(x);
    int a = n - 1;
    while (a >= 0 && ++idx[a] == counts[a]) idx[a--] = 0;
    if (a < 0) break;
  }
  if (out.empty()) fail(Errc::empty_grid, "no grid point lies inside the chart domain");
  return out;
}

std::vector<Eigen::VectorXd> make_directions(int n, int count) {
  if (count < 1) fail(Errc::domain, "direction count must be positive");
  std::vector<Eigen::VectorXd> out;
  const double pi = std::acos(-1.0);
  if (n == 2) {
    for (int k = 0; k < count; ++k) {
      const double t = 2.0 * pi * k / count + 0.1;
      out.push_back(Eigen::VectorXd{{std::cos(t), std::sin(t)}});
    }
  } else if (n == 3) {
    const double golden = pi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < count; ++k) {
      const double z = 1.0 - (2.0 * k + 1.0) / count;
      const double rho = std::sqrt(1.0 - z * z);
      const double t = golden * k + 0.1;
      out.push_back(Eigen::VectorXd{{rho * std::cos(t), rho * std::sin(t), z}});
    }
  } else {
    fail(Errc::dimension_mismatch, "directions are generated for n = 2 or 3");
  }
  return out;
}

PredicateVerdict is_generalized_berwald(const MetricSpec& m, const std::vector<Eigen::VectorXd>& grid, double tol) {
  if (grid.empty()) fail(Errc::empty_grid, "empty grid");
  const double b0 = point_frame(m, grid.front()).b_norm;
  PredicateVerdict v;
  for (const auto& x : grid) v.residual = std::max(v.residual, std::abs(point_frame(m, x).b_norm - b0));
  v.threshold = tol * std::max(1.0, b0);
  v.verdict = v.residual < v.threshold;
  v.n_samples = static_cast<int>(grid.size());
  v.details["b0"] = b0;
  return v;
}

PredicateVerdict killing_constant_length(const MetricSpec& m, const std::vector<Eigen::VectorXd>& grid, double tol) {
  if (grid.empty()) fail(Errc::empty_grid, "empty grid");
  double r_max = 0.0, s_max = 0.0;
  for (const auto& x : grid) {
    const BetaCalculus bc = beta_derivatives(m, x);
    r_max = std::max(r_max, bc.r.cwiseAbs().maxCoeff());
    s_max = std::max(s_max, bc.s_i.cwiseAbs().maxCoeff());
  }
  PredicateVerdict v;
  v.residual = std::max(r_max, s_max);
  v.threshold = tol;
  v.verdict = r_max < tol && s_max < tol;
  v.n_samples = static_cast<int>(grid.size());
  v.details["r_ij"] = r_max;
  v.details["s_i"] = s_max;
  return v;
}

PredicateVerdict randers_s0_shortcut(const MetricSpec& m, const PhiFamily& f, const std::vector<Eigen::VectorXd>& grid,
                                     double tol) {
  if (f.variant() != PhiFamily::Variant::randers) fail(Errc::wrong_phi_variant, "the shortcut applies to phi = 1 + s");
  if (grid.empty()) fail(Errc::empty_grid, "empty grid");
  PredicateVerdict v;
  for (const auto& x : grid) {
    const BetaCalculus bc = beta_derivatives(m, x);
    const Eigen::VectorXd& b = bc.frame.b_lower;
    const Eigen::MatrixXd t = bc.r + b * bc.s_i.transpose() + bc.s_i * b.transpose();
    v.residual = std::max(v.residual, t.cwiseAbs().maxCoeff());
  }
  v.threshold = tol;
  v.verdict = v.residual < tol;
  v.n_samples = static_cast<int>(grid.size());
  return v;
}

namespace {

PredicateVerdict verdict_of(double residual, double tol, int n) {
  PredicateVerdict v;
  v.residual = residual;
  v.threshold = tol;
  v.verdict = residual < tol;
  v.n_samples = n;
  return v;
}

}  // namespace

CurvatureFlags curvature_flags(const MetricSpec& m, const PhiFamily& f, const std::vector<Eigen::VectorXd>& grid,
                               const std::vector<Eigen::VectorXd>& dirs, const Tolerances& tol) {
  double B = 0.0, L = 0.0, D = 0.0, S = 0.0, C = 0.0, R = 0.0;
  double k_min = std::numeric_limits<double>::infinity(), k_max = -k_min;
  int used = 0, singular = 0;
  for (const auto& x : grid) {
    std::optional<Eigen::VectorXd> grad;
    const PointFrame pf = point_frame(m, x);
    for (const auto& d : dirs) {
      const double alpha = std::sqrt(d.dot(pf.a * d));
      if (!f.admissible(pf.b_lower.dot(d) / alpha)) {
        ++singular;
        continue;
      }
      try {
        const Eigen::VectorXd y = d / finsler_eval(m, f, x, d);
        if (!grad) grad = log_sigma_gradient(m, f, x);
        BundleOptions opts;
        opts.with_h = false;
        opts.with_s_formula = false;
        opts.log_sigma_grad = grad;
        const CurvatureBundle cb = curvature_bundle(m, f, x, y, opts);
        B = std::max(B, max_abs(cb.B));
        L = std::max(L, max_abs(cb.L));
        D = std::max(D, max_abs(cb.D));
        S = std::max(S, std::abs(cb.S));
        C = std::max(C, max_abs(cb.fd.C));
        R = std::max(R, cb.R.cwiseAbs().maxCoeff());
        if (cb.K) {
          k_min = std::min(k_min, *cb.K);
          k_max = std::max(k_max, *cb.K);
        }
        ++used;
      } catch (const Error& e) {
        if (e.code() != Errc::domain && e.code() != Errc::singular_g && e.code() != Errc::evaluation &&
            e.code() != Errc::degenerate_denominator && e.code() != Errc::non_positive_phi)
          throw;
        ++singular;
      }
    }
  }
  if (used == 0) fail(Errc::all_samples_singular, "every sampled direction is singular");
  CurvatureFlags out;
  out.berwald = verdict_of(B, tol.berwald, used);
  out.landsberg = verdict_of(L, tol.landsberg, used);
  out.douglas = verdict_of(D, tol.douglas, used);
  out.s_zero = verdict_of(S, tol.s_zero, used);
  out.riemannian = verdict_of(C, tol.riemannian, used);
  out.k_flat = verdict_of(R, tol.k_flat, used);
  if (m.dim == 2) {
    out.k_constant = verdict_of(k_max - k_min, tol.k_flat, used);
    out.k_constant->details["K_min"] = k_min;
    out.k_constant->details["K_max"] = k_max;
  }
  out.n_singular = singular;
  return out;
}

UnicornFit unicorn_fit(const std::vector<double>& s, const std::vector<double>& Q, double b) {
  if (s.size() != Q.size()) fail(Errc::dimension_mismatch, "s and Q sample counts differ");
  if (s.size() < 8) fail(Errc::domain, "unicorn fit needs at least 8 samples");
  const int n = static_cast<int>(s.size());
  Eigen::MatrixXd A(n, 2);
  Eigen::VectorXd rhs(n);
  for (int j = 0; j < n; ++j) {
    if (std::abs(s[j]) > b) fail(Errc::domain, "sample |s| exceeds b");
    A(j, 0) = s[j];
    A(j, 1) = std::sqrt(b * b - s[j] * s[j]);
    rhs(j) = Q[j];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  qr.setThreshold(1e-10);
  if (qr.rank() < 2) fail(Errc::rank_deficient, "unicorn design matrix is rank deficient");
  const Eigen::VectorXd c = qr.solve(rhs);
  UnicornFit fit;
  fit.k = c(0);
  fit.q = c(1);
  fit.rms = std::sqrt((A * c - rhs).squaredNorm() / n);
  fit.n_samples = n;
  return fit;
}

UnicornFit unicorn_fit(const PhiFamily& f, double b, int count, double delta) {
  if (count < 8) fail(Errc::domain, "unicorn fit needs at least 8 samples");
  const double edge = std::min(b * (1.0 - delta), 0.999999 * f.regular_bound());
  std::vector<double> s, Q;
  for (int j = 0; j < count; ++j) {
    const double sj = -edge + 2.0 * edge * j / (count - 1);
    s.push_back(sj);
    Q.push_back(ab_scalars(f, b, sj, 2).Q);
  }
  return unicorn_fit(s, Q, b);
}

Verdict final_verdict(const ClassificationReport& r, const Tolerances& tol) {
  if (!r.gb || !r.flags) fail(Errc::missing_reports, "generalized Berwald and curvature reports are required");
  if (!r.gb->verdict) return Verdict::not_generalized_berwald;
  if (!r.flags->s_zero.verdict) return Verdict::s_nonzero;
  if (r.flags->riemannian.verdict) return Verdict::riemannian_isotropic;
  if (r.flags->berwald.verdict && r.flags->k_flat.verdict) return Verdict::locally_minkowski_like;
  if (r.killing_cl && r.killing_cl->verdict && r.unicorn_fit && r.unicorn_fit->rms < tol.unicorn)
    return Verdict::unicorn_case;
  return Verdict::inconclusive;
}

ClassificationReport classify(const MetricSpec& m, const PhiFamily& f, const std::vector<Eigen::VectorXd>& grid,
                              const std::vector<Eigen::VectorXd>& dirs, const Tolerances& tol) {
  ClassificationReport r;
  r.n_points = static_cast<int>(grid.size());
  r.n_directions = static_cast<int>(dirs.size());
  r.gb = is_generalized_berwald(m, grid, tol.gb);
  r.killing_cl = killing_constant_length(m, grid, tol.killing);
  if (f.variant() == PhiFamily::Variant::randers) r.randers_s0 = randers_s0_shortcut(m, f, grid, tol.randers_s0);
  r.flags = curvature_flags(m, f, grid, dirs, tol);
  if (r.gb->verdict) {
    const double b = r.gb->details.at("b0");
    if (b > 1e-8) {
      try {
        r.unicorn_fit = unicorn_fit(f, b);
      } catch (const Error&) {
        r.unicorn_fit.reset();
      }
    }
  }
  r.verdict = final_verdict(r, tol);
  return r;
}

}  // namespace finsler
