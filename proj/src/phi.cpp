#include "finsler/phi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "finsler/quadrature.hpp"

namespace finsler {
namespace {

double unicorn_integrand(const UnicornParams& p, double t) {
  const double root = std::sqrt(std::max(0.0, p.b0 * p.b0 - t * t));
  const double num = p.k * t + p.q * root;
  return num / (1.0 + t * num);
}

std::set<std::string> phi_variables() {
  std::set<std::string> vars = {"s"};
  for (int i = 1; i <= 9; ++i) vars.insert("p" + std::to_string(i));
  return vars;
}

double factorial(int k) {
  double r = 1.0;
  for (int j = 2; j <= k; ++j) r *= j;
  return r;
}

}  // namespace

PhiFamily PhiFamily::randers() { return PhiFamily{}; }

PhiFamily PhiFamily::riemann_sqrt(double k) {
  PhiFamily f;
  f.variant_ = Variant::riemann_sqrt;
  f.k_ = k;
  return f;
}

PhiFamily PhiFamily::unicorn(const UnicornParams& p) {
  if (!(p.b0 > 0.0)) fail(Errc::param_out_of_range, "unicorn b0 must be > 0");
  if (!(p.q > 0.0)) fail(Errc::param_out_of_range, "unicorn q must be > 0");
  if (!(p.c > 0.0)) fail(Errc::param_out_of_range, "unicorn c must be > 0");
  if (!(p.margin > 0.0 && p.margin < 1.0)) fail(Errc::param_out_of_range, "unicorn margin must lie in (0, 1)");
  PhiFamily f;
  f.variant_ = Variant::unicorn;
  f.unicorn_ = p;
  return f;
}

PhiFamily PhiFamily::custom(const std::string& source, const std::map<std::string, double>& params) {
  PhiFamily f;
  f.variant_ = Variant::custom;
  f.expr_ = parse(source, phi_variables());
  f.source_ = source;
  f.params_ = params;
  for (const auto& v : f.expr_.variables())
    if (v != "s" && !params.contains(v)) fail(Errc::unbound_variable, "phi parameter " + v + " has no value");
  return f;
}

std::string PhiFamily::name() const {
  std::ostringstream os;
  switch (variant_) {
    case Variant::randers: return "randers";
    case Variant::riemann_sqrt: os << "riemann_sqrt(k=" << k_ << ")"; return os.str();
    case Variant::unicorn:
      os << "unicorn(b0=" << unicorn_.b0 << ", k=" << unicorn_.k << ", q=" << unicorn_.q << ", c=" << unicorn_.c << ")";
      return os.str();
    case Variant::custom: return "custom(" + source_ + ")";
  }
  return "phi";
}

bool PhiFamily::admissible(double s) const {
  if (!std::isfinite(s)) return false;
  switch (variant_) {
    case Variant::randers: return true;
    case Variant::riemann_sqrt: return 1.0 + k_ * s * s > 0.0;
    case Variant::unicorn: return std::abs(s) < regular_bound();
    case Variant::custom: return true;
  }
  return false;
}

double PhiFamily::regular_bound() const {
  if (variant_ == Variant::unicorn) return unicorn_.b0 * (1.0 - unicorn_.margin);
  return std::numeric_limits<double>::infinity();
}

double PhiFamily::value(double s) const {
  switch (variant_) {
    case Variant::randers: return 1.0 + s;
    case Variant::riemann_sqrt: {
      const double r = 1.0 + k_ * s * s;
      if (r <= 0.0) fail(Errc::domain, "1 + k s^2 <= 0");
      return std::sqrt(r);
    }
    case Variant::unicorn: {
      const auto& p = unicorn_;
      if (std::abs(s) > p.b0 * (1.0 + 1e-12)) fail(Errc::domain, "|s| exceeds b0 for the unicorn profile");
      const double t = std::clamp(s, -p.b0, p.b0);
      const double integral = adaptive_simpson([&](double u) { return unicorn_integrand(p, u); }, 0.0, t, 1e-12);
      return p.c * std::exp(integral);
    }
    case Variant::custom: {
      Bindings<double> b(params_.begin(), params_.end());
      b["s"] = s;
      return eval_expr(expr_, b);
    }
  }
  fail(Errc::domain, "unknown phi variant");
}

std::vector<double> PhiFamily::taylor(double s, int order) const {
  if (!admissible(s)) fail(Errc::domain, "s = " + std::to_string(s) + " outside the admissible interval of " + name());
  const JetScalar t = JetScalar::variable(0, s, 1, order);
  auto coeffs = [](const JetScalar& j) {
    auto c = j.coeffs();
    return std::vector<double>(c.begin(), c.end());
  };
  switch (variant_) {
    case Variant::randers: {
      std::vector<double> c(order + 1, 0.0);
      c[0] = 1.0 + s;
      if (order >= 1) c[1] = 1.0;
      return c;
    }
    case Variant::riemann_sqrt: return coeffs(sqrt(1.0 + k_ * t * t));
    case Variant::unicorn: {
      const auto& p = unicorn_;
      const JetScalar root = sqrt(p.b0 * p.b0 - t * t);
      const JetScalar num = p.k * t + p.q * root;
      const JetScalar g = num / (1.0 + t * num);
      // phi(s + d) = phi(s) exp(int_s^{s+d} g)
      return coeffs(value(s) * exp(integrate_univariate(g)));
    }
    case Variant::custom: {
      Bindings<JetScalar> b;
      for (const auto& [name, v] : params_) b.emplace(name, JetScalar::constant_like(t, v));
      b.insert_or_assign("s", t);
      return coeffs(eval_expr(expr_, b));
    }
  }
  fail(Errc::domain, "unknown phi variant");
}

JetScalar phi_apply(const PhiFamily& f, const JetScalar& s) {
  const auto c = f.taylor(s.value(), s.max_order());
  if (c[0] <= 0.0) fail(Errc::non_positive_phi, "phi(s) <= 0 at s = " + std::to_string(s.value()));
  return compose(c, s);
}

std::array<double, 4> PhiFamily::eval(double s) const {
  const auto c = taylor(s, 3);
  std::array<double, 4> out{};
  for (int k = 0; k < 4; ++k) out[k] = c[k] * factorial(k);
  if (out[0] <= 0.0 || out[0] - s * out[1] <= 0.0)
    fail(Errc::non_positive_phi, "phi > 0 and phi - s phi' > 0 violated at s = " + std::to_string(s));
  return out;
}

std::array<double, 4> phi_eval(const PhiFamily& f, double s) { return f.eval(s); }

AlphaBetaScalars ab_scalars(const PhiFamily& f, double b, double s, int n) {
  if (std::abs(s) > b * (1.0 + 1e-12) + 1e-15) fail(Errc::domain, "|s| must not exceed b");
  const auto c = f.taylor(s, 4);
  // Work in the univariate jet of phi to get Q and its first two derivatives exactly.
  JetScalar phi = JetScalar::constant_like(JetScalar::variable(0, s, 1, 4), 0.0);
  std::copy(c.begin(), c.end(), phi.coeffs().begin());
  const JetScalar dphi = phi.partial(0);
  const JetScalar t = JetScalar::variable(0, s, 1, 3);
  const JetScalar denom = phi.truncated(3) - t * dphi;
  if (denom.value() <= 1e-12) fail(Errc::degenerate_denominator, "phi - s phi' <= 1e-12");
  const JetScalar Qj = dphi / denom;

  const double phi0 = c[0];
  const double phi1 = c[1];
  const double phi2 = 2.0 * c[2];
  const double gap = b * b - s * s;

  AlphaBetaScalars out;
  out.Q = Qj.coeffs()[0];
  out.dQ = Qj.coeffs()[1];
  out.d2Q = 2.0 * Qj.coeffs()[2];
  out.Delta = 1.0 + s * out.Q + gap * out.dQ;
  if (out.Delta <= 1e-12) fail(Errc::degenerate_denominator, "Delta <= 1e-12");
  out.Theta = (out.Q - s * out.dQ) / (2.0 * out.Delta);
  const double psi_den = 2.0 * ((phi0 - s * phi1) + gap * phi2);
  if (std::abs(psi_den) <= 1e-12) fail(Errc::degenerate_denominator, "(phi - s phi') + (b^2 - s^2) phi'' ~ 0");
  out.Psi = phi2 / psi_den;
  out.Phi = -(out.Q - s * out.dQ) * (n * out.Delta + 1.0 + s * out.Q) - gap * (1.0 + s * out.Q) * out.d2Q;
  return out;
}

double ode_residual(const PhiFamily& f, double b, double s) {
  if (std::abs(s) >= b) fail(Errc::domain, "ODE residual needs |s| < b");
  const auto sc = ab_scalars(f, b, s, 2);
  const double gap = b * b - s * s;
  return sc.d2Q - s * sc.dQ / gap + sc.Q / gap;
}

double ode_assembled(const PhiFamily& f, double b, double s, double alpha) {
  if (std::abs(s) >= b) fail(Errc::domain, "ODE residual needs |s| < b");
  const auto sc = ab_scalars(f, b, s, 2);
  const double gap = b * b - s * s;
  const double lambda1 = s;
  const double lambda2 = gap / alpha;
  const double theta1 = gap * sc.dQ / alpha;
  const double theta2 = gap * (gap * sc.d2Q - 3.0 * s * sc.dQ) / (alpha * alpha);
  return alpha * theta2 + 2.0 * lambda1 * theta1 + lambda2 * sc.Q;
}

double volume_density(const PhiFamily& f, double b, int n, VolumeForm form) {
  if (n < 2) fail(Errc::dimension_mismatch, "volume density needs n >= 2");
  auto weight = [n](double t) { return n == 2 ? 1.0 : std::pow(std::sin(t), n - 2); };
  const double pi = std::acos(-1.0);
  const double base = adaptive_simpson(weight, 0.0, pi, 1e-13);
  double f_b = 0.0;
  if (form == VolumeForm::busemann_hausdorff) {
    const double inv = adaptive_simpson(
        [&](double t) { return weight(t) * std::pow(phi_apply(f, b * std::cos(t)), -n); }, 0.0, pi, 1e-13);
    if (!(inv > 0.0)) fail(Errc::non_positive_density, "unit-ball integral is not positive");
    f_b = base / inv;
  } else {
    auto T = [&](double s) {
      const auto p = f.eval(s);
      const double w = p[0] - s * p[1];
      return p[0] * std::pow(w, n - 2) * (w + (b * b - s * s) * p[2]);
    };
    f_b = adaptive_simpson([&](double t) { return weight(t) * T(b * std::cos(t)); }, 0.0, pi, 1e-13) / base;
  }
  if (!(f_b > 0.0)) fail(Errc::non_positive_density, "volume density f(b) <= 0");
  return f_b;
}

}  // namespace finsler
