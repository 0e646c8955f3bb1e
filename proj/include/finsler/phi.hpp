#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "finsler/expr.hpp"

namespace finsler {

struct UnicornParams {
  double b0 = 1.0;
  double k = 0.0;
  double q = 1.0;
  double c = 1.0;
  double margin = 0.05;  // derivatives only inside |s| < b0 (1 - margin)
};

/// The profile phi(s) of an (alpha, beta)-metric F = alpha phi(beta / alpha).
class PhiFamily {
 public:
  enum class Variant { randers, riemann_sqrt, unicorn, custom };

  static PhiFamily randers();
  /// phi = sqrt(1 + k s^2)
  static PhiFamily riemann_sqrt(double k);
  /// phi = c exp(int_0^s (k t + q sqrt(b0^2 - t^2)) / (1 + k t^2 + q t sqrt(b0^2 - t^2)) dt)
  static PhiFamily unicorn(const UnicornParams& p);
  /// phi given as an expression in `s` and the parameters p1..p9.
  static PhiFamily custom(const std::string& source, const std::map<std::string, double>& params = {});

  Variant variant() const noexcept { return variant_; }
  std::string name() const;

  /// phi(s) alone; for the unicorn family this is defined on the closed
  /// interval |s| <= b0 where the profile stays finite.
  double value(double s) const;
  /// (phi, phi', phi'', phi''') with the admissibility and positivity checks.
  std::array<double, 4> eval(double s) const;
  /// Univariate Taylor coefficients of phi at s up to `order`.
  std::vector<double> taylor(double s, int order) const;
  /// True where derivatives of phi exist (strict interior for unicorn).
  bool admissible(double s) const;
  /// b0 (1 - margin) for the unicorn family, +inf otherwise.
  double regular_bound() const;

  const UnicornParams& unicorn_params() const { return unicorn_; }
  double riemann_k() const { return k_; }
  const std::string& source() const { return source_; }
  const std::map<std::string, double>& params() const { return params_; }

 private:
  Variant variant_ = Variant::randers;
  double k_ = 0.0;
  UnicornParams unicorn_;
  Expr expr_;
  std::string source_;
  std::map<std::string, double> params_;
};

/// phi applied to a jet argument (composition through its Taylor expansion).
JetScalar phi_apply(const PhiFamily& f, const JetScalar& s);
inline double phi_apply(const PhiFamily& f, double s) { return f.value(s); }

std::array<double, 4> phi_eval(const PhiFamily& f, double s);

struct AlphaBetaScalars {
  double Q = 0.0;
  double dQ = 0.0;
  double d2Q = 0.0;
  double Delta = 0.0;
  double Theta = 0.0;
  double Phi = 0.0;
  double Psi = 0.0;
};

/// Q = phi' / (phi - s phi'), Delta = 1 + sQ + (b^2 - s^2) Q',
/// Theta = (Q - sQ') / (2 Delta), Psi = phi'' / (2 [(phi - s phi') + (b^2 - s^2) phi'']),
/// Phi = -(Q - sQ')(n Delta + 1 + sQ) - (b^2 - s^2)(1 + sQ) Q''.
AlphaBetaScalars ab_scalars(const PhiFamily& f, double b, double s, int n);

/// Q'' - s Q' / (b^2 - s^2) + Q / (b^2 - s^2); vanishes exactly on
/// Q = k s + q sqrt(b^2 - s^2).
double ode_residual(const PhiFamily& f, double b, double s);

/// alpha Theta_2 + 2 Lambda_1 Theta_1 + Lambda_2 Q assembled from
/// Lambda_1 = s, Lambda_2 = (b^2 - s^2)/alpha, Theta_1 = (b^2 - s^2) Q'/alpha,
/// Theta_2 = (b^2 - s^2)[(b^2 - s^2) Q'' - 3 s Q']/alpha^2. Equals
/// (b^2 - s^2)^2 / alpha times ode_residual.
double ode_assembled(const PhiFamily& f, double b, double s, double alpha);

enum class VolumeForm { busemann_hausdorff, holmes_thompson };

/// Volume density ratio f(b) = sigma_F / sigma_alpha for an (alpha, beta)-metric
/// with ||beta||_alpha = b in dimension n.
double volume_density(const PhiFamily& f, double b, int n, VolumeForm form = VolumeForm::busemann_hausdorff);

}  // namespace finsler
