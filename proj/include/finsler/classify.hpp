#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "finsler/geometry.hpp"
#include "finsler/phi.hpp"

namespace finsler {

struct PredicateVerdict {
  bool verdict = false;
  double residual = 0.0;
  double threshold = 0.0;
  int n_samples = 0;
  std::map<std::string, double> details;
};

struct UnicornFit {
  double k = 0.0;
  double q = 0.0;
  double rms = 0.0;
  int n_samples = 0;
};

enum class Verdict { riemannian_isotropic, locally_minkowski_like, unicorn_case, not_generalized_berwald, s_nonzero,
                     inconclusive };

std::string to_string(Verdict v);

struct Tolerances {
  double gb = 1e-6;
  double killing = 1e-6;
  double randers_s0 = 1e-6;
  double berwald = 1e-6;
  double landsberg = 1e-6;
  double douglas = 1e-6;
  double s_zero = 1e-5;
  double riemannian = 1e-6;
  double k_flat = 1e-5;
  double unicorn = 1e-6;
};

struct CurvatureFlags {
  PredicateVerdict berwald;
  PredicateVerdict landsberg;
  PredicateVerdict douglas;
  PredicateVerdict s_zero;
  PredicateVerdict riemannian;
  PredicateVerdict k_flat;                    // max |R^i_k| at F(y) = 1
  std::optional<PredicateVerdict> k_constant;  // spread of K over the samples, n = 2
  int n_singular = 0;
};

struct ClassificationReport {
  std::optional<PredicateVerdict> gb;
  std::optional<PredicateVerdict> killing_cl;
  std::optional<PredicateVerdict> randers_s0;
  std::optional<CurvatureFlags> flags;
  std::optional<UnicornFit> unicorn_fit;
  Verdict verdict = Verdict::inconclusive;
  int n_points = 0;
  int n_directions = 0;
};

/// Rectangular grid with `counts` points per axis over the domain shrunk by `margin`,
/// keeping points accepted by the domain predicate.
std::vector<Eigen::VectorXd> make_grid(const ChartDomain& domain, const std::vector<int>& counts, double margin);
/// Unit directions: equal angles rotated by 0.1 rad (n = 2) or a Fibonacci lattice (n = 3).
std::vector<Eigen::VectorXd> make_directions(int n, int count);

PredicateVerdict is_generalized_berwald(const MetricSpec& m, const std::vector<Eigen::VectorXd>& grid,
                                        double tol = 1e-6);
PredicateVerdict killing_constant_length(const MetricSpec& m, const std::vector<Eigen::VectorXd>& grid,
                                         double tol = 1e-6);
PredicateVerdict randers_s0_shortcut(const MetricSpec& m, const PhiFamily& f, const std::vector<Eigen::VectorXd>& grid,
                                     double tol = 1e-6);
CurvatureFlags curvature_flags(const MetricSpec& m, const PhiFamily& f, const std::vector<Eigen::VectorXd>& grid,
                               const std::vector<Eigen::VectorXd>& dirs, const Tolerances& tol = {});

/// Least squares of Q(s_j) against {s, sqrt(b^2 - s^2)}.
UnicornFit unicorn_fit(const std::vector<double>& s, const std::vector<double>& Q, double b);
/// Samples Q of `f` on `count` equispaced points of |s| <= b (1 - delta).
UnicornFit unicorn_fit(const PhiFamily& f, double b, int count = 20, double delta = 0.05);

Verdict final_verdict(const ClassificationReport& r, const Tolerances& tol = {});

ClassificationReport classify(const MetricSpec& m, const PhiFamily& f, const std::vector<Eigen::VectorXd>& grid,
                              const std::vector<Eigen::VectorXd>& dirs, const Tolerances& tol = {});

}  // namespace finsler
