#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "finsler/finsler_metric.hpp"

namespace finsler {

/// G^i_alpha = 1/2 gamma^i_jk y^j y^k.
Eigen::VectorXd spray_alpha(const MetricSpec& m, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// G^i = G^i_alpha + alpha Q s^i_0 + (r00 - 2 Q alpha s0)(Theta y^i / alpha + Psi b^i).
Eigen::VectorXd spray_ab(const MetricSpec& m, const PhiFamily& f, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& y);

/// G^i = 1/4 g^il [d^2 F^2/dx^k dy^l y^k - dF^2/dx^l] as y-jets of the given order.
std::vector<JetScalar> spray_jets(const MetricSpec& m, const PhiFamily& f, const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& y, int order);

Eigen::VectorXd spray_generic(const MetricSpec& m, const PhiFamily& f, const Eigen::VectorXd& x,
                              const Eigen::VectorXd& y);

struct SprayData {
  Eigen::VectorXd G;
  Eigen::VectorXd G_alpha;
  Eigen::MatrixXd N;  // N^i_j
  Tensor3 conn;       // G^i_jk
};

SprayData spray_data(const MetricSpec& m, const PhiFamily& f, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

struct BerwaldData {
  Tensor4 B;  // B^i_jkl as B(i, j, k, l)
  Eigen::MatrixXd E;
};

BerwaldData berwald(const MetricSpec& m, const PhiFamily& f, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// L_jkl = -1/2 y_i B^i_jkl with y_i lowered by g.
Tensor3 landsberg(const FundamentalData& fd, const Tensor4& B);

/// D^i_jkl = d^3/dy^j dy^k dy^l [G^i - 1/(n+1) (dG^m/dy^m) y^i].
Tensor4 douglas(const MetricSpec& m, const PhiFamily& f, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

struct FlagData {
  Eigen::MatrixXd R;  // R^i_k
  double K = 0.0;
};

FlagData riemann_flag(const MetricSpec& m, const PhiFamily& f, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                      const Eigen::VectorXd& u);

/// d/dx^i ln sigma_F at x.
Eigen::VectorXd log_sigma_gradient(const MetricSpec& m, const PhiFamily& f, const Eigen::VectorXd& x,
                                   bool* approximate = nullptr);

/// S = dG^i/dy^i - y^i d/dx^i ln sigma_F; pass a precomputed gradient to reuse it across directions.
double s_curvature_def(const MetricSpec& m, const PhiFamily& f, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                       const std::optional<Eigen::VectorXd>& log_sigma_grad = std::nullopt);

struct SFormulaTerms {
  double S = 0.0;
  double f_b = 0.0;
  double df_b = 0.0;
};

/// S = [2 Psi - f'(b)/(b f(b))](r_0 + s_0) - Phi/(2 alpha Delta^2) (r_00 - 2 alpha Q s_0).
SFormulaTerms s_curvature_formula(const MetricSpec& m, const PhiFamily& f, const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& y, VolumeForm form = VolumeForm::busemann_hausdorff);

Eigen::MatrixXd h_curvature(const MetricSpec& m, const PhiFamily& f, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& y);

/// Max-norm of B - [-(2/F^2) L y^i + 2/3 (E_jk h^i_l + E_kl h^i_j + E_jl h^i_k)], n = 2.
double berwald_2d_identity(const FundamentalData& fd, const Tensor4& B, const Eigen::MatrixXd& E, const Tensor3& L);

/// Max-norm of D - B + 2/(n+1) (E_jk d^i_l + E_kl d^i_j + E_lj d^i_k + E_jk,l y^i), n = 2.
double douglas_2d_identity(const Tensor4& D, const Tensor4& B, const Eigen::MatrixXd& E, const Tensor3& dE,
                           const Eigen::VectorXd& y);

struct BundleOptions {
  bool with_h = true;
  bool with_s_formula = true;
  bool with_flag = true;
  VolumeForm volume_form = VolumeForm::busemann_hausdorff;
  std::optional<Eigen::VectorXd> log_sigma_grad;
};

struct CurvatureBundle {
  FundamentalData fd;
  SprayData spray;
  Tensor4 B;
  Eigen::MatrixXd E;
  Tensor3 dE;  // E_jk,l
  Tensor3 L;
  Tensor4 D;
  Eigen::MatrixXd R;
  std::optional<double> K;
  double S = 0.0;
  std::optional<SFormulaTerms> S_formula;
  std::optional<Eigen::MatrixXd> H;
};

CurvatureBundle curvature_bundle(const MetricSpec& m, const PhiFamily& f, const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& y, const BundleOptions& opts = {});

}  // namespace finsler
