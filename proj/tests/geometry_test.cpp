#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "finsler/catalog.hpp"
#include "finsler/geometry.hpp"

using namespace finsler;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double d : v) out(i++) = d;
  return out;
}

// Christoffels from plain central differences of a_ij, no shared code with the library.
Tensor3 christoffel_oracle(const MetricSpec& m, const Eigen::VectorXd& x) {
  const int n = m.dim;
  const double h = 1e-5;
  std::vector<Eigen::MatrixXd> da(n);
  for (int k = 0; k < n; ++k) {
    Eigen::VectorXd p = x, q = x;
    p(k) += h;
    q(k) -= h;
    da[k] = (m.a(p) - m.a(q)) / (2 * h);
  }
  const Eigen::MatrixXd ainv = m.a(x).inverse();
  Tensor3 g(n, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double s = 0;
        for (int l = 0; l < n; ++l) s += ainv(i, l) * (da[j](l, k) + da[k](l, j) - da[l](j, k));
        g(i, j, k) = 0.5 * s;
      }
  return g;
}

Eigen::MatrixXd bcov_oracle(const MetricSpec& m, const Eigen::VectorXd& x) {
  const int n = m.dim;
  const double h = 1e-5;
  const Tensor3 g = christoffel_oracle(m, x);
  const Eigen::VectorXd b = m.b_form(x);
  Eigen::MatrixXd out(n, n);
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd p = x, q = x;
    p(j) += h;
    q(j) -= h;
    const Eigen::VectorXd db = (m.b_form(p) - m.b_form(q)) / (2 * h);
    for (int i = 0; i < n; ++i) {
      double s = db(i);
      for (int k = 0; k < n; ++k) s -= b(k) * g(k, i, j);
      out(i, j) = s;
    }
  }
  return out;
}

}  // namespace

TEST(Christoffels, EuclidVanishes) {
  auto e = get_metric("euclid");
  EXPECT_LT(max_abs(christoffels(e.metric, vec({0.3, -1.2}))), 1e-14);
}

TEST(Christoffels, MwClosedForm) {
  auto e = get_metric("mw");
  for (double x1 : {-0.7, 0.0, 0.4}) {
    auto g = christoffels(e.metric, vec({x1, 0.2}));
    EXPECT_NEAR(g(0, 1, 1), -std::exp(2 * x1), 1e-9);
    EXPECT_NEAR(g(1, 0, 1), 1.0, 1e-9);
    EXPECT_NEAR(g(1, 1, 0), 1.0, 1e-9);
    EXPECT_NEAR(g(0, 0, 0), 0.0, 1e-12);
  }
}

TEST(Christoffels, LieGroupAgainstOracle) {
  auto e = get_metric("lie_group");
  for (auto x : {vec({0.0, 1.0}), vec({1.3, 0.6}), vec({-2.0, 3.1})}) {
    auto g = christoffels(e.metric, x);
    auto o = christoffel_oracle(e.metric, x);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) {
          EXPECT_NEAR(g(i, j, k), o(i, j, k), 1e-8);
          EXPECT_DOUBLE_EQ(g(i, j, k), g(i, k, j));
        }
  }
}

TEST(Christoffels, SingularMetricRejected) {
  MetricSpec m = get_metric("euclid").metric;
  m.a = [](const Eigen::VectorXd&) { Eigen::MatrixXd a(2, 2); a << 1, 1, 1, 1; return a; };
  try {
    point_frame(m, vec({0, 0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::singular_metric);
  }
}

TEST(BetaDerivatives, LieGroupComponents) {
  // s_ij is the antisymmetric part 1/2 (b_i;j - b_j;i); at y = 1 this is -1/2, with
  // s_i = b^m s_mi = (1/6, -1/6).
  auto e = get_metric("lie_group");
  for (double y : {1.0, 0.5, 2.0}) {
    auto bc = beta_derivatives(e.metric, vec({0.0, y}));
    EXPECT_NEAR(bc.s(0, 0), 0.0, 1e-9);
    EXPECT_NEAR(bc.s(1, 1), 0.0, 1e-9);
    EXPECT_NEAR(bc.s(0, 1), -0.5 / (y * y), 1e-8);
    EXPECT_NEAR(bc.s(1, 0), 0.5 / (y * y), 1e-8);
    EXPECT_NEAR(bc.s_i(0), 1.0 / (6 * y), 1e-8);
    EXPECT_NEAR(bc.s_i(1), -1.0 / (6 * y), 1e-8);
    EXPECT_NEAR(bc.b * bc.b, 2.0 / 3.0, 1e-12);
    EXPECT_LT((bc.b_cov - bcov_oracle(e.metric, vec({0.0, y}))).cwiseAbs().maxCoeff(), 1e-7);
  }
}

TEST(BetaDerivatives, MwIsClosed) {
  auto e = get_metric("mw");
  auto bc = beta_derivatives(e.metric, vec({0.0, 0.3}));
  EXPECT_LT(bc.s.cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_NEAR(bc.r(0, 0), 0.0, 1e-9);
  EXPECT_NEAR(bc.r(0, 1), 0.0, 1e-9);
  EXPECT_NEAR(bc.r(1, 1), 1.0, 1e-9);
  const Eigen::MatrixXd want = bc.b * bc.b * bc.frame.a - bc.frame.b_lower * bc.frame.b_lower.transpose();
  EXPECT_LT((bc.r - want).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(BetaDerivatives, SphereRandersClosedForms) {
  auto e = get_metric("sphere_randers", {{"eps", 0.5}});
  auto bc = beta_derivatives(e.metric, vec({1.0, 0.4}));
  EXPECT_NEAR(bc.r(0, 1), 1.0 / 49.0, 1e-8);
  EXPECT_NEAR(bc.s(0, 1), 8.0 / 49.0, 1e-8);
  EXPECT_NEAR(bc.s_i(0), 1.0 / 14.0, 1e-8);
}

TEST(BetaContractions, ParallelFormVanishes) {
  auto e = get_metric("euclid_randers");
  auto c = beta_contractions(beta_derivatives(e.metric, vec({0.5, 0.5})), vec({0.3, 1.0}));
  EXPECT_NEAR(c.r00, 0.0, 1e-12);
  EXPECT_NEAR(c.r0, 0.0, 1e-12);
  EXPECT_NEAR(c.s0, 0.0, 1e-12);
  EXPECT_LT(c.r_i0.cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(c.s_up0.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(BetaContractions, LieGroupS0) {
  auto e = get_metric("lie_group");
  auto c = beta_contractions(beta_derivatives(e.metric, vec({0.0, 1.0})), vec({1.0, 0.0}));
  EXPECT_NEAR(c.s0, 1.0 / 6.0, 1e-8);
}

TEST(BetaContractions, MwR00) {
  auto e = get_metric("mw");
  auto c = beta_contractions(beta_derivatives(e.metric, vec({0.0, 0.0})), vec({0.0, 1.0}));
  EXPECT_NEAR(c.r00, 1.0, 1e-9);
}

TEST(BetaContractions, DimensionMismatch) {
  auto e = get_metric("mw");
  auto bc = beta_derivatives(e.metric, vec({0.0, 0.0}));
  try {
    beta_contractions(bc, vec({1.0, 0.0, 0.0}));
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), Errc::dimension_mismatch);
  }
}

TEST(NormGradient, FishTank) {
  auto e = get_metric("fish_tank");
  const auto x = vec({0.3, 0.4});
  auto bc = beta_derivatives(e.metric, x);
  EXPECT_NEAR(bc.b, 0.5, 1e-12);
  EXPECT_NEAR((bc.r_i(0) + bc.s_i(0)) / bc.b, 0.6, 1e-6);
  EXPECT_LT(beta_norm_gradient_check(e.metric, x).cwiseAbs().maxCoeff(), 1e-5);
}

TEST(NormGradient, SphereRandersAndEuclidRanders) {
  auto s = get_metric("sphere_randers", {{"eps", 0.5}});
  EXPECT_LT(beta_norm_gradient_check(s.metric, vec({1.0, 0.3})).cwiseAbs().maxCoeff(), 1e-5);
  auto e = get_metric("euclid_randers");
  EXPECT_LT(beta_norm_gradient_check(e.metric, vec({0.1, 0.2})).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(NormGradient, ZeroNorm) {
  auto e = get_metric("fish_tank");
  try {
    beta_norm_gradient_check(e.metric, vec({0.0, 0.0}));
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), Errc::zero_norm);
  }
}

TEST(MetricCompatibility, RandomCatalogPoints) {
  std::mt19937_64 rng(42);
  for (const auto& name : catalog_names()) {
    auto e = get_metric(name);
    auto dom = e.metric.domain.shrunk(0.2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int tested = 0;
    for (int t = 0; t < 40 && tested < 5; ++t) {
      Eigen::VectorXd x = dom.lower;
      for (int i = 0; i < e.metric.dim; ++i) x(i) += u(rng) * (dom.upper(i) - dom.lower(i));
      if (!dom.contains(x)) continue;
      ++tested;
      EXPECT_LT(metric_compatibility_residual(e.metric, x), 1e-6) << name;
    }
    EXPECT_GT(tested, 0) << name;
  }
}
