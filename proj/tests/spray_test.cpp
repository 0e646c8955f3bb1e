#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "finsler/catalog.hpp"
#include "finsler/classify.hpp"
#include "finsler/spray.hpp"

using namespace finsler;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double d : v) out(i++) = d;
  return out;
}

double rel(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

std::vector<Eigen::VectorXd> nine_points(const MetricSpec& m) {
  return make_grid(m.domain, std::vector<int>(m.dim, 3), 0.1);
}

// F = |y| + 0.2 <x, y>: beta = d(0.1 |x|^2) is closed.
CatalogEntry closed_randers() {
  ChartDomain d;
  d.lower = Eigen::VectorXd::Constant(2, -1.0);
  d.upper = Eigen::VectorXd::Constant(2, 1.0);
  CatalogEntry e;
  e.name = "closed";
  e.metric = custom_metric("closed", 2, {"1", "0", "0", "1"}, {"0.2*x1", "0.2*x2"}, {}, d);
  e.phi = PhiFamily::randers();
  return e;
}

}  // namespace

TEST(SprayAlpha, EuclidAndMw) {
  auto e = get_metric("euclid");
  EXPECT_LT(spray_alpha(e.metric, vec({1, 1}), vec({0.3, 0.2})).cwiseAbs().maxCoeff(), 1e-14);
  auto m = get_metric("mw");
  auto G = spray_alpha(m.metric, vec({0, 0}), vec({0, 1}));
  EXPECT_NEAR(G(0), -0.5, 1e-9);
  EXPECT_NEAR(G(1), 0.0, 1e-9);
}

TEST(SprayGeneric, MwRiemannian) {
  auto m = get_metric("mw");
  auto G = spray_generic(m.metric, PhiFamily::riemann_sqrt(0.0), vec({0, 0}), vec({0, 1}));
  EXPECT_NEAR(G(0), -0.5, 1e-7);
  auto lie = get_metric("lie_group");
  const auto x = vec({0.4, 1.3}), y = vec({0.7, -0.2});
  EXPECT_LT(rel(spray_generic(lie.metric, PhiFamily::riemann_sqrt(0.0), x, y), spray_alpha(lie.metric, x, y)), 1e-7);
}

TEST(SprayAb, ParallelFormReducesToAlpha) {
  auto e = get_metric("euclid_randers");
  EXPECT_LT(spray_ab(e.metric, e.phi, vec({0.1, 0.2}), vec({1, 2})).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SprayAb, RouteEqualityOnCatalog) {
  for (const auto& name : catalog_names()) {
    auto e = get_metric(name);
    auto dirs = make_directions(e.metric.dim, 4);
    for (const auto& x : nine_points(e.metric)) {
      for (const auto& y : dirs) {
        const auto a = spray_ab(e.metric, e.phi, x, y);
        const auto g = spray_generic(e.metric, e.phi, x, y);
        EXPECT_LT(rel(a, g), 1e-6) << name;
      }
    }
  }
}

TEST(SprayAb, NamedPoints) {
  auto lie = get_metric("lie_group");
  EXPECT_LT(rel(spray_ab(lie.metric, lie.phi, vec({0, 1}), vec({1, 0})),
                spray_generic(lie.metric, lie.phi, vec({0, 1}), vec({1, 0}))), 1e-6);
  auto sr = get_metric("sphere_randers", {{"eps", 0.5}});
  EXPECT_LT(rel(spray_ab(sr.metric, sr.phi, vec({1, 0}), vec({1, 1})),
                spray_generic(sr.metric, sr.phi, vec({1, 0}), vec({1, 1}))), 1e-6);
}

TEST(SprayGeneric, FishTankHomogeneity) {
  auto e = get_metric("fish_tank");
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  for (int t = 0; t < 10; ++t) {
    const auto x = vec({u(rng), u(rng)});
    const auto y = vec({u(rng), u(rng)});
    const double lam = 1.7;
    const auto a = spray_generic(e.metric, e.phi, x, lam * y);
    const Eigen::VectorXd b = spray_generic(e.metric, e.phi, x, y) * lam * lam;
    EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-7);
  }
}

TEST(Berwald, MinkowskiAndRiemannian) {
  auto e = get_metric("euclid_randers");
  EXPECT_LT(max_abs(berwald(e.metric, e.phi, vec({0.1, 0.4}), vec({1, 0.5})).B), 1e-8);
  auto lie = get_metric("lie_group");
  auto bd = berwald(lie.metric, PhiFamily::riemann_sqrt(0.6), vec({0.2, 1.1}), vec({0.3, 1}));
  EXPECT_LT(max_abs(bd.B), 1e-7);
  EXPECT_LT(bd.E.cwiseAbs().maxCoeff(), 1e-7);
}

TEST(Berwald, LieGroupNonBerwald) {
  auto lie = get_metric("lie_group");
  const auto x = vec({0, 1}), y = vec({1, 0});
  auto bd = berwald(lie.metric, lie.phi, x, y);
  EXPECT_GT(max_abs(bd.B), 0.01);
  auto fd = fundamental(lie.metric, lie.phi, x, y);
  EXPECT_GT(max_abs(landsberg(fd, bd.B)), 1e-3);
  EXPECT_GT(max_abs(douglas(lie.metric, lie.phi, x, y)), 1e-3);
}

TEST(Berwald, SymmetryAndHomogeneity) {
  auto lie = get_metric("lie_group");
  const auto x = vec({0.3, 1.4}), y = vec({0.8, -0.3});
  auto B = berwald(lie.metric, lie.phi, x, y).B;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        EXPECT_NEAR(B(i, j, k, 0), B(i, k, j, 0), 1e-12);
        EXPECT_NEAR(B(i, j, k, 0), B(i, 0, k, j), 1e-12);
        // B is homogeneous of degree -1 so B^i_jkl y^l = 0
        EXPECT_NEAR(B(i, j, k, 0) * y(0) + B(i, j, k, 1) * y(1), 0.0, 1e-9);
      }
}

TEST(Landsberg, ZeroForZeroB) {
  auto e = get_metric("euclid_randers");
  auto fd = fundamental(e.metric, e.phi, vec({0, 0}), vec({1, 1}));
  Tensor4 B(2, 2, 2, 2);
  B.setZero();
  EXPECT_EQ(max_abs(landsberg(fd, B)), 0.0);
}

TEST(Douglas, ClosedRandersIsDouglas) {
  auto e = closed_randers();
  for (const auto& x : nine_points(e.metric))
    for (const auto& y : make_directions(2, 4)) {
      EXPECT_LT(max_abs(douglas(e.metric, e.phi, x, y)), 1e-6);
      EXPECT_GT(max_abs(berwald(e.metric, e.phi, x, y).B), 1e-3);
    }
  auto m = get_metric("euclid_randers");
  EXPECT_LT(max_abs(douglas(m.metric, m.phi, vec({0, 0}), vec({1, 0}))), 1e-8);
}

TEST(TwoDimensionalIdentities, BerwaldAndDouglas) {
  BundleOptions opts;
  opts.with_h = false;
  opts.with_s_formula = false;
  opts.with_flag = false;
  for (const char* name : {"lie_group", "sphere_randers", "euclid_randers"}) {
    auto e = get_metric(name);
    for (const auto& x : nine_points(e.metric)) {
      const auto y = vec({0.8, 0.6});
      auto cb = curvature_bundle(e.metric, e.phi, x, y, opts);
      EXPECT_LT(berwald_2d_identity(cb.fd, cb.B, cb.E, cb.L), 1e-6) << name;
      EXPECT_LT(douglas_2d_identity(cb.D, cb.B, cb.E, cb.dE, y), 1e-6) << name;
    }
  }
}

TEST(TwoDimensionalIdentities, RejectThreeDimensions) {
  auto e = get_metric("bao_shen");
  BundleOptions opts;
  opts.with_h = opts.with_s_formula = opts.with_flag = false;
  auto cb = curvature_bundle(e.metric, e.phi, vec({0.1, 0.2, 0.3}), vec({1, 0, 0}), opts);
  EXPECT_THROW(berwald_2d_identity(cb.fd, cb.B, cb.E, cb.L), Error);
}

TEST(Flag, EuclidFlat) {
  auto e = get_metric("euclid");
  auto fl = riemann_flag(e.metric, e.phi, vec({0.5, 0.5}), vec({1, 0}), vec({0, 1}));
  EXPECT_LT(fl.R.cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_NEAR(fl.K, 0.0, 1e-9);
}

TEST(Flag, RoundSphere) {
  auto e = get_metric("sphere_randers", {{"eps", 0.0}});
  for (const auto& x : nine_points(e.metric)) {
    auto fl = riemann_flag(e.metric, e.phi, x, vec({0.6, 0.8}), vec({-0.8, 0.6}));
    EXPECT_NEAR(fl.K, 1.0, 1e-5);
  }
}

TEST(Flag, FishTankFlat) {
  auto e = get_metric("fish_tank");
  for (const auto& x : nine_points(e.metric)) {
    auto fl = riemann_flag(e.metric, e.phi, x, vec({0.6, 0.8}), vec({1, 0}));
    EXPECT_NEAR(fl.K, 0.0, 1e-5);
  }
}

TEST(Flag, DegenerateFlag) {
  auto e = get_metric("euclid");
  try {
    riemann_flag(e.metric, e.phi, vec({0, 0}), vec({1, 0}), vec({2, 0}));
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), Errc::degenerate_flag);
  }
}

TEST(SCurvature, VanishingCases) {
  auto er = get_metric("euclid_randers");
  EXPECT_NEAR(s_curvature_def(er.metric, er.phi, vec({0.2, 0.1}), vec({1, 0.3})), 0.0, 1e-6);
  EXPECT_NEAR(s_curvature_formula(er.metric, er.phi, vec({0.2, 0.1}), vec({1, 0.3})).S, 0.0, 1e-12);
  auto ft = get_metric("fish_tank");
  for (const auto& x : nine_points(ft.metric)) {
    const auto grad = log_sigma_gradient(ft.metric, ft.phi, x);
    for (const auto& y : make_directions(2, 8)) EXPECT_LT(std::abs(s_curvature_def(ft.metric, ft.phi, x, y, grad)), 1e-5);
  }
  auto sr = get_metric("sphere_randers", {{"eps", 0.5}});
  for (const auto& x : nine_points(sr.metric))
    EXPECT_LT(std::abs(s_curvature_formula(sr.metric, sr.phi, x, vec({0.3, 1})).S), 1e-6);
}

TEST(SCurvature, LieGroupDualRoutes) {
  auto e = get_metric("lie_group");
  EXPECT_GT(std::abs(s_curvature_def(e.metric, e.phi, vec({0, 1}), vec({1, 0}))), 0.01);
  for (const auto& x : nine_points(e.metric)) {
    const auto grad = log_sigma_gradient(e.metric, e.phi, x);
    for (const auto& y : make_directions(2, 8)) {
      const double a = s_curvature_def(e.metric, e.phi, x, y, grad);
      const double b = s_curvature_formula(e.metric, e.phi, x, y).S;
      EXPECT_LT(std::abs(a - b), std::max(1e-7, 1e-4 * std::abs(b)));
    }
  }
}

TEST(HCurvature, BerwaldAndFishTank) {
  auto er = get_metric("euclid_randers");
  EXPECT_LT(h_curvature(er.metric, er.phi, vec({0, 0}), vec({1, 0})).cwiseAbs().maxCoeff(), 1e-8);
  auto ft = get_metric("fish_tank");
  for (const auto& x : nine_points(ft.metric))
    EXPECT_LT(h_curvature(ft.metric, ft.phi, x, vec({0.6, 0.8})).cwiseAbs().maxCoeff(), 1e-4);
  auto lie = get_metric("lie_group");
  auto H = h_curvature(lie.metric, lie.phi, vec({0, 1}), vec({1, 0}));
  EXPECT_TRUE(H.allFinite());
  EXPECT_NEAR(H(0, 1), H(1, 0), 1e-6);
}
