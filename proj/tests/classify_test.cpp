#include <cmath>

#include <gtest/gtest.h>

#include "finsler/catalog.hpp"
#include "finsler/classify.hpp"

using namespace finsler;

namespace {

std::vector<Eigen::VectorXd> grid3(const MetricSpec& m) { return make_grid(m.domain, std::vector<int>(m.dim, 3), 0.1); }

ClassificationReport run(const std::string& name, const ParamMap& p = {}) {
  auto e = get_metric(name, p);
  return classify(e.metric, e.phi, grid3(e.metric), make_directions(e.metric.dim, 8));
}

PredicateVerdict pv(bool v) {
  PredicateVerdict p;
  p.verdict = v;
  return p;
}

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return Errc::config;
}

}  // namespace

TEST(Sampling, GridAndDirections) {
  auto e = get_metric("fish_tank");
  auto g = make_grid(e.metric.domain, {5, 5}, 0.05);
  EXPECT_FALSE(g.empty());
  EXPECT_LT(g.size(), 25u);
  for (const auto& x : g) EXPECT_TRUE(e.metric.domain.contains(x));
  auto d2 = make_directions(2, 16);
  ASSERT_EQ(d2.size(), 16u);
  for (const auto& y : d2) EXPECT_NEAR(y.norm(), 1.0, 1e-14);
  auto d3 = make_directions(3, 20);
  ASSERT_EQ(d3.size(), 20u);
  for (const auto& y : d3) EXPECT_NEAR(y.norm(), 1.0, 1e-14);
}

TEST(Sampling, EmptyGrid) {
  ChartDomain d = get_metric("euclid").metric.domain;
  d.predicate = [](const Eigen::VectorXd&) { return false; };
  EXPECT_EQ(code_of([&] { make_grid(d, {3, 3}, 0.1); }), Errc::empty_grid);
}

TEST(GeneralizedBerwald, CatalogVerdicts) {
  auto lie = get_metric("lie_group");
  auto v = is_generalized_berwald(lie.metric, grid3(lie.metric));
  EXPECT_TRUE(v.verdict);
  EXPECT_NEAR(v.details.at("b0"), std::sqrt(2.0 / 3.0), 1e-8);
  auto ft = get_metric("fish_tank");
  EXPECT_FALSE(is_generalized_berwald(ft.metric, grid3(ft.metric)).verdict);
  auto sr = get_metric("sphere_randers", {{"eps", 0.5}});
  EXPECT_FALSE(is_generalized_berwald(sr.metric, grid3(sr.metric)).verdict);
  auto bs = get_metric("bao_shen");
  EXPECT_TRUE(is_generalized_berwald(bs.metric, grid3(bs.metric)).verdict);
}

TEST(KillingConstantLength, CatalogVerdicts) {
  auto er = get_metric("euclid_randers");
  EXPECT_TRUE(killing_constant_length(er.metric, grid3(er.metric)).verdict);
  auto lie = get_metric("lie_group");
  EXPECT_FALSE(killing_constant_length(lie.metric, grid3(lie.metric)).verdict);
  auto sr = get_metric("sphere_randers", {{"eps", 0.5}});
  EXPECT_FALSE(killing_constant_length(sr.metric, grid3(sr.metric)).verdict);
  auto pk = get_metric("proj_sphere_killing");
  EXPECT_TRUE(killing_constant_length(pk.metric, grid3(pk.metric)).verdict);
}

TEST(RandersShortcut, Verdicts) {
  auto sr = get_metric("sphere_randers", {{"eps", 0.5}});
  EXPECT_TRUE(randers_s0_shortcut(sr.metric, sr.phi, grid3(sr.metric)).verdict);
  auto lie = get_metric("lie_group");
  EXPECT_FALSE(randers_s0_shortcut(lie.metric, lie.phi, grid3(lie.metric)).verdict);
  auto mw = get_metric("mw");
  EXPECT_EQ(code_of([&] { randers_s0_shortcut(mw.metric, mw.phi, grid3(mw.metric)); }), Errc::wrong_phi_variant);
}

TEST(CurvatureFlags, LieGroupNothingVanishes) {
  auto lie = get_metric("lie_group");
  auto f = curvature_flags(lie.metric, lie.phi, grid3(lie.metric), make_directions(2, 8));
  EXPECT_FALSE(f.berwald.verdict);
  EXPECT_FALSE(f.landsberg.verdict);
  EXPECT_FALSE(f.douglas.verdict);
  EXPECT_FALSE(f.s_zero.verdict);
  EXPECT_FALSE(f.riemannian.verdict);
  EXPECT_EQ(f.n_singular, 0);
}

TEST(CurvatureFlags, LogicalClosure) {
  for (const char* name : {"euclid_randers", "euclid", "sphere_randers", "fish_tank"}) {
    auto e = get_metric(name);
    Tolerances tol;
    auto f = curvature_flags(e.metric, e.phi, grid3(e.metric), make_directions(2, 8), tol);
    if (!f.berwald.verdict) continue;
    EXPECT_LT(f.landsberg.residual, 10 * tol.landsberg) << name;
    EXPECT_LT(f.douglas.residual, 10 * tol.douglas) << name;
    EXPECT_LT(f.s_zero.residual, 10 * tol.s_zero) << name;
  }
}

TEST(Monotonicity, LooseningNeverFlipsTrueToFalse) {
  const std::vector<double> ladder = {1e-12, 1e-9, 1e-6, 1e-3, 1.0};
  for (const char* name : {"lie_group", "fish_tank", "euclid_randers", "sphere_randers"}) {
    auto e = get_metric(name);
    auto g = grid3(e.metric);
    bool gb = false, kl = false, rs = false;
    for (double t : ladder) {
      const bool gb_t = is_generalized_berwald(e.metric, g, t).verdict;
      const bool kl_t = killing_constant_length(e.metric, g, t).verdict;
      const bool rs_t = randers_s0_shortcut(e.metric, e.phi, g, t).verdict;
      EXPECT_TRUE(gb_t || !gb) << name;
      EXPECT_TRUE(kl_t || !kl) << name;
      EXPECT_TRUE(rs_t || !rs) << name;
      gb = gb_t;
      kl = kl_t;
      rs = rs_t;
    }
  }
  auto lie = get_metric("lie_group");
  auto g = grid3(lie.metric);
  auto dirs = make_directions(2, 4);
  bool prev_b = false, prev_s = false;
  for (double t : ladder) {
    Tolerances tol;
    tol.berwald = tol.s_zero = t;
    auto f = curvature_flags(lie.metric, lie.phi, g, dirs, tol);
    EXPECT_TRUE(f.berwald.verdict || !prev_b);
    EXPECT_TRUE(f.s_zero.verdict || !prev_s);
    prev_b = f.berwald.verdict;
    prev_s = f.s_zero.verdict;
  }
}

TEST(UnicornFit, ExactFamilyMember) {
  auto fit = unicorn_fit(PhiFamily::unicorn({1.0, 0.3, 0.7, 1.0}), 1.0);
  EXPECT_NEAR(fit.k, 0.3, 1e-8);
  EXPECT_NEAR(fit.q, 0.7, 1e-8);
  EXPECT_LT(fit.rms, 1e-9);
  EXPECT_EQ(fit.n_samples, 20);
}

TEST(UnicornFit, RiemannSqrtAndRanders) {
  auto fit = unicorn_fit(PhiFamily::riemann_sqrt(2.0), 0.8);
  EXPECT_NEAR(fit.k, 2.0, 1e-8);
  EXPECT_NEAR(fit.q, 0.0, 1e-8);
  EXPECT_GT(unicorn_fit(PhiFamily::randers(), 0.8).rms, 0.01);
}

TEST(UnicornFit, Errors) {
  std::vector<double> s(10, 0.3), Q(10, 1.0);
  EXPECT_EQ(code_of([&] { unicorn_fit(s, Q, 0.8); }), Errc::rank_deficient);
  EXPECT_THROW(unicorn_fit(std::vector<double>{0.1, 0.2}, std::vector<double>{1, 1}, 0.8), Error);
}

TEST(Verdict, DecisionTable) {
  ClassificationReport r;
  EXPECT_EQ(code_of([&] { final_verdict(r); }), Errc::missing_reports);
  r.gb = pv(true);
  EXPECT_EQ(code_of([&] { final_verdict(r); }), Errc::missing_reports);
  CurvatureFlags f;
  f.s_zero = pv(false);
  r.flags = f;
  r.gb = pv(false);
  EXPECT_EQ(final_verdict(r), Verdict::not_generalized_berwald);
  r.gb = pv(true);
  EXPECT_EQ(final_verdict(r), Verdict::s_nonzero);
  r.flags->s_zero = pv(true);
  r.flags->riemannian = pv(true);
  EXPECT_EQ(final_verdict(r), Verdict::riemannian_isotropic);
  r.flags->riemannian = pv(false);
  r.flags->berwald = pv(true);
  r.flags->k_flat = pv(true);
  EXPECT_EQ(final_verdict(r), Verdict::locally_minkowski_like);
  r.flags->k_flat = pv(false);
  EXPECT_EQ(final_verdict(r), Verdict::inconclusive);
  r.killing_cl = pv(true);
  r.unicorn_fit = UnicornFit{0.3, 0.7, 1e-10, 20};
  EXPECT_EQ(final_verdict(r), Verdict::unicorn_case);
  r.unicorn_fit->rms = 0.1;
  EXPECT_EQ(final_verdict(r), Verdict::inconclusive);
}

TEST(Classify, CatalogVerdicts) {
  EXPECT_EQ(run("euclid_randers").verdict, Verdict::locally_minkowski_like);
  EXPECT_EQ(run("lie_group").verdict, Verdict::s_nonzero);
  EXPECT_EQ(run("sphere_randers", {{"eps", 0.5}}).verdict, Verdict::not_generalized_berwald);
  EXPECT_EQ(run("sphere_randers", {{"eps", 0.0}}).verdict, Verdict::riemannian_isotropic);
}

TEST(Classify, ReportShape) {
  auto r = run("lie_group");
  EXPECT_EQ(r.n_points, 9);
  EXPECT_EQ(r.n_directions, 8);
  ASSERT_TRUE(r.gb && r.flags);
  EXPECT_EQ(r.gb->n_samples, 9);
  EXPECT_GT(r.flags->s_zero.residual, r.flags->s_zero.threshold);
  EXPECT_EQ(to_string(r.verdict), "SNonzero");
}
