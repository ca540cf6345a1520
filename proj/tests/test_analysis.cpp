#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"

using namespace album;
using fixtures::vec;

TEST(Gamma, Examples) {
  const CompositeProblem s = gallery::sphere_problem(vec({1.0, 0.0}), 0.5);
  EXPECT_NEAR(gamma_at(s, vec({0.7, 0.0})), 1.4, 1e-15);
  const CompositeProblem id = fixtures::two_ball_feasibility();
  EXPECT_NEAR(gamma_at(id, vec({1.0, 2.0, 3.0, 4.0})), 1.0, 1e-15);
  Matrix f(2, 2);
  f << 1.0, 0.0, 0.0, 2.0;
  const CompositeProblem lin = gallery::linear_composite_problem(Matrix::Identity(2, 2), Vector::Zero(2), f, {});
  EXPECT_NEAR(gamma_at(lin, vec({5.0, -1.0})), 1.0, 1e-15);
}

TEST(Gamma, ConstantForLinearMaps) {
  const CompositeProblem p = fixtures::linear_composite_l1();
  const double g0 = gamma_at(p, Vector::Zero(4));
  std::mt19937_64 gen(41);
  std::normal_distribution<double> normal(0.0, 10.0);
  for (int i = 0; i < 20; ++i) {
    Vector x(4);
    for (int j = 0; j < 4; ++j) x(j) = normal(gen);
    EXPECT_EQ(gamma_at(p, x), g0);
  }
  EXPECT_NEAR(g0, p.gamma, 1e-12);
}

TEST(DualBound, Examples) {
  const DualBound a = dual_bound_constants(1.0, 0.0, 123.0, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(a.d1, 8.0);
  EXPECT_DOUBLE_EQ(a.d2, 2.0);
  EXPECT_THROW(dual_bound_constants(1.0, 0.0, 0.0, 0.0, 1.0), AlbumError);
  EXPECT_DOUBLE_EQ(dual_bound_constants(1.0, 0.0, 0.0, 1.0, 2.0).d2, 0.5);
  EXPECT_THROW(dual_bound_constants(1.0, 0.0, 0.0, 1.0, 0.0), AlbumError);
  // Nonlinear F: the multiplier bound enters d1 only.
  const DualBound n = dual_bound_constants(1.0, 2.0, 3.0, 1.0, 2.0);
  EXPECT_DOUBLE_EQ(n.d1, 2.0 * 64.0 / 4.0);
}

TEST(Thresholds, Linear) {
  EXPECT_DOUBLE_EQ(linear_threshold_rho(1.0, 2.0, 1.0), 6.0);
  EXPECT_DOUBLE_EQ(linear_threshold_rho(2.0, 2.0, 2.0), 4.0);
  const DualBound d = dual_bound_constants(1.0, 0.0, 0.0, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(linear_threshold_rho(1.0, d.d1, d.d2), 20.0);
  EXPECT_THROW(linear_threshold_rho(0.0, 1.0, 1.0), AlbumError);
}

TEST(Thresholds, Adm) {
  EXPECT_DOUBLE_EQ(adm_threshold_rho(1.0, 1.0, 1.0), 20.0);
  EXPECT_DOUBLE_EQ(adm_threshold_rho(0.0, 2.0, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(adm_threshold_rho(1.3, 4.0, 0.7), 0.5 * adm_threshold_rho(1.3, 2.0, 0.7));
  EXPECT_THROW(adm_threshold_rho(1.0, 0.0, 1.0), AlbumError);
  EXPECT_THROW(adm_threshold_rho(1.0, 1.0, 0.0), AlbumError);
  EXPECT_THROW(adm_threshold_rho(-1.0, 1.0, 1.0), AlbumError);
}

TEST(Album3Thresholds, ReferenceData) {
  const ThresholdBundle t = album3_thresholds(1.0, 1.0, 1.0);
  EXPECT_EQ(t.eta, 17.0);
  EXPECT_NEAR(t.rho_bar, 8.0 / 17.0 * (2.0 + std::sqrt(21.0)), 1e-10);
  EXPECT_NEAR(t.rho_bar, 3.0977, 1e-4);
  EXPECT_NEAR(t.delta_psi(t.rho_bar), 0.0, 1e-8);
  EXPECT_EQ(t.delta_psi(4.0), 80.0);
  const auto [mu1, mu2] = t.mu_interval(4.0);
  EXPECT_NEAR(mu1, (60.0 - std::sqrt(80.0)) / 16.0, 1e-14);
  EXPECT_NEAR(mu1, 3.1910, 1e-4);
  EXPECT_NEAR(mu2, 4.3090, 1e-4);
  EXPECT_LT(t.psi(0.5 * (mu1 + mu2) - 4.0, 4.0), 0.0);
  const auto [t1, t2] = t.t_roots(4.0);
  EXPECT_NEAR(t.psi(t1, 4.0), 0.0, 1e-8);
  EXPECT_NEAR(t.psi(t2, 4.0), 0.0, 1e-8);
  EXPECT_LT(t1, t2);
  EXPECT_LT(mu1, mu2);
}

TEST(Album3Thresholds, Errors) {
  EXPECT_THROW(album3_thresholds(1.0, 1.0, 1.5), AlbumError);  // cond = 2.25
  EXPECT_THROW(album3_thresholds(1.0, 0.0, 1.0), AlbumError);
  const ThresholdBundle t = album3_thresholds(1.0, 1.0, 1.0);
  EXPECT_THROW(t.mu_interval(3.0), AlbumError);
  EXPECT_THROW(t.t_roots(t.rho_bar), AlbumError);
}

TEST(Album3Thresholds, SampledPairsHavePositiveDescent) {
  std::mt19937_64 gen(43);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (const auto& [ell, gamma, norm_f] : std::vector<std::tuple<double, double, double>>{
           {1.0, 1.0, 1.0}, {2.5, 1.0, 1.3}, {0.3, 2.0, 2.2}}) {
    const ThresholdBundle t = album3_thresholds(ell, gamma, norm_f);
    for (int i = 0; i < 100; ++i) {
      const double rho = t.rho_bar * (1.0 + 1e-3 + 4.0 * unif(gen));
      const auto [mu1, mu2] = t.mu_interval(rho);
      const double mu = mu1 + (mu2 - mu1) * (0.01 + 0.98 * unif(gen));
      EXPECT_LT(t.psi(mu - rho * gamma * gamma, rho), 0.0);
      EXPECT_GT(t.descent_margin(rho, mu), 0.0) << "rho " << rho << " mu " << mu;
    }
  }
}

TEST(DualBoundCheck, SyntheticTraces) {
  std::vector<IterationRecord> trace(3);
  for (int k = 0; k < 3; ++k) {
    trace[k].k = k;
    trace[k].step_x = 1.0;
    trace[k].prev_step_x = 1.0;
    trace[k].step_y = 1.0;
  }
  EXPECT_TRUE(check_dual_bound(trace, 0.5, 0.5, 1));
  trace[2].step_y = 2.0;
  EXPECT_FALSE(check_dual_bound(trace, 0.5, 0.5, 1));
  EXPECT_TRUE(check_dual_bound(std::vector<IterationRecord>(trace.begin(), trace.begin() + 1), 0.0, 0.0, 1));
}

TEST(DualBoundCheck, ConvergedLinearRun) {
  const CompositeProblem p = fixtures::linear_composite_l1();
  AlgoParams params;
  params.rho0 = 5.0;
  params.delta = 5.0;
  const RunReport r = run(p, MapKind::album2(), params);
  ASSERT_TRUE(r.converged);
  const DualBound d = linear_dual_bound(p, r.records.back().constants);
  EXPECT_TRUE(check_dual_bound(r.records, d.d1, d.d2, 1));
}

TEST(SubgradientBound, Examples) {
  const SubgradientBound s = subgradient_bound_constants(1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 1.0, 1.0, 2.0);
  EXPECT_DOUBLE_EQ(s.sigma1, 16.0);
  EXPECT_DOUBLE_EQ(s.sigma2, 3.0);
  const SubgradientBound twice = subgradient_bound_constants(1.0, 2.0, 1.0, 1.0, 0.0, 0.0, 1.0, 1.0, 2.0);
  EXPECT_DOUBLE_EQ(twice.sigma2, 2.0 * s.sigma2);
  EXPECT_LT(subgradient_bound_constants(1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 1e12, 1.0, 2.0).sigma2, 1e-11);
  EXPECT_THROW(subgradient_bound_constants(1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 2.0), AlbumError);
}
