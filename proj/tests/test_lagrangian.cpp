#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace album;
using fixtures::vec;

namespace {

CompositeProblem scalar_identity() {
  CompositeProblem p;
  p.name = "scalar";
  p.n = 1;
  p.m = 1;
  p.f0 = [](const Vector& x) { return FirstOrder{0.0, Vector::Zero(x.size())}; };
  p.linear_F = Matrix::Identity(1, 1);
  p.F = linear_map_oracle(*p.linear_F);
  p.h = zero_regularizer();
  p.gamma = 1.0;
  return p;
}

}  // namespace

TEST(Lagrangian, AugmentedLagrangianExamples) {
  const CompositeProblem p = scalar_identity();
  EXPECT_DOUBLE_EQ(eval_aug_lagrangian(p, vec({1.0}), vec({0.0}), vec({2.0}), 2.0), 3.0);

  const CompositeProblem s = gallery::sphere_problem(vec({2.0, 0.0}), 0.5);
  EXPECT_DOUBLE_EQ(eval_aug_lagrangian(s, vec({-1.0, 0.0}), vec({1.0}), vec({1.0}), 5.0), -2.0);
}

TEST(Lagrangian, FeasiblePairGivesObjective) {
  const CompositeProblem p = fixtures::linear_composite_l1();
  const Vector x = vec({0.3, -1.0, 2.0, 0.5});
  const Vector u = eval_F(p, x).value;
  const double expect = eval_f0(p, x).value + p.h.value(u);
  EXPECT_NEAR(eval_aug_lagrangian(p, x, u, vec({4.0, -2.0, 1.0}), 7.0), expect, 1e-14);
}

TEST(Lagrangian, InfiniteWhenOutsideDomain) {
  const CompositeProblem s = gallery::sphere_problem(vec({2.0, 0.0}), 0.5);
  EXPECT_TRUE(std::isinf(eval_aug_lagrangian(s, vec({1.0, 0.0}), vec({0.5}), vec({0.0}), 1.0)));
}

TEST(Lagrangian, GradientExamples) {
  const CompositeProblem s = gallery::sphere_problem(vec({2.0, 0.0}), 0.5);
  const Vector g = grad_x_aug_lagrangian(s, vec({-1.0, 0.0}), vec({1.0}), vec({1.0}), 3.0);
  EXPECT_EQ(g, vec({0.0, 0.0}));

  const CompositeProblem p = fixtures::l1_equality_instance();
  const Vector x = vec({0.1, 0.2, -0.4, 1.0});
  const Vector y = vec({0.7, -0.3});
  const MapJet jet = eval_F(p, x);
  const Vector expect = eval_f0(p, x).gradient + jet.jacobian.transpose() * y;
  EXPECT_LE((grad_x_aug_lagrangian(p, x, jet.value, y, 4.0) - expect).norm(), 1e-14);
}

TEST(Lagrangian, GradientMatchesFiniteDifferences) {
  std::mt19937_64 gen(21);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (const CompositeProblem& p : fixtures::gallery_instances()) {
    for (int trial = 0; trial < 20; ++trial) {
      Vector x(p.n), y(p.m);
      for (Eigen::Index i = 0; i < p.n; ++i) x(i) = normal(gen);
      for (Eigen::Index i = 0; i < p.m; ++i) y(i) = normal(gen);
      const double rho = 0.5 + trial;
      const Vector u = prox_h(p, eval_F(p, x).value + 0.3 * y, 1.0 / rho);
      const Vector g = grad_x_aug_lagrangian(p, x, u, y, rho);
      const Vector fd = oracles::fd_gradient(
          [&](const Vector& z) { return eval_aug_lagrangian(p, z, u, y, rho); }, x);
      EXPECT_LE((g - fd).norm(), 1e-6 * std::max(1.0, g.norm())) << p.name;
    }
  }
}

TEST(Lagrangian, LyapunovExamples) {
  const CompositeProblem p = scalar_identity();
  const Vector x = vec({1.0}), u = vec({0.0}), y = vec({2.0});
  const double laug = eval_aug_lagrangian(p, x, u, y, 2.0);
  EXPECT_EQ(eval_lyapunov(p, x, u, y, x, 2.0, 7.0), laug);
  EXPECT_EQ(eval_lyapunov(p, x, u, y, vec({0.0}), 2.0, 0.0), laug);
  EXPECT_DOUBLE_EQ(eval_lyapunov(p, x, u, y, vec({0.0}), 2.0, 2.0), 5.0);
}

TEST(Lagrangian, MultiplierStepExamples) {
  CompositeProblem p = scalar_identity();
  EXPECT_EQ(multiplier_step(p, vec({2.0}), vec({2.0}), vec({5.0}), 3.0), vec({5.0}));
  CompositeProblem id2 = p;
  id2.n = id2.m = 2;
  id2.linear_F = Matrix::Identity(2, 2);
  id2.F = linear_map_oracle(*id2.linear_F);
  EXPECT_EQ(multiplier_step(id2, vec({1.0, 0.0}), vec({0.0, 0.0}), vec({0.0, 0.0}), 2.0), vec({2.0, 0.0}));
  EXPECT_EQ(multiplier_step(id2, vec({0.5, -0.5}), vec({0.0, 0.0}), vec({1.0, 1.0}), 1.0), vec({1.5, 0.5}));
}

TEST(Lagrangian, MultiplierIdentity) {
  std::mt19937_64 gen(22);
  std::normal_distribution<double> normal(0.0, 1.0);
  const CompositeProblem s = fixtures::seeded_sphere();
  for (int trial = 0; trial < 50; ++trial) {
    Vector x(s.n);
    for (Eigen::Index i = 0; i < s.n; ++i) x(i) = normal(gen);
    const Vector u = vec({1.0}), y = vec({normal(gen)});
    const double rho = 1.0 + trial;
    const Vector y_next = multiplier_step(s, x, u, y, rho);
    EXPECT_NEAR((y_next - y).norm(), rho * (eval_F(s, x).value - u).norm(),
                1e-12 * std::max(1.0, (y_next - y).norm()));
  }
}

TEST(Lagrangian, KktExamples) {
  const CompositeProblem s = gallery::sphere_problem(vec({2.0, 0.0}), 0.5);
  const KktResiduals r = kkt_residuals(s, vec({-1.0, 0.0}), vec({1.0}), vec({1.0}), 4.0);
  EXPECT_EQ(r.stationarity, 0.0);
  EXPECT_EQ(r.feasibility, 0.0);
  EXPECT_EQ(r.dual, 0.0);

  // Feasible, not stationary.
  const KktResiduals f = kkt_residuals(s, vec({0.0, 1.0}), vec({1.0}), vec({1.0}), 4.0);
  EXPECT_EQ(f.feasibility, 0.0);
  EXPECT_GT(f.stationarity, 0.0);

  const CompositeProblem p = scalar_identity();
  const KktResiduals g = kkt_residuals(p, vec({1.1}), vec({1.0}), vec({0.0}), 1.0);
  EXPECT_NEAR(g.feasibility, 0.1, 1e-15);
}

TEST(Lagrangian, CriticalPointChainOnSphere) {
  // At a KKT triple every component of the subgradient of E_beta at
  // (x, u, y, x) vanishes: grad_x Laug, F(x) - u, the u-part (y - y) and the
  // memory term.
  const Vector c = vec({0.6, -0.8, 0.0});
  const CompositeProblem s = gallery::sphere_problem(c, 0.5);
  const Vector x = -c / c.norm();
  const Vector u = vec({1.0});
  const Vector y = vec({c.norm() / 2.0});
  const double rho = 3.0;
  const KktResiduals r = kkt_residuals(s, x, u, y, rho);
  EXPECT_LE(r.max(), 1e-15);
  EXPECT_LE(grad_x_aug_lagrangian(s, x, u, y, rho).norm(), 1e-15);
  EXPECT_LE((eval_F(s, x).value - u).norm(), 1e-15);
  // The maximizer is critical as well, with y = -||c|| / 2.
  EXPECT_LE(kkt_residuals(s, c / c.norm(), u, vec({-c.norm() / 2.0}), rho).max(), 1e-15);
}
