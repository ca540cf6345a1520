#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace album;
using fixtures::vec;

namespace {

CompositeProblem half_norm_identity(Eigen::Index n) {
  CompositeProblem p;
  p.name = "half_norm";
  p.n = n;
  p.m = n;
  p.f0 = [](const Vector& x) { return FirstOrder{0.5 * x.squaredNorm(), x}; };
  p.linear_F = Matrix::Identity(n, n);
  p.F = linear_map_oracle(*p.linear_F);
  p.h = zero_regularizer();
  p.lipschitz_f0 = 1.0;
  p.gamma = 1.0;
  return p;
}

}  // namespace

TEST(Model, EvalF0Examples) {
  const CompositeProblem p = half_norm_identity(2);
  const FirstOrder f = eval_f0(p, vec({3.0, 4.0}));
  EXPECT_DOUBLE_EQ(f.value, 12.5);
  EXPECT_EQ(f.gradient, vec({3.0, 4.0}));

  CompositeProblem z = p;
  z.f0 = [](const Vector& x) { return FirstOrder{0.0, Vector::Zero(x.size())}; };
  EXPECT_EQ(eval_f0(z, vec({1.0, -7.0})).value, 0.0);
  EXPECT_EQ(eval_f0(z, vec({1.0, -7.0})).gradient, Vector::Zero(2));

  const CompositeProblem s = gallery::sphere_problem(vec({2.0, 0.0}), 0.5);
  const FirstOrder lin = eval_f0(s, vec({1.0, 1.0}));
  EXPECT_DOUBLE_EQ(lin.value, 2.0);
  EXPECT_EQ(lin.gradient, vec({2.0, 0.0}));
}

TEST(Model, EvalFExamples) {
  const CompositeProblem s = gallery::sphere_problem(vec({2.0, 0.0}), 0.5);
  const MapJet sj = eval_F(s, vec({1.0, 2.0}));
  EXPECT_DOUBLE_EQ(sj.value(0), 5.0);
  EXPECT_EQ(sj.jacobian.rows(), 1);
  EXPECT_DOUBLE_EQ(sj.jacobian(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(sj.jacobian(0, 1), 4.0);

  const CompositeProblem id = half_norm_identity(2);
  const MapJet ij = eval_F(id, vec({1.0, 2.0}));
  EXPECT_EQ(ij.value, vec({1.0, 2.0}));
  EXPECT_EQ(ij.jacobian, Matrix::Identity(2, 2));

  Matrix f(2, 2);
  f << 1.0, 0.0, 0.0, 2.0;
  CompositeProblem lin = id;
  lin.linear_F = f;
  lin.F = linear_map_oracle(f);
  const MapJet lj = eval_F(lin, vec({1.0, 1.0}));
  EXPECT_EQ(lj.value, vec({1.0, 2.0}));
  EXPECT_EQ(lj.jacobian, f);
}

TEST(Model, DimensionMismatchIsStructuredError) {
  const CompositeProblem p = half_norm_identity(2);
  try {
    eval_f0(p, vec({1.0, 2.0, 3.0}));
    FAIL() << "expected an error";
  } catch (const AlbumError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
  EXPECT_THROW(eval_F(p, vec({1.0})), AlbumError);
  EXPECT_THROW(in_zone(p, vec({1.0})), AlbumError);
  EXPECT_THROW(prox_h(p, vec({1.0}), 1.0), AlbumError);
  EXPECT_THROW(prox_h(p, vec({1.0, 2.0}), 0.0), AlbumError);
}

TEST(Model, ProxExamples) {
  CompositeProblem p = half_norm_identity(1);
  p.h = weighted_l1(vec({1.0}));
  EXPECT_DOUBLE_EQ(prox_h(p, vec({3.0}), 1.0)(0), 2.0);

  CompositeProblem l0 = half_norm_identity(2);
  l0.h = sparsity_indicator(1);
  EXPECT_EQ(prox_h(l0, vec({3.0, -4.0}), 0.3), vec({0.0, -4.0}));
  EXPECT_EQ(prox_h(l0, vec({3.0, -4.0}), 7.0), vec({0.0, -4.0}));

  CompositeProblem sph = half_norm_identity(2);
  sph.h = sphere_indicator(Vector::Zero(2), 1.0);
  EXPECT_EQ(prox_h(sph, vec({0.0, 3.0}), 1.0), vec({0.0, 1.0}));
  EXPECT_EQ(prox_h(sph, vec({0.0, 0.0}), 1.0), vec({1.0, 0.0}));
}

TEST(Model, ZoneExamples) {
  const CompositeProblem s = gallery::sphere_problem(vec({1.0, 0.0, 0.0}), 0.5);
  EXPECT_DOUBLE_EQ(s.d_bar, 0.75);
  EXPECT_TRUE(in_zone(s, vec({0.0, 1.0, 0.0})));
  EXPECT_FALSE(in_zone(s, Vector::Zero(3)));
  const CompositeProblem lin = fixtures::linear_composite_l1();
  EXPECT_TRUE(std::isinf(lin.d_bar));
  EXPECT_TRUE(in_zone(lin, Vector::Constant(4, 1e6)));
}

TEST(Model, DefaultZonePredicateIsTheEnlargement) {
  CompositeProblem s = gallery::sphere_problem(vec({1.0, 0.0}), 0.5);
  s.zone_predicate = nullptr;
  EXPECT_TRUE(in_zone(s, vec({0.6, 0.0})));   // |0.36 - 1| <= 0.75
  EXPECT_FALSE(in_zone(s, vec({0.4, 0.0})));  // |0.16 - 1| > 0.75
  EXPECT_FALSE(in_zone(s, vec({1.33, 0.0})));  // |1.7689 - 1| > 0.75
}

TEST(Model, FeasiblePointsLieInTheZone) {
  std::mt19937_64 gen(11);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (const CompositeProblem& p : fixtures::gallery_instances()) {
    for (int trial = 0; trial < 100; ++trial) {
      Vector x(p.n);
      for (Eigen::Index i = 0; i < p.n; ++i) x(i) = normal(gen);
      if (p.name == "sphere") x.normalize();
      if (p.name == "feasibility") {
        // Project onto a common point of both balls: blocks equal inside the lens.
        const Vector z = 0.4 * x.head(2).normalized() + vec({0.5, 0.0});
        x << z, z;
      }
      if (p.name == "sparsity") {
        for (Eigen::Index i = 2; i < p.n; ++i) x(i) = 0.0;
      }
      ASSERT_LE(p.h.dist_dom(eval_F(p, x).value), 1e-12) << p.name;
      EXPECT_TRUE(in_zone(p, x)) << p.name;
    }
  }
}

TEST(Model, ProxOutputIsInDomain) {
  std::mt19937_64 gen(12);
  std::normal_distribution<double> normal(0.0, 3.0);
  for (const CompositeProblem& p : fixtures::gallery_instances()) {
    for (int trial = 0; trial < 50; ++trial) {
      Vector v(p.m);
      for (Eigen::Index i = 0; i < p.m; ++i) v(i) = normal(gen);
      const Vector u = prox_h(p, v, 0.1 + trial * 0.05);
      EXPECT_TRUE(std::isfinite(p.h.value(u))) << p.name;
      EXPECT_EQ(p.h.dist_dom(u), 0.0) << p.name;
    }
  }
}

TEST(Model, FiniteDifferenceOracles) {
  std::mt19937_64 gen(13);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (const CompositeProblem& p : fixtures::gallery_instances()) {
    for (int trial = 0; trial < 20; ++trial) {
      Vector x(p.n);
      for (Eigen::Index i = 0; i < p.n; ++i) x(i) = normal(gen);
      const Vector g = eval_f0(p, x).gradient;
      const Vector fd = oracles::fd_gradient([&](const Vector& z) { return eval_f0(p, z).value; }, x);
      EXPECT_LE((g - fd).norm(), 1e-6 * (1.0 + g.norm())) << p.name;
      const Matrix j = eval_F(p, x).jacobian;
      for (Eigen::Index r = 0; r < p.m; ++r) {
        const Vector row = j.row(r).transpose();
        const Vector fdr = oracles::fd_gradient([&](const Vector& z) { return eval_F(p, z).value(r); }, x);
        EXPECT_LE((row - fdr).norm(), 1e-6 * (1.0 + row.norm())) << p.name << " row " << r;
      }
    }
  }
}

TEST(Model, AlgoParamsValidation) {
  AlgoParams a;
  EXPECT_NO_THROW(a.validate());
  a.tau_fraction = 0.5;
  EXPECT_THROW(a.validate(), AlbumError);
  a.tau_fraction = 0.25;
  a.rho0 = 0.0;
  EXPECT_THROW(a.validate(), AlbumError);
  a.rho0 = 1.0;
  a.delta = -1.0;
  EXPECT_THROW(a.validate(), AlbumError);
}

TEST(Model, ProblemValidation) {
  CompositeProblem p = half_norm_identity(2);
  EXPECT_NO_THROW(validate(p));
  p.gamma = 0.0;
  EXPECT_THROW(validate(p), AlbumError);
  p.gamma = 1.0;
  p.linear_F = Matrix::Identity(3, 2);
  EXPECT_THROW(validate(p), AlbumError);
}

TEST(Model, RegularizerCatalogErrors) {
  EXPECT_THROW(weighted_l1(vec({1.0, 0.0})), AlbumError);
  EXPECT_THROW(sphere_indicator(Vector::Zero(2), -1.0), AlbumError);
}
