#ifndef ALBUM_GALLERY_HPP_
#define ALBUM_GALLERY_HPP_

#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "album/analysis.hpp"
#include "album/model.hpp"
#include "album/prox.hpp"

namespace album::gallery {

// Ready-to-run composite problems with analytically derived constants.

/// Standard normal entries from a seeded generator (row-major fill order).
inline Matrix seeded_gaussian_matrix(Eigen::Index rows, Eigen::Index cols, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = normal(gen);
  return m;
}

inline Vector seeded_gaussian_vector(Eigen::Index n, unsigned seed) {
  return seeded_gaussian_matrix(n, 1, seed).col(0);
}

/// Linear objective <c, x> over the unit sphere, written as F(x) = ||x||^2
/// and h the indicator of {1}. Zone: ||x|| >= r1, where F is 2 r1 regular.
inline CompositeProblem sphere_problem(const Vector& c, double r1) {
  detail::require(c.size() > 0 && c.allFinite() && c.norm() > 0.0, ErrorCode::kInvalidArgument,
                  "sphere_problem: c must be a finite nonzero vector");
  detail::require(r1 > 0.0 && r1 < 1.0, ErrorCode::kInvalidArgument, "sphere_problem: r1 must lie in (0, 1)");
  CompositeProblem p;
  p.name = "sphere";
  p.n = c.size();
  p.m = 1;
  p.f0 = [c](const Vector& x) { return FirstOrder{c.dot(x), c}; };
  p.F = [](const Vector& x) {
    MapJet jet;
    jet.value = Vector::Constant(1, x.squaredNorm());
    jet.jacobian = 2.0 * x.transpose();
    return jet;
  };
  p.h = point_indicator(Vector::Ones(1));
  p.lipschitz_f0 = 0.0;
  p.lipschitz_F = 2.0;
  p.gamma = 2.0 * r1;
  p.d_bar = 1.0 - r1 * r1;
  p.zone_predicate = [r1](const Vector& x) { return x.norm() >= r1; };
  return p;
}

/// Hessian of (2(p-1))^{-1} sum_{i>=2} ||x_1 - x_i||^2 on R^{dim * p}.
inline Matrix feasibility_hessian(Eigen::Index blocks, Eigen::Index dim) {
  const double w = 1.0 / static_cast<double>(blocks - 1);
  Matrix h = Matrix::Zero(blocks * dim, blocks * dim);
  const Matrix eye = Matrix::Identity(dim, dim);
  h.block(0, 0, dim, dim) = eye;
  for (Eigen::Index i = 1; i < blocks; ++i) {
    h.block(i * dim, i * dim, dim, dim) = w * eye;
    h.block(0, i * dim, dim, dim) = -w * eye;
    h.block(i * dim, 0, dim, dim) = -w * eye;
  }
  return h;
}

/// Find a point in the intersection of p >= 2 sets in R^dim. Variables are
/// the stacked blocks (x_1, ..., x_p); F is the identity.
inline CompositeProblem feasibility_problem(std::vector<prox::ProjectableSet> sets, Eigen::Index dim) {
  const auto blocks = static_cast<Eigen::Index>(sets.size());
  detail::require(blocks >= 2, ErrorCode::kInvalidArgument, "feasibility_problem: needs at least two sets");
  detail::require(dim > 0, ErrorCode::kInvalidArgument, "feasibility_problem: dimension must be positive");
  const Eigen::Index n = blocks * dim;
  QuadraticForm form{feasibility_hessian(blocks, dim), Vector::Zero(n), 0.0};

  CompositeProblem p;
  p.name = "feasibility";
  p.n = n;
  p.m = n;
  p.lipschitz_f0 = lambda_max_symmetric(form.Q);
  p.f0 = quadratic_oracle(form);
  p.quadratic_f0 = std::move(form);
  p.linear_F = Matrix::Identity(n, n);
  p.F = linear_map_oracle(*p.linear_F);
  p.h = block_set_indicator(std::move(sets), dim);
  p.lipschitz_F = 0.0;
  p.gamma = 1.0;
  p.d_bar = kInfinity;
  p.zone_predicate = [](const Vector&) { return true; };
  return p;
}

/// 0.5 ||A x - b||^2 subject to ||x||_0 <= s.
inline CompositeProblem sparsity_problem(const Matrix& a, const Vector& b, Eigen::Index s) {
  detail::require_size(b.size(), a.rows(), "sparsity_problem b");
  detail::require(s >= 1 && s <= a.cols(), ErrorCode::kInvalidArgument,
                  "sparsity_problem: sparsity level must lie in [1, n]");
  const Eigen::Index n = a.cols();
  QuadraticForm form{a.transpose() * a, -a.transpose() * b, 0.5 * b.squaredNorm()};

  CompositeProblem p;
  p.name = "sparsity";
  p.n = n;
  p.m = n;
  p.lipschitz_f0 = lambda_max_symmetric(form.Q);
  p.f0 = quadratic_oracle(form);
  p.quadratic_f0 = std::move(form);
  p.linear_F = Matrix::Identity(n, n);
  p.F = linear_map_oracle(*p.linear_F);
  p.h = sparsity_indicator(s);
  p.gamma = 1.0;
  p.d_bar = kInfinity;
  p.zone_predicate = [](const Vector&) { return true; };
  return p;
}

/// Smooth objective with its gradient Lipschitz constant.
struct SmoothFunction {
  Eigen::Index n = 0;
  std::function<FirstOrder(const Vector&)> eval;
  double lipschitz = 0.0;
  std::optional<QuadraticForm> quadratic;
};

/// Smooth map with Jacobian Lipschitz constant and uniform regularity.
struct SmoothMap {
  Eigen::Index n = 0;
  Eigen::Index m = 0;
  std::function<MapJet(const Vector&)> eval;
  double lipschitz = 0.0;
  double gamma = 0.0;
  std::optional<Matrix> linear;
};

inline SmoothFunction quadratic_function(const Matrix& q_mat, const Vector& q_vec) {
  detail::require(q_mat.rows() == q_mat.cols(), ErrorCode::kDimensionMismatch, "Q must be square");
  detail::require_size(q_vec.size(), q_mat.rows(), "quadratic q");
  QuadraticForm form{q_mat, q_vec, 0.0};
  const double lip = std::max(std::abs(lambda_min_symmetric(q_mat)), std::abs(lambda_max_symmetric(q_mat)));
  return {q_mat.rows(), quadratic_oracle(form), lip, form};
}

/// Linear map x -> F x; F must have full row rank.
inline SmoothMap linear_map(const Matrix& f) {
  detail::require(f.rows() > 0 && f.rows() <= f.cols(), ErrorCode::kInvalidArgument,
                  "linear map must satisfy 0 < m <= n");
  const Matrix gram = f * f.transpose();
  const double lmin = lambda_min_symmetric(gram);
  detail::require(lmin > 1e-12 * std::max(1.0, gram.norm()), ErrorCode::kInvalidArgument,
                  "linear map is rank deficient (gamma = 0)");
  return {f.cols(), f.rows(), linear_map_oracle(f), 0.0, std::sqrt(lmin), f};
}

/// f0(x) + sum_i w_i |F_i(x)|.
inline CompositeProblem l1_equality_problem(const SmoothFunction& f0, const SmoothMap& map, const Vector& weights) {
  detail::require(f0.n == map.n, ErrorCode::kDimensionMismatch, "f0 and F dimensions differ");
  detail::require_size(weights.size(), map.m, "l1 weights");
  CompositeProblem p;
  p.name = "l1_equality";
  p.n = map.n;
  p.m = map.m;
  p.f0 = f0.eval;
  p.F = map.eval;
  p.h = weighted_l1(weights);
  p.lipschitz_f0 = f0.lipschitz;
  p.lipschitz_F = map.lipschitz;
  p.gamma = map.gamma;
  p.d_bar = kInfinity;
  p.linear_F = map.linear;
  p.quadratic_f0 = f0.quadratic;
  return p;
}

enum class HKind { kZero, kL1, kL0 };

struct HSpec {
  HKind kind = HKind::kZero;
  Vector weights;       // kL1
  Eigen::Index s = 0;   // kL0
};

/// 0.5 x^T Q x + q^T x + h(F x) with F of full row rank.
inline CompositeProblem linear_composite_problem(const Matrix& q_mat, const Vector& q_vec, const Matrix& f,
                                                 const HSpec& h) {
  const SmoothFunction f0 = quadratic_function(q_mat, q_vec);
  const SmoothMap map = linear_map(f);
  detail::require(f0.n == map.n, ErrorCode::kDimensionMismatch, "Q and F column counts differ");
  CompositeProblem p;
  p.name = "linear_composite";
  p.n = map.n;
  p.m = map.m;
  p.f0 = f0.eval;
  p.quadratic_f0 = f0.quadratic;
  p.lipschitz_f0 = lambda_max_symmetric(q_mat);
  p.F = map.eval;
  p.linear_F = f;
  p.lipschitz_F = 0.0;
  p.gamma = map.gamma;
  p.d_bar = kInfinity;
  switch (h.kind) {
    case HKind::kZero: p.h = zero_regularizer(); break;
    case HKind::kL1: p.h = weighted_l1(h.weights.size() ? h.weights : Vector::Ones(map.m)); break;
    case HKind::kL0:
      detail::require(h.s >= 1 && h.s <= map.m, ErrorCode::kInvalidArgument, "sparsity level must lie in [1, m]");
      p.h = sparsity_indicator(h.s);
      break;
  }
  p.zone_predicate = [](const Vector&) { return true; };
  return p;
}

/// sigma = lambda_min(Q) + rho lambda_min(F^T F), a strong convexity modulus
/// of x -> Laug_rho(x, u, y) for quadratic f0 and linear F.
inline double strong_convexity_modulus(const CompositeProblem& p, double rho) {
  detail::require(p.quadratic_f0.has_value() && p.linear_F.has_value(), ErrorCode::kInvalidArgument,
                  "strong convexity modulus needs quadratic f0 and linear F");
  const Matrix& f = *p.linear_F;
  return lambda_min_symmetric(p.quadratic_f0->Q) + rho * std::max(0.0, lambda_min_symmetric(f.transpose() * f));
}

/// Penalty rho* solving rho = adm_threshold_rho(L, sigma(rho), lambda_min(F F^T)),
/// the fixed point of the threshold when sigma grows with rho.
inline double adm_threshold_fixed_point(const CompositeProblem& p) {
  const Matrix& f = *p.linear_F;
  const double lam_q = lambda_min_symmetric(p.quadratic_f0->Q);
  const double lam_ftf = std::max(0.0, lambda_min_symmetric(f.transpose() * f));
  const double lam_fft = lambda_min_symmetric(f * f.transpose());
  const double l1 = p.lipschitz_f0 + 1.0;
  const double k = 4.0 * (l1 * l1 + 1.0) / lam_fft;
  // rho (lam_q + rho lam_ftf) = k, root written without cancellation.
  const double denom = lam_q + std::sqrt(lam_q * lam_q + 4.0 * lam_ftf * k);
  detail::require(denom > 0.0, ErrorCode::kInvalidArgument, "x -> Laug is not strongly convex");
  return 2.0 * k / denom;
}

}  // namespace album::gallery

#endif  // ALBUM_GALLERY_HPP_
