#ifndef ALBUM_TESTS_FIXTURES_HPP_
#define ALBUM_TESTS_FIXTURES_HPP_

#include <string>
#include <utility>
#include <vector>

#include "album/album.hpp"

namespace fixtures {

using album::CompositeProblem;
using album::Matrix;
using album::Vector;

inline Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

inline Matrix spd_matrix(Eigen::Index n, unsigned seed, double shift) {
  const Matrix g = album::gallery::seeded_gaussian_matrix(n, n, seed);
  return g.transpose() * g / static_cast<double>(n) + shift * Matrix::Identity(n, n);
}

inline CompositeProblem two_ball_feasibility() {
  std::vector<album::prox::ProjectableSet> sets{album::prox::ball_set(vec({0.0, 0.0}), 1.0),
                                                album::prox::ball_set(vec({1.0, 0.0}), 1.0)};
  return album::gallery::feasibility_problem(std::move(sets), 2);
}

inline CompositeProblem seeded_sparsity(unsigned seed) {
  const Matrix a = album::gallery::seeded_gaussian_matrix(8, 8, seed);
  const Vector b = album::gallery::seeded_gaussian_vector(8, seed + 1);
  return album::gallery::sparsity_problem(a, b, 2);
}

inline CompositeProblem l1_equality_instance() {
  const Matrix q = spd_matrix(4, 21, 0.5);
  const Vector qv = album::gallery::seeded_gaussian_vector(4, 22);
  Matrix f(2, 4);
  f << 1.0, 0.2, 0.0, -0.1, 0.0, 1.0, 0.3, 0.1;
  return album::gallery::l1_equality_problem(album::gallery::quadratic_function(q, qv), album::gallery::linear_map(f),
                                             vec({1.0, 0.5}));
}

/// Least squares plus l1 with a well-conditioned F (cond(F F^T) < 2).
inline CompositeProblem linear_composite_l1() {
  const Matrix q = spd_matrix(4, 31, 0.2);
  const Vector qv = album::gallery::seeded_gaussian_vector(4, 32);
  Matrix f(3, 4);
  f << 1.0, 0.1, 0.0, 0.0, 0.0, 1.0, 0.1, 0.0, 0.0, 0.0, 1.1, 0.1;
  album::gallery::HSpec h;
  h.kind = album::gallery::HKind::kL1;
  h.weights = vec({0.3, 0.3, 0.3});
  return album::gallery::linear_composite_problem(q, qv, f, h);
}

inline CompositeProblem seeded_sphere(Eigen::Index n = 5, unsigned seed = 42, double r1 = 0.5) {
  return album::gallery::sphere_problem(album::gallery::seeded_gaussian_vector(n, seed), r1);
}

/// One instance of every gallery builder.
inline std::vector<CompositeProblem> gallery_instances() {
  return {seeded_sphere(), two_ball_feasibility(), seeded_sparsity(7), l1_equality_instance(), linear_composite_l1()};
}

}  // namespace fixtures

#endif  // ALBUM_TESTS_FIXTURES_HPP_
