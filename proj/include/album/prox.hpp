#ifndef ALBUM_PROX_HPP_
#define ALBUM_PROX_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "album/types.hpp"

namespace album::prox {

// Proximal maps u* = argmin_u { h(u) + (1/2t)||u - v||^2 }.
// Nonconvex entries return a deterministic selection of the argmin set.

/// Componentwise soft thresholding with per-entry thresholds weights(i) * t.
inline Vector soft_threshold(const Vector& v, const Vector& weights, double t) {
  detail::require_size(weights.size(), v.size(), "soft_threshold weights");
  Vector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double k = weights(i) * t;
    const double a = std::abs(v(i)) - k;
    out(i) = a > 0.0 ? std::copysign(a, v(i)) : 0.0;
  }
  return out;
}

inline Vector soft_threshold(const Vector& v, double weight, double t) {
  return soft_threshold(v, Vector::Constant(v.size(), weight), t);
}

/// Projection onto {u : ||u||_0 <= s}: keeps the s largest magnitudes.
/// Equal magnitudes are broken toward the lowest index.
inline Vector hard_threshold(const Vector& v, Eigen::Index s) {
  const Eigen::Index n = v.size();
  if (s >= n) return v;
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::abs(v(a)) > std::abs(v(b));
  });
  Vector out = Vector::Zero(n);
  for (Eigen::Index k = 0; k < s; ++k) {
    const Eigen::Index i = order[static_cast<std::size_t>(k)];
    out(i) = v(i);
  }
  return out;
}

/// Radial projection onto the sphere of given radius about center. The
/// center itself maps to center + radius * e_1.
inline Vector project_sphere(const Vector& v, const Vector& center, double radius) {
  Vector d = v - center;
  const double norm = d.norm();
  if (norm == 0.0) {
    d = Vector::Zero(v.size());
    d(0) = radius;
    return center + d;
  }
  return center + (radius / norm) * d;
}

inline Vector project_ball(const Vector& v, const Vector& center, double radius) {
  const Vector d = v - center;
  const double norm = d.norm();
  if (norm <= radius) return v;
  return center + (radius / norm) * d;
}

inline Vector project_box(const Vector& v, double lower, double upper) {
  return v.cwiseMax(lower).cwiseMin(upper);
}

/// Distances below the rounding level of a projection are reported as zero,
/// so projected points count as members.
inline double snap_distance(double d, double scale) { return d <= 1e-12 * std::max(1.0, scale) ? 0.0 : d; }

/// A closed set with an exact projection oracle, for feasibility models.
struct ProjectableSet {
  std::string kind;
  std::function<Vector(const Vector&)> project;
  std::function<double(const Vector&)> distance;
};

inline ProjectableSet ball_set(Vector center, double radius) {
  detail::require(radius >= 0.0, ErrorCode::kInvalidArgument, "ball radius must be nonnegative");
  return {"ball",
          [center, radius](const Vector& v) { return project_ball(v, center, radius); },
          [center, radius](const Vector& v) { return snap_distance(std::max(0.0, (v - center).norm() - radius), radius); }};
}

inline ProjectableSet sphere_set(Vector center, double radius) {
  detail::require(radius > 0.0, ErrorCode::kInvalidArgument, "sphere radius must be positive");
  return {"sphere",
          [center, radius](const Vector& v) { return project_sphere(v, center, radius); },
          [center, radius](const Vector& v) { return snap_distance(std::abs((v - center).norm() - radius), radius); }};
}

inline ProjectableSet point_set(Vector point) {
  return {"point", [point](const Vector&) { return point; },
          [point](const Vector& v) { return (v - point).norm(); }};
}

}  // namespace album::prox

#endif  // ALBUM_PROX_HPP_
