#ifndef ALBUM_MODEL_HPP_
#define ALBUM_MODEL_HPP_

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "album/prox.hpp"
#include "album/types.hpp"

namespace album {

// Composite model: minimize f0(x) + h(F(x)) over x in R^n, with F : R^n -> R^m.

struct FirstOrder {
  double value = 0.0;
  Vector gradient;
};

struct MapJet {
  Vector value;
  Matrix jacobian;  // m x n, rows are gradients of the components
};

/// Extended-valued h with its prox and distance-to-domain oracles.
struct Regularizer {
  std::string name;
  std::function<double(const Vector&)> value;             // may return +inf
  std::function<Vector(const Vector&, double)> prox;      // (v, t) -> argmin h(u) + ||u-v||^2/(2t)
  std::function<double(const Vector&)> dist_dom;          // distance to dom h
};

/// Optional structure for f0(x) = 0.5 x^T Q x + q^T x + constant; enables
/// exact linear solves in the primal steps.
struct QuadraticForm {
  Matrix Q;
  Vector q;
  double constant = 0.0;
};

struct CompositeProblem {
  std::string name;
  Eigen::Index n = 0;
  Eigen::Index m = 0;
  std::function<FirstOrder(const Vector&)> f0;
  std::function<MapJet(const Vector&)> F;
  Regularizer h;
  double lipschitz_f0 = 0.0;
  double lipschitz_F = 0.0;
  double gamma = 0.0;
  double d_bar = kInfinity;
  // Empty means the default zone dist(F(x), dom h) <= d_bar.
  std::function<bool(const Vector&)> zone_predicate;
  std::optional<Matrix> linear_F;
  std::optional<QuadraticForm> quadratic_f0;

  bool is_linear_F() const { return linear_F.has_value(); }
};

struct AlgoParams {
  double rho0 = 1.0;
  double delta = 1.0;
  double mu = 1.0;
  double tau_fraction = 0.25;
  double inner_tol = 1e-10;
  int inner_max_iters = 200000;
  int outer_max_iters = 20000;
  double stop_tol = 1e-6;
  double multiplier_guard = 1e8;
  double rho_guard = 1e12;

  void validate() const {
    detail::require(rho0 > 0.0, ErrorCode::kInvalidArgument, "rho0 must be positive");
    detail::require(delta > 0.0, ErrorCode::kInvalidArgument, "delta must be positive");
    detail::require(mu >= 0.0, ErrorCode::kInvalidArgument, "mu must be nonnegative");
    detail::require(tau_fraction > 0.0 && tau_fraction < 0.5, ErrorCode::kInvalidArgument,
                    "tau_fraction must lie in (0, 0.5) so that tau is in (0, a/2)");
    detail::require(inner_tol > 0.0, ErrorCode::kInvalidArgument, "inner_tol must be positive");
    detail::require(inner_max_iters > 0, ErrorCode::kInvalidArgument, "inner_max_iters must be positive");
    detail::require(outer_max_iters > 0, ErrorCode::kInvalidArgument, "outer_max_iters must be positive");
    detail::require(stop_tol > 0.0, ErrorCode::kInvalidArgument, "stop_tol must be positive");
  }
};

inline void validate(const CompositeProblem& p) {
  detail::require(p.n > 0 && p.m > 0, ErrorCode::kInvalidArgument, "problem dimensions must be positive");
  detail::require(static_cast<bool>(p.f0) && static_cast<bool>(p.F), ErrorCode::kInvalidArgument,
                  "problem requires f0 and F oracles");
  detail::require(static_cast<bool>(p.h.value) && static_cast<bool>(p.h.prox) &&
                      static_cast<bool>(p.h.dist_dom),
                  ErrorCode::kInvalidArgument, "problem requires h value, prox and dist_dom oracles");
  detail::require(p.lipschitz_f0 >= 0.0 && p.lipschitz_F >= 0.0, ErrorCode::kInvalidArgument,
                  "Lipschitz constants must be nonnegative");
  detail::require(p.gamma > 0.0, ErrorCode::kInvalidArgument, "regularity constant gamma must be positive");
  detail::require(p.d_bar > 0.0, ErrorCode::kInvalidArgument, "zone radius d_bar must be positive");
  if (p.linear_F) {
    detail::require(p.linear_F->rows() == p.m && p.linear_F->cols() == p.n,
                    ErrorCode::kDimensionMismatch, "linear F matrix must be m x n");
  }
}

inline FirstOrder eval_f0(const CompositeProblem& p, const Vector& x) {
  detail::require_size(x.size(), p.n, "eval_f0");
  return p.f0(x);
}

inline MapJet eval_F(const CompositeProblem& p, const Vector& x) {
  detail::require_size(x.size(), p.n, "eval_F");
  return p.F(x);
}

inline Vector prox_h(const CompositeProblem& p, const Vector& v, double t) {
  detail::require_size(v.size(), p.m, "prox_h");
  detail::require(t > 0.0, ErrorCode::kInvalidArgument, "prox_h: step t must be positive");
  return p.h.prox(v, t);
}

inline bool in_zone(const CompositeProblem& p, const Vector& x) {
  detail::require_size(x.size(), p.n, "in_zone");
  if (p.zone_predicate) return p.zone_predicate(x);
  if (std::isinf(p.d_bar)) return true;
  return p.h.dist_dom(p.F(x).value) <= p.d_bar;
}

// ---------------------------------------------------------------------------
// Oracle builders

inline std::function<FirstOrder(const Vector&)> quadratic_oracle(const QuadraticForm& form) {
  return [form](const Vector& x) {
    const Vector qx = form.Q * x;
    return FirstOrder{0.5 * x.dot(qx) + form.q.dot(x) + form.constant, qx + form.q};
  };
}

inline std::function<MapJet(const Vector&)> linear_map_oracle(const Matrix& a) {
  return [a](const Vector& x) { return MapJet{a * x, a}; };
}

// Regularizer catalog.

inline Regularizer zero_regularizer() {
  return {"zero", [](const Vector&) { return 0.0; }, [](const Vector& v, double) { return v; },
          [](const Vector&) { return 0.0; }};
}

inline Regularizer weighted_l1(Vector weights) {
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    detail::require(weights(i) > 0.0, ErrorCode::kInvalidArgument, "l1 weights must be positive");
  }
  return {"weighted_l1",
          [weights](const Vector& u) { return weights.dot(u.cwiseAbs()); },
          [weights](const Vector& v, double t) { return prox::soft_threshold(v, weights, t); },
          [](const Vector&) { return 0.0; }};
}

/// Indicator of {u : ||u||_0 <= s}.
inline Regularizer sparsity_indicator(Eigen::Index s) {
  detail::require(s >= 0, ErrorCode::kInvalidArgument, "sparsity level must be nonnegative");
  auto nnz = [](const Vector& u) { return (u.array() != 0.0).count(); };
  return {"l0_ball",
          [s, nnz](const Vector& u) { return nnz(u) <= s ? 0.0 : kInfinity; },
          [s](const Vector& v, double) { return prox::hard_threshold(v, s); },
          [s](const Vector& v) { return (v - prox::hard_threshold(v, s)).norm(); }};
}

/// Indicator of the single point {p}.
inline Regularizer point_indicator(Vector point) {
  return {"point",
          [point](const Vector& u) { return u == point ? 0.0 : kInfinity; },
          [point](const Vector&, double) { return point; },
          [point](const Vector& v) { return (v - point).norm(); }};
}

/// Indicator of the sphere {u : ||u - center|| = radius}.
inline Regularizer sphere_indicator(Vector center, double radius) {
  detail::require(radius > 0.0, ErrorCode::kInvalidArgument, "sphere radius must be positive");
  return {"sphere",
          [center, radius](const Vector& u) {
            return std::abs((u - center).norm() - radius) <= 1e-12 * std::max(1.0, radius) ? 0.0
                                                                                              : kInfinity;
          },
          [center, radius](const Vector& v, double) { return prox::project_sphere(v, center, radius); },
          [center, radius](const Vector& v) { return prox::snap_distance(std::abs((v - center).norm() - radius), radius); }};
}

/// Sum of indicators of sets acting on consecutive blocks of length block_dim.
/// Membership uses an absolute tolerance so projected points count as inside.
inline Regularizer block_set_indicator(std::vector<prox::ProjectableSet> sets, Eigen::Index block_dim,
                                       double membership_tol = 1e-12) {
  const auto p = static_cast<Eigen::Index>(sets.size());
  auto value = [sets, block_dim, p, membership_tol](const Vector& u) {
    for (Eigen::Index i = 0; i < p; ++i) {
      if (sets[static_cast<std::size_t>(i)].distance(u.segment(i * block_dim, block_dim)) > membership_tol)
        return kInfinity;
    }
    return 0.0;
  };
  auto proj = [sets, block_dim, p](const Vector& v, double) {
    Vector out(v.size());
    for (Eigen::Index i = 0; i < p; ++i) {
      out.segment(i * block_dim, block_dim) =
          sets[static_cast<std::size_t>(i)].project(v.segment(i * block_dim, block_dim));
    }
    return out;
  };
  auto dist = [sets, block_dim, p](const Vector& v) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < p; ++i) {
      const double d = sets[static_cast<std::size_t>(i)].distance(v.segment(i * block_dim, block_dim));
      s += d * d;
    }
    return std::sqrt(s);
  };
  return {"block_sets", value, proj, dist};
}

}  // namespace album

#endif  // ALBUM_MODEL_HPP_
