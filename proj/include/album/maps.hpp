#ifndef ALBUM_MAPS_HPP_
#define ALBUM_MAPS_HPP_

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>

#include "album/lagrangian.hpp"
#include "album/symmetric_eigen.hpp"

namespace album {

// Lagrangian algorithmic maps: primal updates (x, u) -> (x+, u+) certified
// by constants (a, b) of sufficient descent and gradient bound, plus the
// constant c bounding a u-subgradient witness.

enum class MapTag { kAlbum1, kAlbum2, kAlbum3, kAdm };

inline const char* to_string(MapTag tag) {
  switch (tag) {
    case MapTag::kAlbum1: return "album1";
    case MapTag::kAlbum2: return "album2";
    case MapTag::kAlbum3: return "album3";
    case MapTag::kAdm: return "adm";
  }
  return "unknown";
}

struct MapKind {
  MapTag tag = MapTag::kAlbum2;
  double sigma = 0.0;  // strong convexity modulus, Adm only

  static MapKind album1() { return {MapTag::kAlbum1, 0.0}; }
  static MapKind album2() { return {MapTag::kAlbum2, 0.0}; }
  static MapKind album3() { return {MapTag::kAlbum3, 0.0}; }
  static MapKind adm(double sigma) { return {MapTag::kAdm, sigma}; }
};

struct MapConstants {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  // Coefficients of ||x^{k+1} - x^k||^2 and ||x^k - x^{k-1}||^2 in the
  // dual-step bound when the map has sharper ones than the generic
  // 2 (L(f0) + b)^2 / gamma^2 and 2 b^2 / gamma^2 (linearized map).
  std::optional<double> dual_d1;
  std::optional<double> dual_d2;
};

struct PrimalStep {
  Vector x;
  Vector u;
  Vector witness;  // element of the u-subdifferential of Laug at (x+, u+, y)
  int inner_iterations = 0;
};

struct InnerSolution {
  Vector x;
  double grad_norm = 0.0;
  int iterations = 0;
};

/// Gradient descent with Armijo backtracking: start step 1, halve on
/// failure, sufficient-decrease constant 1e-4. Stops at ||grad|| <= tol.
inline InnerSolution armijo_descent(const std::function<FirstOrder(const Vector&)>& objective, Vector x,
                                    double tol, int max_iters) {
  constexpr double kArmijo = 1e-4;
  FirstOrder cur = objective(x);
  for (int it = 0; it < max_iters; ++it) {
    const double gnorm = cur.gradient.norm();
    if (gnorm <= tol) return {std::move(x), gnorm, it};
    if (!std::isfinite(cur.value) || !std::isfinite(gnorm)) {
      throw AlbumError(ErrorCode::kNonFinite, "inner objective is not finite");
    }
    double step = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 80; ++halving, step *= 0.5) {
      Vector trial = x - step * cur.gradient;
      FirstOrder next = objective(trial);
      // Near the minimizer the predicted decrease drops below the rounding
      // level of the objective; there a strict gradient decrease decides.
      const double noise = 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(cur.value));
      const double predicted = kArmijo * step * gnorm * gnorm;
      const bool accept = predicted > noise
                              ? next.value <= cur.value - predicted
                              : next.value <= cur.value + noise && next.gradient.norm() < gnorm;
      if (accept) {
        x = std::move(trial);
        cur = std::move(next);
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      throw AlbumError(ErrorCode::kInnerSolverFailed,
                       "line search stalled; residual inner gradient norm " + detail::sci(gnorm));
    }
  }
  const double gnorm = cur.gradient.norm();
  if (gnorm <= tol) return {std::move(x), gnorm, max_iters};
  throw AlbumError(ErrorCode::kInnerSolverFailed,
                   "inner iterations exhausted; residual inner gradient norm " + detail::sci(gnorm));
}

namespace detail {

inline bool has_quadratic_structure(const CompositeProblem& p) {
  return p.is_linear_F() && p.quadratic_f0.has_value();
}

/// Exact minimizer of Laug_rho(., u, y) + (mu/2)||. - x_center||^2 for
/// quadratic f0 and linear F.
inline Vector quadratic_x_solve(const CompositeProblem& p, const Vector& u, const Vector& y, double rho,
                                double mu, const Vector& x_center) {
  const Matrix& fm = *p.linear_F;
  const QuadraticForm& qf = *p.quadratic_f0;
  Matrix system = qf.Q + rho * fm.transpose() * fm;
  system.diagonal().array() += mu;
  const Vector rhs = mu * x_center - qf.q - fm.transpose() * (y - rho * u);
  Eigen::LLT<Matrix> llt(system);
  if (llt.info() != Eigen::Success) {
    throw AlbumError(ErrorCode::kInnerSolverFailed, "x-subproblem is not strongly convex");
  }
  return llt.solve(rhs);
}

/// Laug_rho(., u, y) + (mu/2)||. - x_center||^2 without the constant h(u).
inline std::function<FirstOrder(const Vector&)> x_subproblem(const CompositeProblem& p, const Vector& u,
                                                             const Vector& y, double rho, double mu,
                                                             const Vector& x_center) {
  return [&p, u, y, rho, mu, x_center](const Vector& x) {
    const FirstOrder f = eval_f0(p, x);
    const MapJet jet = eval_F(p, x);
    const Vector r = jet.value - u;
    const Vector dx = x - x_center;
    FirstOrder out;
    out.value = f.value + y.dot(r) + 0.5 * rho * r.squaredNorm() + 0.5 * mu * dx.squaredNorm();
    out.gradient = f.gradient + jet.jacobian.transpose() * (y + rho * r) + mu * dx;
    return out;
  };
}

inline Vector minimize_x_block(const CompositeProblem& p, const Vector& u, const Vector& y, double rho,
                               double mu, const Vector& x_center, const Vector& x_start, double tol,
                               int max_iters, int* iterations) {
  if (has_quadratic_structure(p)) {
    if (iterations) *iterations += 1;
    return quadratic_x_solve(p, u, y, rho, mu, x_center);
  }
  InnerSolution sol = armijo_descent(x_subproblem(p, u, y, rho, mu, x_center), x_start, tol, max_iters);
  if (iterations) *iterations += sol.iterations;
  return std::move(sol.x);
}

}  // namespace detail

/// u+ = prox_h(F(x^k) + y^k/rho, 1/rho), the exact minimizer of u -> Laug_rho(x^k, u, y^k).
inline Vector album2_u_step(const CompositeProblem& p, const SolverState& s) {
  return prox_h(p, eval_F(p, s.x).value + s.y / s.rho, 1.0 / s.rho);
}

/// Proximal x-step of the alternating scheme: argmin Laug_rho(x, u+, y) + (mu/2)||x - x^k||^2.
inline Vector album2_x_step(const CompositeProblem& p, const SolverState& s, const Vector& u_next, double mu,
                            double inner_tol, int inner_max_iters, int* iterations = nullptr) {
  detail::require(mu > 0.0, ErrorCode::kInvalidArgument, "album2_x_step requires mu > 0");
  return detail::minimize_x_block(p, u_next, s.y, s.rho, mu, s.x, s.x, inner_tol, inner_max_iters,
                                  iterations);
}

/// One explicit gradient step on the linearized augmented Lagrangian.
inline Vector album3_x_step(const CompositeProblem& p, const SolverState& s, const Vector& u_next, double mu) {
  detail::require(mu > 0.0, ErrorCode::kInvalidArgument, "album3_x_step requires mu > 0");
  return s.x - grad_x_aug_lagrangian(p, s.x, u_next, s.y, s.rho) / mu;
}

/// Exact minimizer of x -> Laug_rho(x, u+, y) (no proximal term).
inline Vector adm_x_step(const CompositeProblem& p, const SolverState& s, const Vector& u_next,
                         double inner_tol, int inner_max_iters, int* iterations = nullptr) {
  return detail::minimize_x_block(p, u_next, s.y, s.rho, 0.0, s.x, s.x, inner_tol, inner_max_iters,
                                  iterations);
}

/// Joint proximal minimization of Laug_rho(x, u, y) + (mu/2)||x - x^k||^2 by
/// block-coordinate descent: exact u-prox, then an x-block solve, until the
/// x-gradient is within inner_tol and u no longer moves.
inline PrimalStep album1_step(const CompositeProblem& p, const SolverState& s, double mu, double inner_tol,
                              int inner_max_iters) {
  detail::require(mu > 0.0, ErrorCode::kInvalidArgument, "album1_step requires mu > 0");
  Vector x = s.x;
  Vector u = prox_h(p, eval_F(p, x).value + s.y / s.rho, 1.0 / s.rho);
  int iterations = 0;
  double residual = kInfinity;
  for (int sweep = 0; sweep < inner_max_iters; ++sweep) {
    x = detail::minimize_x_block(p, u, s.y, s.rho, mu, s.x, x, inner_tol, inner_max_iters, &iterations);
    Vector u_new = prox_h(p, eval_F(p, x).value + s.y / s.rho, 1.0 / s.rho);
    const double u_move = (u_new - u).norm();
    u = std::move(u_new);
    const double grad = (grad_x_aug_lagrangian(p, x, u, s.y, s.rho) + mu * (x - s.x)).norm();
    residual = std::max(u_move, grad);
    if (grad <= inner_tol && u_move <= inner_tol) {
      return {std::move(x), std::move(u), Vector::Zero(p.m), iterations};
    }
  }
  throw AlbumError(ErrorCode::kInnerSolverFailed,
                   "joint minimization did not settle; last block residual " + detail::sci(residual));
}

/// A Lagrangian algorithmic map bound to a problem. Construction validates
/// the parameters the map's certificate depends on.
class LagrangianMap {
 public:
  LagrangianMap(const CompositeProblem& problem, MapKind kind, double mu, double rho_min = 0.0)
      : problem_(&problem), kind_(kind), mu_(mu) {
    switch (kind.tag) {
      case MapTag::kAlbum1:
      case MapTag::kAlbum2:
        detail::require(mu > 0.0, ErrorCode::kInvalidArgument, "proximal weight mu must be positive");
        break;
      case MapTag::kAlbum3: {
        detail::require(mu > 0.0, ErrorCode::kInvalidArgument, "proximal weight mu must be positive");
        detail::require(problem.is_linear_F(), ErrorCode::kInvalidArgument,
                        "album3 requires a linear F");
        const Matrix& fm = *problem.linear_F;
        const std::vector<double> outer = symmetric_eigenvalues(fm * fm.transpose());
        detail::require(outer.front() > 0.0, ErrorCode::kInvalidArgument, "album3 requires F of full row rank");
        const double kappa = outer.back() / outer.front();
        detail::require(kappa < 2.0, ErrorCode::kInvalidArgument,
                        "album3 requires cond(F F^T) < 2, got " + std::to_string(kappa));
        lambda_min_FFt_ = outer.front();
        norm_F_sq_ = outer.back();
        const std::vector<double> inner = symmetric_eigenvalues(fm.transpose() * fm);
        lambda_min_FtF_ = std::max(0.0, inner.front());
        lambda_max_FtF_ = inner.back();
        break;
      }
      case MapTag::kAdm: {
        detail::require(kind.sigma > 0.0, ErrorCode::kInvalidArgument, "adm requires sigma > 0");
        detail::require(detail::has_quadratic_structure(problem), ErrorCode::kInvalidArgument,
                        "adm strong convexity can only be certified for quadratic f0 and linear F");
        const Matrix& fm = *problem.linear_F;
        const Matrix hess = problem.quadratic_f0->Q + rho_min * fm.transpose() * fm;
        const double lmin = lambda_min_symmetric(0.5 * (hess + hess.transpose()));
        detail::require(lmin >= kind.sigma * (1.0 - 1e-9), ErrorCode::kInvalidArgument,
                        "adm: x -> Laug is not sigma-strongly convex (lambda_min = " + std::to_string(lmin) +
                            ", sigma = " + std::to_string(kind.sigma) + ")");
        mu_ = 0.0;
        break;
      }
    }
  }

  MapKind kind() const { return kind_; }
  double mu() const { return mu_; }

  /// (a, b, c) at penalty rho; jac_bound is the running bound B on ||JF(x^k)||.
  MapConstants constants(double rho, double jac_bound) const {
    const CompositeProblem& p = *problem_;
    switch (kind_.tag) {
      case MapTag::kAlbum1:
        return {mu_, mu_, 0.0, std::nullopt, std::nullopt};
      case MapTag::kAlbum2:
        return {mu_, mu_, rho * jac_bound, std::nullopt, std::nullopt};
      case MapTag::kAlbum3: {
        const double lip = p.lipschitz_f0 + rho * norm_F_sq_;
        const double a = mu_ - 0.5 * lip;
        if (a <= 0.0) {
          throw AlbumError(ErrorCode::kInvalidArgument,
                           "nonpositive descent constant a = mu - L/2 = " + std::to_string(a));
        }
        const double m_norm = std::max(std::abs(mu_ - rho * lambda_min_FtF_), std::abs(mu_ - rho * lambda_max_FtF_));
        const double d1 = 2.0 * m_norm * m_norm / lambda_min_FFt_;
        const double d2 = 2.0 * std::pow(p.lipschitz_f0 + m_norm, 2) / lambda_min_FFt_;
        return {a, lip + mu_, rho * std::sqrt(norm_F_sq_), d1, d2};
      }
      case MapTag::kAdm:
        return {kind_.sigma, 1.0, rho * jac_bound, std::nullopt, std::nullopt};
    }
    return {};
  }

  PrimalStep step(const SolverState& s, double inner_tol, int inner_max_iters) const {
    const CompositeProblem& p = *problem_;
    if (kind_.tag == MapTag::kAlbum1) return album1_step(p, s, mu_, inner_tol, inner_max_iters);

    PrimalStep out;
    out.u = album2_u_step(p, s);
    switch (kind_.tag) {
      case MapTag::kAlbum2:
        out.x = album2_x_step(p, s, out.u, mu_, inner_tol, inner_max_iters, &out.inner_iterations);
        break;
      case MapTag::kAlbum3:
        out.x = album3_x_step(p, s, out.u, mu_);
        out.inner_iterations = 1;
        break;
      case MapTag::kAdm:
        out.x = adm_x_step(p, s, out.u, inner_tol, inner_max_iters, &out.inner_iterations);
        break;
      case MapTag::kAlbum1:
        break;
    }
    out.witness = s.rho * (eval_F(p, s.x).value - eval_F(p, out.x).value);
    return out;
  }

 private:
  const CompositeProblem* problem_;
  MapKind kind_;
  double mu_;
  double lambda_min_FFt_ = 0.0;
  double norm_F_sq_ = 0.0;
  double lambda_min_FtF_ = 0.0;
  double lambda_max_FtF_ = 0.0;
};

/// Certificate of a map kind at (mu, rho); see LagrangianMap::constants.
inline MapConstants map_constants(const CompositeProblem& p, MapKind kind, double mu, double rho,
                                  double jac_bound = 0.0) {
  return LagrangianMap(p, kind, mu, rho).constants(rho, jac_bound);
}

}  // namespace album

#endif  // ALBUM_MAPS_HPP_
