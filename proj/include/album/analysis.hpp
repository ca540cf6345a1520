#ifndef ALBUM_ANALYSIS_HPP_
#define ALBUM_ANALYSIS_HPP_

#include <cmath>
#include <utility>

#include "album/driver.hpp"
#include "album/symmetric_eigen.hpp"

namespace album {

/// Pointwise regularity sqrt(lambda_min(JF(x) JF(x)^T)); zero when singular.
inline double gamma_at(const CompositeProblem& p, const Vector& x) {
  const Matrix j = eval_F(p, x).jacobian;
  return std::sqrt(std::max(0.0, lambda_min_symmetric(j * j.transpose())));
}

struct DualBound {
  double d1 = 0.0;
  double d2 = 0.0;
};

/// Constants of the dual-step bound
///   ||y+ - y||^2 <= d1 ||x+ - x||^2 + d2 ||x - x-||^2,
/// d1 = (2/gamma^2)(L(f0) + L(F) Lambda + b)^2, d2 = 2 b^2 / gamma^2.
inline DualBound dual_bound_constants(double lipschitz_f0, double lipschitz_F, double lambda, double b,
                                      double gamma) {
  detail::require(gamma > 0.0, ErrorCode::kInvalidArgument, "dual_bound_constants: gamma must be positive");
  detail::require(b > 0.0, ErrorCode::kInvalidArgument, "dual_bound_constants: b must be positive");
  const double g2 = gamma * gamma;
  const double s = lipschitz_f0 + lipschitz_F * lambda + b;
  return {2.0 * s * s / g2, 2.0 * b * b / g2};
}

/// Dual-step constants of a map on a linear-F problem (L(F) = 0), using the
/// map's sharper constants when it declares them.
inline DualBound linear_dual_bound(const CompositeProblem& p, const MapConstants& c) {
  const DualBound generic = dual_bound_constants(p.lipschitz_f0, 0.0, 0.0, c.b, p.gamma);
  return {c.dual_d1.value_or(generic.d1), c.dual_d2.value_or(generic.d2)};
}

/// a/2 - (d1 + d2)/rho: guaranteed Lyapunov decrease rate per ||dx||^2 for
/// linear F at a fixed penalty. Positive exactly above the threshold.
inline double linear_descent_margin(const MapConstants& c, const DualBound& d, double rho) {
  return 0.5 * c.a - (d.d1 + d.d2) / rho;
}

/// Penalty threshold for linear F: rho > 2 (d1 + d2) / a.
inline double linear_threshold_rho(double a, double d1, double d2) {
  detail::require(a > 0.0, ErrorCode::kInvalidArgument, "linear_threshold_rho: a must be positive");
  return 2.0 * (d1 + d2) / a;
}

/// Penalty threshold for the mu = 0 alternating scheme with b = 1:
/// rho > 4((L(f0) + 1)^2 + 1) / (sigma lambda_min(F F^T)).
inline double adm_threshold_rho(double lipschitz_f0, double sigma, double lambda_min_FFt) {
  detail::require(lipschitz_f0 >= 0.0, ErrorCode::kInvalidArgument, "adm_threshold_rho: L(f0) must be >= 0");
  detail::require(sigma > 0.0, ErrorCode::kInvalidArgument, "adm_threshold_rho: sigma must be positive");
  detail::require(lambda_min_FFt > 0.0, ErrorCode::kInvalidArgument,
                  "adm_threshold_rho: lambda_min(F F^T) must be positive");
  const double l1 = lipschitz_f0 + 1.0;
  return 4.0 * (l1 * l1 + 1.0) / (sigma * lambda_min_FFt);
}

/// Admissible (rho, mu) region of the linearized scheme for linear F with
/// cond(F F^T) < 2. Built from ell = L(f0), gamma = sqrt(lambda_min(F F^T))
/// and ||F||.
///
/// With t = mu - rho gamma^2 the descent requirement reduces to psi(t) < 0,
///   psi(t) = 16 t^2 - 2(rho gamma^2 - 8 ell) t + rho gamma^2 (ell + rho ||F||^2 - 2 rho gamma^2) + 8 ell^2,
/// whose reduced discriminant is rho^2 gamma^2 eta - 32 rho gamma^2 ell - 64 ell^2
/// with eta = 33 gamma^2 - 16 ||F||^2. It is positive exactly for rho > rho_bar.
struct ThresholdBundle {
  double ell = 0.0;
  double gamma = 0.0;
  double norm_F = 0.0;
  double eta = 0.0;
  double rho_bar = 0.0;

  double psi(double t, double rho) const {
    const double g2 = gamma * gamma;
    return 16.0 * t * t - 2.0 * (rho * g2 - 8.0 * ell) * t +
           rho * g2 * (ell + rho * norm_F * norm_F - 2.0 * rho * g2) + 8.0 * ell * ell;
  }

  double delta_psi(double rho) const {
    const double g2 = gamma * gamma;
    return rho * rho * g2 * eta - 32.0 * rho * g2 * ell - 64.0 * ell * ell;
  }

  /// Zeros (t1, t2) of psi at rho; requires rho > rho_bar.
  std::pair<double, double> t_roots(double rho) const {
    const double disc = checked_discriminant(rho);
    const double center = rho * gamma * gamma - 8.0 * ell;
    return {(center - std::sqrt(disc)) / 16.0, (center + std::sqrt(disc)) / 16.0};
  }

  /// Admissible proximal weights (mu1, mu2) at rho; requires rho > rho_bar.
  std::pair<double, double> mu_interval(double rho) const {
    const double disc = checked_discriminant(rho);
    const double center = 17.0 * rho * gamma * gamma - 8.0 * ell;
    return {(center - std::sqrt(disc)) / 16.0, (center + std::sqrt(disc)) / 16.0};
  }

  /// Dual-step constants of the linearized map with ||M|| = mu - rho gamma^2,
  /// M = mu I - rho F^T F.
  DualBound dual_constants(double rho, double mu) const {
    const double m = mu - rho * gamma * gamma;
    const double g2 = gamma * gamma;
    return {2.0 * m * m / g2, 2.0 * (ell + m) * (ell + m) / g2};
  }

  /// a/2 - (d1 + d2)/rho with a = mu - (ell + rho ||F||^2)/2.
  double descent_margin(double rho, double mu) const {
    const double a = mu - 0.5 * (ell + rho * norm_F * norm_F);
    const DualBound d = dual_constants(rho, mu);
    return 0.5 * a - (d.d1 + d.d2) / rho;
  }

 private:
  double checked_discriminant(double rho) const {
    detail::require(rho > rho_bar, ErrorCode::kInvalidArgument,
                    "rho must exceed the threshold rho_bar = " + std::to_string(rho_bar));
    return std::max(0.0, delta_psi(rho));
  }
};

inline ThresholdBundle album3_thresholds(double lipschitz_f0, double gamma, double norm_F) {
  detail::require(gamma > 0.0, ErrorCode::kInvalidArgument, "album3_thresholds: gamma must be positive");
  detail::require(lipschitz_f0 >= 0.0, ErrorCode::kInvalidArgument, "album3_thresholds: L(f0) must be >= 0");
  const double kappa = (norm_F * norm_F) / (gamma * gamma);
  detail::require(kappa < 2.0, ErrorCode::kInvalidArgument,
                  "album3_thresholds: requires cond(F F^T) < 2, got " + std::to_string(kappa));
  ThresholdBundle t;
  t.ell = lipschitz_f0;
  t.gamma = gamma;
  t.norm_F = norm_F;
  t.eta = 33.0 * gamma * gamma - 16.0 * norm_F * norm_F;
  detail::require(t.eta > 0.0, ErrorCode::kInvalidArgument, "album3_thresholds: eta must be positive");
  t.rho_bar = 8.0 * lipschitz_f0 / (t.eta * gamma) * (2.0 * gamma + std::sqrt(4.0 * gamma * gamma + t.eta));
  return t;
}

/// Checks ||dy_k||^2 <= d1 ||dx_k||^2 + d2 ||dx_{k-1}||^2 for k >= k_from with
/// slack 1e-8 (1 + rhs).
inline bool check_dual_bound(const std::vector<IterationRecord>& trace, double d1, double d2, int k_from) {
  for (const auto& r : trace) {
    if (r.k < k_from) continue;
    const double rhs = d1 * r.step_x * r.step_x + d2 * r.prev_step_x * r.prev_step_x;
    if (r.step_y * r.step_y > rhs + 1e-8 * (1.0 + rhs)) return false;
  }
  return true;
}

struct SubgradientBound {
  double sigma1 = 0.0;
  double sigma2 = 0.0;
};

/// Constants of ||q+|| <= sigma1 ||x+ - x|| + sigma2 ||x - x-|| for q+ in the
/// subdifferential of E_beta; d_c is the constant of the u-subgradient bound.
inline SubgradientBound subgradient_bound_constants(double jac_bound, double b, double d_c, double lipschitz_f0,
                                                    double lipschitz_F, double lambda, double gamma, double rho0,
                                                    double beta0) {
  detail::require(gamma > 0.0, ErrorCode::kInvalidArgument, "subgradient_bound_constants: gamma must be positive");
  detail::require(rho0 > 0.0, ErrorCode::kInvalidArgument, "subgradient_bound_constants: rho0 must be positive");
  const double factor = jac_bound + 1.0 + 1.0 / rho0;
  return {factor * (lipschitz_f0 + lipschitz_F * lambda + b) / gamma + 4.0 * beta0 + b + d_c,
          b * factor / gamma};
}

}  // namespace album

#endif  // ALBUM_ANALYSIS_HPP_
