#ifndef ALBUM_DRIVER_HPP_
#define ALBUM_DRIVER_HPP_

#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "album/maps.hpp"

namespace album {

struct IterationRecord {
  int k = 0;
  double rho = 0.0;       // rho_k used by the step
  double rho_next = 0.0;  // rho_{k+1} chosen by the adaptive step
  double beta = 0.0;      // beta_k
  double tau = 0.0;
  MapConstants constants;
  double step_x = 0.0;       // ||x^{k+1} - x^k||
  double prev_step_x = 0.0;  // ||x^k - x^{k-1}||
  double step_y = 0.0;       // ||y^{k+1} - y^k||
  double laug = 0.0;         // Laug_{rho_k}(x^{k+1}, u^{k+1}, y^{k+1})
  double laug_start = 0.0;   // Laug_{rho_k}(x^k, u^k, y^k)
  double laug_primal = 0.0;  // Laug_{rho_k}(x^{k+1}, u^{k+1}, y^k)
  double lyapunov_prev = 0.0;
  double lyapunov_next = 0.0;
  bool in_zone = false;
  bool lyap_test_pass = false;
  KktResiduals kkt;
  double grad_norm = 0.0;     // ||grad_x Laug_{rho_k}(x^{k+1}, u^{k+1}, y^k)||
  double witness_norm = 0.0;  // ||v^{k+1}||
  double c1_slack = 0.0;      // positive means violated
  double c2_slack = 0.0;
  double c3_slack = 0.0;
  double h_u = 0.0;              // h(u^{k+1})
  double y_norm = 0.0;           // ||y^{k+1}||
  double jac_norm = 0.0;         // ||JF(x^{k+1})||
  double subgradient_norm = 0.0; // ||q^{k+1}||, q in the subdifferential of E_beta at the new point
  double gamma_sample = 0.0;     // sqrt(lambda_min(JF JF^T)) at x^{k+1}
  int inner_iterations = 0;
};

enum class RunStatus { kConverged, kMaxIterations };

struct RunReport {
  std::vector<IterationRecord> records;
  std::optional<int> k_statio;
  std::optional<int> k_info;
  bool converged = false;
  RunStatus status = RunStatus::kMaxIterations;
  SolverState final_state;
  bool fixed_penalty = false;
  double running_lambda = 0.0;  // max ||y^k||
  double running_jac_bound = 0.0;
  double beta0 = 0.0;
  std::vector<std::string> warnings;
};

struct AdaptiveOutcome {
  double rho_next = 0.0;
  double beta = 0.0;
  bool pass = false;
  double lyapunov_prev = 0.0;
  double lyapunov_next = 0.0;
  bool in_zone = false;
};

/// beta_k = d2 / rho_k with d2 = 2 b^2 / gamma^2 unless the map supplies a sharper d2.
inline double lyapunov_weight(const MapConstants& c, double rho, double gamma) {
  const double d2 = c.dual_d2 ? *c.dual_d2 : 2.0 * c.b * c.b / (gamma * gamma);
  return d2 / rho;
}

/// Adaptive penalty test: rho grows by delta unless x^{k+1} lies in the zone
/// and E_beta decreased by at least tau ||x^{k+1} - x^k||^2.
inline AdaptiveOutcome adaptive_step(const CompositeProblem& p, const MapConstants& constants,
                                     const SolverState& prev, const SolverState& next, const AlgoParams& params) {
  detail::require(constants.a > 0.0, ErrorCode::kInvalidArgument, "adaptive_step requires a > 0");
  AdaptiveOutcome out;
  const double rho = prev.rho;
  const double tau = params.tau_fraction * constants.a;
  out.beta = lyapunov_weight(constants, rho, p.gamma);
  out.lyapunov_prev = eval_lyapunov(p, prev.x, prev.u, prev.y, prev.x_prev, rho, out.beta);
  out.lyapunov_next = eval_lyapunov(p, next.x, next.u, next.y, prev.x, rho, out.beta);
  out.in_zone = in_zone(p, next.x);
  const double decrease = out.lyapunov_prev - out.lyapunov_next;
  // Rounding floor of the two evaluations of E, so that steps at machine
  // precision do not read as a failed descent.
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() *
                       (1.0 + std::abs(out.lyapunov_prev) + std::abs(out.lyapunov_next));
  out.pass = out.in_zone && tau * (next.x - prev.x).squaredNorm() <= decrease + noise;
  out.rho_next = out.pass ? rho : rho + params.delta;
  return out;
}

/// Smallest index from which the penalty sequence is constant; empty when the
/// sequence is still moving at its last entry.
inline std::optional<int> detect_stabilization(std::span<const double> rho) {
  if (rho.empty()) return std::nullopt;
  const auto n = static_cast<int>(rho.size());
  if (n >= 2 && rho[n - 1] != rho[n - 2]) return std::nullopt;
  int k = n - 1;
  while (k > 0 && rho[k - 1] == rho[k]) --k;
  return k;
}

/// Report overload: the sequence includes the penalty chosen after the last step.
inline std::optional<int> detect_stabilization(const RunReport& report) {
  if (report.records.empty()) return std::nullopt;
  std::vector<double> rho;
  rho.reserve(report.records.size() + 1);
  for (const auto& r : report.records) rho.push_back(r.rho);
  rho.push_back(report.records.back().rho_next);
  auto k = detect_stabilization(std::span<const double>(rho));
  if (k && *k >= static_cast<int>(report.records.size())) return std::nullopt;
  return k;
}

/// First index from which every recorded iterate x^j lies in the zone.
inline std::optional<int> detect_zone_entry(const RunReport& report, bool x0_in_zone) {
  std::optional<int> entry;
  if (x0_in_zone) entry = 0;
  for (const auto& r : report.records) {
    if (!r.in_zone) {
      entry.reset();
    } else if (!entry) {
      entry = r.k + 1;
    }
  }
  return entry;
}

struct RunOptions {
  std::optional<Vector> x0;
  std::optional<Vector> u0;
  std::optional<Vector> y0;
  // Hold rho fixed (adaptive step bypassed); only meaningful above the
  // linear-case threshold.
  std::optional<double> fixed_rho;
  // Descent rate guaranteed by the threshold analysis; caps tau in fixed mode.
  std::optional<double> descent_margin;
  unsigned seed = 42;
};

/// Random unit vector from a seeded generator. The stream is salted so that it
/// differs from the instance data drawn with the same seed.
inline Vector random_unit_vector(Eigen::Index n, unsigned seed) {
  std::seed_seq seq{seed, 0x1a7b0c3du};
  std::mt19937_64 gen(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(n);
  do {
    for (Eigen::Index i = 0; i < n; ++i) v(i) = normal(gen);
  } while (v.norm() == 0.0);
  return v / v.norm();
}

inline RunReport run(const CompositeProblem& p, MapKind kind, const AlgoParams& params,
                     const RunOptions& options = {}) {
  validate(p);
  params.validate();

  const double rho_start = options.fixed_rho.value_or(params.rho0);
  detail::require(rho_start > 0.0, ErrorCode::kInvalidArgument, "penalty must be positive");
  const LagrangianMap map(p, kind, params.mu, rho_start);

  SolverState s;
  s.x = options.x0 ? *options.x0 : random_unit_vector(p.n, options.seed);
  detail::require_size(s.x.size(), p.n, "initial x");
  s.rho = rho_start;
  s.u = options.u0 ? *options.u0 : prox_h(p, eval_F(p, s.x).value, 1.0 / s.rho);
  s.y = options.y0 ? *options.y0 : Vector::Zero(p.m);
  detail::require_size(s.u.size(), p.m, "initial u");
  detail::require_size(s.y.size(), p.m, "initial y");
  s.x_prev = s.x;
  s.k = 0;

  RunReport report;
  report.fixed_penalty = options.fixed_rho.has_value();
  report.running_lambda = s.y.norm();
  report.running_jac_bound = spectral_norm(eval_F(p, s.x).jacobian);
  const bool x0_in_zone = in_zone(p, s.x);

  bool multiplier_warned = false;
  double prev_step = 0.0;

  for (int k = 0; k < params.outer_max_iters; ++k) {
    s.k = k;
    PrimalStep step = map.step(s, params.inner_tol, params.inner_max_iters);

    SolverState next;
    next.x = std::move(step.x);
    next.u = std::move(step.u);
    next.y = multiplier_step(p, next.x, next.u, s.y, s.rho);
    next.x_prev = s.x;
    next.k = k + 1;

    const MapJet jet_next = eval_F(p, next.x);
    const double jac_next = spectral_norm(jet_next.jacobian);
    report.running_jac_bound = std::max(report.running_jac_bound, jac_next);
    const MapConstants constants = map.constants(s.rho, report.running_jac_bound);

    AdaptiveOutcome adapt = adaptive_step(p, constants, s, next, params);
    double tau = params.tau_fraction * constants.a;
    if (report.fixed_penalty) {
      if (options.descent_margin) tau = std::min(tau, *options.descent_margin);
      adapt.pass = adapt.in_zone && tau * (next.x - s.x).squaredNorm() <= adapt.lyapunov_prev - adapt.lyapunov_next;
      adapt.rho_next = s.rho;
    }
    next.rho = adapt.rho_next;
    next.beta = adapt.beta;
    if (k == 0) report.beta0 = adapt.beta;

    IterationRecord rec;
    rec.k = k;
    rec.rho = s.rho;
    rec.rho_next = adapt.rho_next;
    rec.beta = adapt.beta;
    rec.tau = tau;
    rec.constants = constants;
    rec.step_x = (next.x - s.x).norm();
    rec.prev_step_x = prev_step;
    rec.step_y = (next.y - s.y).norm();
    rec.laug_start = eval_aug_lagrangian(p, s.x, s.u, s.y, s.rho);
    rec.laug_primal = eval_aug_lagrangian(p, next.x, next.u, s.y, s.rho);
    rec.laug = eval_aug_lagrangian(p, next.x, next.u, next.y, s.rho);
    if (!std::isfinite(rec.laug) || !std::isfinite(rec.laug_primal)) {
      throw AlbumError(ErrorCode::kNonFinite,
                       "augmented Lagrangian is not finite: unbounded below or oracle fault "
                       "(requires inf Laug_rho > -inf)");
    }
    rec.lyapunov_prev = adapt.lyapunov_prev;
    rec.lyapunov_next = adapt.lyapunov_next;
    rec.in_zone = adapt.in_zone;
    rec.lyap_test_pass = adapt.pass;
    rec.kkt = kkt_residuals(p, next.x, next.u, next.y, s.rho);

    const Vector grad_primal = grad_x_aug_lagrangian(p, next.x, next.u, s.y, s.rho);
    rec.grad_norm = grad_primal.norm();
    rec.witness_norm = step.witness.norm();
    rec.c1_slack = rec.laug_primal + 0.5 * constants.a * rec.step_x * rec.step_x - rec.laug_start;
    rec.c2_slack = rec.grad_norm - constants.b * rec.step_x;
    rec.c3_slack = rec.witness_norm - constants.c * rec.step_x;
    rec.h_u = p.h.value(next.u);
    rec.y_norm = next.y.norm();
    rec.jac_norm = jac_next;
    rec.gamma_sample =
        std::sqrt(std::max(0.0, lambda_min_symmetric(jet_next.jacobian * jet_next.jacobian.transpose())));
    rec.inner_iterations = step.inner_iterations;

    // q = (grad_x Laug(z+) + 2 beta dx, v - dy, dy / rho, -2 beta dx).
    {
      const Vector dx = next.x - s.x;
      const Vector dy = next.y - s.y;
      const Vector q1 = grad_x_aug_lagrangian(p, next.x, next.u, next.y, s.rho) + 2.0 * adapt.beta * dx;
      const Vector q2 = step.witness - dy;
      const double q3 = dy.norm() / s.rho;
      const double q4 = 2.0 * adapt.beta * dx.norm();
      rec.subgradient_norm = std::sqrt(q1.squaredNorm() + q2.squaredNorm() + q3 * q3 + q4 * q4);
    }

    report.records.push_back(rec);
    report.running_lambda = std::max(report.running_lambda, rec.y_norm);
    if (!multiplier_warned && report.running_lambda > params.multiplier_guard) {
      report.warnings.push_back("multiplier norm exceeded guard at k = " + std::to_string(k));
      multiplier_warned = true;
    }

    prev_step = rec.step_x;
    s = std::move(next);

    if (s.rho > params.rho_guard) {
      throw AlbumError(ErrorCode::kDivergence,
                       "penalty exceeded " + std::to_string(params.rho_guard) +
                           " at k = " + std::to_string(k) + "; zone never identified (check d_bar)");
    }
    if (rec.kkt.max() <= params.stop_tol) {
      report.converged = true;
      report.status = RunStatus::kConverged;
      break;
    }
  }

  report.final_state = s;
  report.k_statio = detect_stabilization(report);
  report.k_info = detect_zone_entry(report, x0_in_zone);
  return report;
}

}  // namespace album

#endif  // ALBUM_DRIVER_HPP_
