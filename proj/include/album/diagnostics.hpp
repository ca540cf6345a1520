#ifndef ALBUM_DIAGNOSTICS_HPP_
#define ALBUM_DIAGNOSTICS_HPP_

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "album/analysis.hpp"
#include "album/driver.hpp"

namespace album {

enum class Verdict { kPass, kFail, kNotApplicable };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kPass: return "pass";
    case Verdict::kFail: return "fail";
    case Verdict::kNotApplicable: return "not applicable";
  }
  return "unknown";
}

/// Outcome of one trace check. worst is the largest violation (or the
/// statistic for ratio checks); worst_k the iteration where it occurred.
struct CheckResult {
  std::string name;
  Verdict verdict = Verdict::kPass;
  double worst = 0.0;
  int worst_k = -1;
  int checked = 0;
  std::string note;

  bool passed() const { return verdict == Verdict::kPass; }
};

struct ConditionReport {
  CheckResult c1;
  CheckResult c2;
  CheckResult c3;
  CheckResult c4;

  bool all_pass() const { return c1.passed() && c2.passed() && c3.passed() && c4.passed(); }
};

namespace detail {

inline void record_violation(CheckResult& r, double excess, int k) {
  ++r.checked;
  if (r.worst_k < 0 || excess > r.worst) {
    r.worst = excess;
    r.worst_k = k;
  }
  if (excess > 0.0) r.verdict = Verdict::kFail;
}

inline ConditionReport check_conditions(const RunReport& report, double inner_tol,
                                        const std::optional<MapConstants>& fixed) {
  ConditionReport out;
  out.c1.name = "C1 sufficient descent";
  out.c2.name = "C2 gradient bound";
  out.c3.name = "C3 u-subgradient bound";
  out.c4.name = "C4 continuity (tail surrogate)";
  for (const auto& r : report.records) {
    const MapConstants c = fixed ? *fixed : r.constants;
    const double tol = 10.0 * inner_tol * (1.0 + r.step_x);
    const double s2 = r.step_x * r.step_x;
    const double c1 = r.laug_primal + 0.5 * c.a * s2 - r.laug_start;
    const double c2 = r.grad_norm - c.b * r.step_x;
    const double c3 = r.witness_norm - c.c * r.step_x;
    detail::record_violation(out.c1, c1 - tol, r.k);
    detail::record_violation(out.c2, c2 - tol, r.k);
    detail::record_violation(out.c3, c3 - tol, r.k);
  }

  // C4 quantifies over convergent subsequences; the surrogate asks that h(u^k)
  // on the last quarter of the trace stays below h(u_final) + 1e-6.
  out.c4.note = "surrogate: max h(u^k) over the trace tail <= h(u_final) + 1e-6";
  const auto n = report.records.size();
  if (n > 0) {
    const double h_final = report.records.back().h_u;
    for (std::size_t i = n - n / 4 - 1; i < n; ++i) {
      const auto& r = report.records[i];
      detail::record_violation(out.c4, r.h_u - h_final - 1e-6, r.k);
    }
  }
  return out;
}

}  // namespace detail

/// Checks C1-C3 with the constants recorded at each step and the C4 tail
/// surrogate. Slack allowance 10 inner_tol (1 + ||x^{k+1} - x^k||).
inline ConditionReport check_c1_c4(const RunReport& report, double inner_tol) {
  return detail::check_conditions(report, inner_tol, std::nullopt);
}

/// Same checks with one set of constants imposed on every step.
inline ConditionReport check_c1_c4(const RunReport& report, double inner_tol, const MapConstants& constants) {
  return detail::check_conditions(report, inner_tol, constants);
}

/// E_beta(z^k, x^{k-1}) - E_beta(z^{k+1}, x^k) >= tau ||x^{k+1} - x^k||^2 for
/// every k >= max(k_statio, 1), slack 1e-10 (1 + |E|). Uses the tau recorded
/// by the driver unless one is given.
inline CheckResult check_lyapunov_descent(const RunReport& report, std::optional<double> tau = std::nullopt) {
  CheckResult out;
  out.name = "Lyapunov descent";
  const std::optional<int> k_statio = report.k_statio ? report.k_statio : detect_stabilization(report);
  if (!k_statio) {
    out.verdict = Verdict::kNotApplicable;
    out.note = "penalty never stabilized";
    return out;
  }
  const int k_from = std::max(*k_statio, 1);
  for (const auto& r : report.records) {
    if (r.k < k_from) continue;
    const double t = tau.value_or(r.tau);
    const double scale = 1.0 + std::max(std::abs(r.lyapunov_prev), std::abs(r.lyapunov_next));
    const double shortfall = t * r.step_x * r.step_x - (r.lyapunov_prev - r.lyapunov_next);
    detail::record_violation(out, shortfall - 1e-10 * scale, r.k);
  }
  out.note = "checked from k = " + std::to_string(k_from);
  return out;
}

/// Tail ratio sum_{k >= 3K/4} steps_k / sum_k steps_k; pass when <= 0.05.
inline CheckResult check_finite_length(std::span<const double> steps, const std::string& name = "finite length") {
  CheckResult out;
  out.name = name;
  const std::size_t n = steps.size();
  double total = 0.0;
  double tail = 0.0;
  const std::size_t from = (3 * n) / 4;
  for (std::size_t i = 0; i < n; ++i) {
    total += steps[i];
    if (i >= from) tail += steps[i];
  }
  out.checked = static_cast<int>(n);
  out.worst = total > 0.0 ? tail / total : 0.0;
  out.worst_k = static_cast<int>(from);
  out.verdict = out.worst <= 0.05 ? Verdict::kPass : Verdict::kFail;
  out.note = "tail ratio from k = " + std::to_string(from);
  return out;
}

inline CheckResult check_finite_length(const RunReport& report) {
  std::vector<double> steps;
  steps.reserve(report.records.size());
  for (const auto& r : report.records) steps.push_back(r.step_x);
  return check_finite_length(std::span<const double>(steps));
}

/// Decay proxy for square-summability of the primal steps: the sum of
/// ||dx_k||^2 over the second half of the trace must not exceed the first half.
inline CheckResult check_square_summability(const RunReport& report) {
  CheckResult out;
  out.name = "square summability";
  const std::size_t n = report.records.size();
  double head = 0.0;
  double tail = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double s2 = report.records[i].step_x * report.records[i].step_x;
    (i >= n / 2 ? tail : head) += s2;
  }
  out.checked = static_cast<int>(n);
  out.worst = tail - head;
  out.worst_k = static_cast<int>(n / 2);
  out.verdict = tail <= head ? Verdict::kPass : Verdict::kFail;
  out.note = "second-half sum minus first-half sum of squared steps";
  return out;
}

/// ||q^{k+1}|| <= sigma1 ||x^{k+1} - x^k|| + sigma2 ||x^k - x^{k-1}|| for
/// k >= max(k_statio, 1), slack 1e-8 (1 + rhs).
inline CheckResult check_subgradient_bound(const RunReport& report, const SubgradientBound& bound) {
  CheckResult out;
  out.name = "subgradient bound";
  if (!report.k_statio) {
    out.verdict = Verdict::kNotApplicable;
    out.note = "penalty never stabilized";
    return out;
  }
  const int k_from = std::max(*report.k_statio, 1);
  for (const auto& r : report.records) {
    if (r.k < k_from) continue;
    const double rhs = bound.sigma1 * r.step_x + bound.sigma2 * r.prev_step_x;
    detail::record_violation(out, r.subgradient_norm - rhs - 1e-8 * (1.0 + rhs), r.k);
  }
  return out;
}

/// Minimum of sqrt(lambda_min(JF JF^T)) over visited iterates in the zone
/// against the declared gamma. Only a sample: regularity away from the
/// visited points is not checkable.
inline CheckResult check_regularity_samples(const RunReport& report, double gamma) {
  CheckResult out;
  out.name = "regularity samples";
  double lowest = kInfinity;
  for (const auto& r : report.records) {
    if (!r.in_zone) continue;
    ++out.checked;
    if (r.gamma_sample < lowest) {
      lowest = r.gamma_sample;
      out.worst_k = r.k;
    }
  }
  if (out.checked == 0) {
    out.verdict = Verdict::kNotApplicable;
    out.note = "no iterate in the zone";
    return out;
  }
  out.worst = lowest;
  out.verdict = lowest >= gamma * (1.0 - 1e-9) ? Verdict::kPass : Verdict::kFail;
  out.note = "minimum sampled regularity";
  return out;
}

/// Post-hoc dual bound with d1, d2 built from the running multiplier bound,
/// checked from max(1, k_info).
inline CheckResult check_dual_sequence(const CompositeProblem& p, const RunReport& report) {
  CheckResult out;
  out.name = "dual sequence bound";
  if (report.records.empty()) return out;
  const double b = report.records.back().constants.b;
  const DualBound d = dual_bound_constants(p.lipschitz_f0, p.lipschitz_F, report.running_lambda, b, p.gamma);
  const int k_from = std::max(1, report.k_info.value_or(1));
  for (const auto& r : report.records) {
    if (r.k < k_from) continue;
    const double rhs = d.d1 * r.step_x * r.step_x + d.d2 * r.prev_step_x * r.prev_step_x;
    detail::record_violation(out, r.step_y * r.step_y - rhs - 1e-8 * (1.0 + rhs), r.k);
  }
  out.note = "d1 = " + std::to_string(d.d1) + ", d2 = " + std::to_string(d.d2);
  return out;
}

struct DiagnosticsReport {
  ConditionReport conditions;
  CheckResult lyapunov;
  CheckResult finite_length;
  CheckResult square_summability;
  CheckResult dual_sequence;
  CheckResult regularity;

  std::vector<const CheckResult*> all() const {
    return {&conditions.c1, &conditions.c2, &conditions.c3, &conditions.c4, &lyapunov,
            &finite_length, &square_summability, &dual_sequence, &regularity};
  }
};

inline DiagnosticsReport run_diagnostics(const CompositeProblem& p, const RunReport& report, double inner_tol) {
  DiagnosticsReport d;
  d.conditions = check_c1_c4(report, inner_tol);
  d.lyapunov = check_lyapunov_descent(report);
  d.finite_length = check_finite_length(report);
  d.square_summability = check_square_summability(report);
  d.dual_sequence = check_dual_sequence(p, report);
  d.regularity = check_regularity_samples(report, p.gamma);
  return d;
}

}  // namespace album

#endif  // ALBUM_DIAGNOSTICS_HPP_
