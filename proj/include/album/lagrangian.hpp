#ifndef ALBUM_LAGRANGIAN_HPP_
#define ALBUM_LAGRANGIAN_HPP_

#include <algorithm>
#include <cmath>

#include "album/model.hpp"

namespace album {

/// Iterate of the multiplier method: (x, u, y) plus the previous primal x_prev.
struct SolverState {
  Vector x;
  Vector u;
  Vector y;
  Vector x_prev;
  double rho = 1.0;
  double beta = 0.0;
  int k = 0;
};

/// f0(x) + h(u) + <y, F(x) - u> + (rho/2)||F(x) - u||^2. Returns +inf when h(u) is.
inline double eval_aug_lagrangian(const CompositeProblem& p, const Vector& x, const Vector& u,
                                  const Vector& y, double rho) {
  detail::require_size(u.size(), p.m, "eval_aug_lagrangian u");
  detail::require_size(y.size(), p.m, "eval_aug_lagrangian y");
  const double hu = p.h.value(u);
  if (std::isinf(hu)) return kInfinity;
  const Vector r = eval_F(p, x).value - u;
  return eval_f0(p, x).value + hu + y.dot(r) + 0.5 * rho * r.squaredNorm();
}

/// grad_x Laug = grad f0(x) + JF(x)^T (y + rho (F(x) - u)).
inline Vector grad_x_aug_lagrangian(const CompositeProblem& p, const Vector& x, const Vector& u,
                                    const Vector& y, double rho) {
  const MapJet jet = eval_F(p, x);
  return eval_f0(p, x).gradient + jet.jacobian.transpose() * (y + rho * (jet.value - u));
}

/// E_beta(x, u, y, w) = Laug_rho(x, u, y) + beta ||x - w||^2. beta = 0 is allowed.
inline double eval_lyapunov(const CompositeProblem& p, const Vector& x, const Vector& u, const Vector& y,
                            const Vector& w, double rho, double beta) {
  return eval_aug_lagrangian(p, x, u, y, rho) + beta * (x - w).squaredNorm();
}

inline Vector multiplier_step(const CompositeProblem& p, const Vector& x_next, const Vector& u_next,
                              const Vector& y, double rho) {
  return y + rho * (eval_F(p, x_next).value - u_next);
}

struct KktResiduals {
  double stationarity = 0.0;  // ||grad f0(x) + JF(x)^T y||
  double feasibility = 0.0;   // ||F(x) - u||
  double dual = 0.0;          // ||u - prox_{h/rho}(u + y/rho)||

  double max() const { return std::max({stationarity, feasibility, dual}); }
};

inline KktResiduals kkt_residuals(const CompositeProblem& p, const Vector& x, const Vector& u,
                                  const Vector& y, double rho) {
  const MapJet jet = eval_F(p, x);
  KktResiduals r;
  r.stationarity = (eval_f0(p, x).gradient + jet.jacobian.transpose() * y).norm();
  r.feasibility = (jet.value - u).norm();
  r.dual = (u - prox_h(p, u + y / rho, 1.0 / rho)).norm();
  return r;
}

}  // namespace album

#endif  // ALBUM_LAGRANGIAN_HPP_
