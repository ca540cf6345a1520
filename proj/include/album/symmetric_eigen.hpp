#ifndef ALBUM_SYMMETRIC_EIGEN_HPP_
#define ALBUM_SYMMETRIC_EIGEN_HPP_

#include <algorithm>
#include <cmath>
#include <vector>

#include "album/types.hpp"

namespace album {

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations, sorted
/// ascending. Sweeps stop once the off-diagonal Frobenius norm drops to
/// 1e-12 times the Frobenius norm of the input.
inline std::vector<double> symmetric_eigenvalues(const Matrix& input, int max_sweeps = 100) {
  detail::require(input.rows() == input.cols(), ErrorCode::kInvalidArgument,
                  "symmetric_eigenvalues: matrix must be square");
  const Eigen::Index n = input.rows();
  if (n == 0) return {};

  const double scale = input.norm();
  const double sym_tol = 1e-12 * std::max(1.0, scale);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (std::abs(input(i, j) - input(j, i)) > sym_tol) {
        throw AlbumError(ErrorCode::kInvalidArgument, "symmetric_eigenvalues: matrix is not symmetric");
      }
    }
  }

  Matrix a = 0.5 * (input + input.transpose());
  const double stop = 1e-12 * scale;

  auto off_norm = [&]() {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  for (int sweep = 0; sweep < max_sweeps && off_norm() > stop; ++sweep) {
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Rotation angle zeroing a(p,q); t = tan(theta) chosen with |theta| <= pi/4.
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
      }
    }
  }

  std::vector<double> values(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) values[static_cast<std::size_t>(i)] = a(i, i);
  std::sort(values.begin(), values.end());
  return values;
}

inline double lambda_min_symmetric(const Matrix& a) { return symmetric_eigenvalues(a).front(); }

inline double lambda_max_symmetric(const Matrix& a) { return symmetric_eigenvalues(a).back(); }

/// Spectral norm of a rectangular matrix, sqrt(lambda_max(M^T M)).
inline double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  const Matrix gram = m.rows() <= m.cols() ? Matrix(m * m.transpose()) : Matrix(m.transpose() * m);
  return std::sqrt(std::max(0.0, lambda_max_symmetric(gram)));
}

}  // namespace album

#endif  // ALBUM_SYMMETRIC_EIGEN_HPP_
