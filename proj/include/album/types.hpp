#ifndef ALBUM_TYPES_HPP_
#define ALBUM_TYPES_HPP_

#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace album {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class ErrorCode {
  kDimensionMismatch,
  kInvalidArgument,
  kInnerSolverFailed,
  kNonFinite,
  kDivergence,
  kConfig,
  kIo,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "dimension mismatch";
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kInnerSolverFailed: return "inner solver failed";
    case ErrorCode::kNonFinite: return "non-finite value";
    case ErrorCode::kDivergence: return "divergence guard";
    case ErrorCode::kConfig: return "config error";
    case ErrorCode::kIo: return "i/o error";
  }
  return "unknown";
}

/// Every failure raised by the library carries one of the codes above.
class AlbumError : public std::runtime_error {
 public:
  AlbumError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

namespace detail {

/// Compact scientific rendering for error messages.
inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) throw AlbumError(code, what);
}

inline void require_size(Eigen::Index actual, Eigen::Index expected, const char* what) {
  if (actual != expected) {
    throw AlbumError(ErrorCode::kDimensionMismatch,
                     std::string(what) + ": expected length " + std::to_string(expected) +
                         ", got " + std::to_string(actual));
  }
}

}  // namespace detail
}  // namespace album

#endif  // ALBUM_TYPES_HPP_
