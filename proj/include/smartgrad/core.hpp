#pragma once

// Shared vocabulary types and error classes for the smartgrad library.

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace smartgrad {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A documented precondition of an operation was violated by the caller.
class precondition_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input vector or matrix sizes do not agree with the problem dimension.
class dimension_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A basis matrix is numerically singular.
class singular_basis_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require_dim(Eigen::Index actual, Eigen::Index expected, const char* what) {
  if (actual != expected) {
    throw dimension_error(std::string(what) + ": expected length " + std::to_string(expected) +
                          ", got " + std::to_string(actual));
  }
}

inline void require_finite(const Vector& x, const char* what) {
  if (!x.allFinite()) throw precondition_error(std::string(what) + ": non-finite input");
}

}  // namespace detail
}  // namespace smartgrad
