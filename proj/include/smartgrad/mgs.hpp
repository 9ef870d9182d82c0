#pragma once

// Modified Gram-Schmidt orthonormalization.
//
// Two entry points share one projection kernel:
//   mgs_factor          strict QR factorization, reports the smallest residual
//                       so callers can reject singular inputs;
//   mgs_orthonormalize  always returns a full orthonormal set, replacing any
//                       collapsed column with the best canonical vector.

#include "smartgrad/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace smartgrad {

/// Relative residual below which a column counts as linearly dependent.
inline constexpr double mgs_degenerate_tol = 1e-10;

namespace detail {

// Removes from v its components along q.col(0..count-1), one column at a
// time against the running residual. When the residual shrinks below half
// of its starting norm, a second sweep recovers the orthogonality lost to
// cancellation. Coefficients are accumulated into r when given.
inline void mgs_project_out(const Matrix& q, Eigen::Index count, Eigen::Ref<Vector> v,
                            double* r = nullptr) {
  const double before = v.norm();
  for (int sweep = 0; sweep < 2; ++sweep) {
    for (Eigen::Index i = 0; i < count; ++i) {
      const double c = q.col(i).dot(v);
      v -= c * q.col(i);
      if (r != nullptr) r[i] += c;
    }
    if (v.norm() > 0.5 * before) break;
  }
}

}  // namespace detail

struct MgsFactor {
  Matrix q;  ///< orthonormal columns, same shape as the input
  Matrix r;  ///< upper triangular, input = q * r
  /// min_j r(j,j) / max_j |input column j|; zero for an all-zero input.
  double min_residual_ratio = 0.0;
};

/// QR factorization by MGS, without any recovery. A collapsed column leaves
/// a zero column in q and a zero diagonal in r; check min_residual_ratio.
inline MgsFactor mgs_factor(const Matrix& m) {
  const Eigen::Index rows = m.rows();
  const Eigen::Index cols = m.cols();
  MgsFactor out{Matrix::Zero(rows, cols), Matrix::Zero(cols, cols), 0.0};
  double max_norm = 0.0;
  for (Eigen::Index j = 0; j < cols; ++j) max_norm = std::max(max_norm, m.col(j).norm());
  if (cols == 0 || max_norm == 0.0) return out;

  double min_diag = std::numeric_limits<double>::infinity();
  Vector v(rows);
  for (Eigen::Index j = 0; j < cols; ++j) {
    v = m.col(j);
    detail::mgs_project_out(out.q, j, v, out.r.col(j).data());
    const double norm = v.norm();
    out.r(j, j) = norm;
    min_diag = std::min(min_diag, norm);
    if (norm > mgs_degenerate_tol * max_norm) out.q.col(j) = v / norm;
  }
  out.min_residual_ratio = min_diag / max_norm;
  return out;
}

/// Orthonormalizes the columns of m (rows >= cols) in order. Column j of the
/// result spans the same new direction as column j of m relative to the
/// earlier columns. A column whose residual falls below mgs_degenerate_tol
/// times its own norm is replaced by the canonical vector e_k with the
/// largest residual against the columns accepted so far.
inline Matrix mgs_orthonormalize(const Matrix& m) {
  const Eigen::Index rows = m.rows();
  const Eigen::Index cols = m.cols();
  if (cols > rows) throw dimension_error("mgs_orthonormalize: more columns than rows");
  if (!m.allFinite()) throw precondition_error("mgs_orthonormalize: non-finite entries");

  Matrix q = Matrix::Zero(rows, cols);
  Vector v(rows);
  for (Eigen::Index j = 0; j < cols; ++j) {
    v = m.col(j);
    const double original = v.norm();
    detail::mgs_project_out(q, j, v);
    double norm = v.norm();
    if (original == 0.0 || norm < mgs_degenerate_tol * original) {
      // Residual of e_k against orthonormal columns is 1 - sum_i q(k,i)^2.
      Eigen::Index best = 0;
      double best_residual = -1.0;
      for (Eigen::Index k = 0; k < rows; ++k) {
        const double residual = 1.0 - q.row(k).head(j).squaredNorm();
        if (residual > best_residual) {
          best_residual = residual;
          best = k;
        }
      }
      v = Vector::Unit(rows, best);
      detail::mgs_project_out(q, j, v);
      norm = v.norm();
    }
    q.col(j) = v / norm;
  }
  return q;
}

/// max_i sum_j |(Q^T Q - I)(i,j)|
inline double orthonormality_error(const Matrix& q) {
  const Matrix gram = q.transpose() * q - Matrix::Identity(q.cols(), q.cols());
  return gram.cwiseAbs().rowwise().sum().maxCoeff();
}

}  // namespace smartgrad
