#pragma once

#include "smartgrad/core.hpp"
#include "smartgrad/mgs.hpp"

#include <optional>
#include <string>
#include <utility>

namespace smartgrad {

/// Tolerance on ||G^T G - I||_inf for a basis to count as orthonormal.
inline constexpr double orthonormal_tol = 1e-12;

/// Square non-singular matrix whose columns are the difference directions.
///
/// Orthonormal bases transform gradients with G itself. General bases keep
/// their MGS factorization so that G^T y = g can be solved without forming
/// an inverse.
class BasisMatrix {
 public:
  static BasisMatrix identity(Eigen::Index n) {
    if (n <= 0) throw precondition_error("BasisMatrix: dimension must be positive");
    BasisMatrix b(Matrix::Identity(n, n));
    b.orthonormal_ = true;
    b.identity_ = true;
    return b;
  }

  /// Throws precondition_error unless g is orthonormal within orthonormal_tol.
  static BasisMatrix orthonormal(Matrix g) {
    require_square(g);
    if (!g.allFinite() || orthonormality_error(g) > orthonormal_tol) {
      throw precondition_error("BasisMatrix: matrix is not orthonormal");
    }
    BasisMatrix b(std::move(g));
    b.orthonormal_ = true;
    return b;
  }

  /// Any non-singular square matrix. Orthonormal input is detected and
  /// flagged. Throws singular_basis_error when an MGS residual drops below
  /// 1e-10 times the largest column norm.
  static BasisMatrix general(Matrix g) {
    require_square(g);
    if (!g.allFinite()) throw precondition_error("BasisMatrix: non-finite entries");
    if (orthonormality_error(g) <= orthonormal_tol) return orthonormal(std::move(g));
    MgsFactor factor = mgs_factor(g);
    if (!(factor.min_residual_ratio >= mgs_degenerate_tol)) {
      throw singular_basis_error("BasisMatrix: basis is singular or ill-conditioned (residual ratio " +
                                 std::to_string(factor.min_residual_ratio) + ")");
    }
    BasisMatrix b(std::move(g));
    b.factor_ = std::move(factor);
    return b;
  }

  [[nodiscard]] const Matrix& matrix() const noexcept { return g_; }
  [[nodiscard]] Eigen::Index dim() const noexcept { return g_.rows(); }
  [[nodiscard]] bool is_orthonormal() const noexcept { return orthonormal_; }
  [[nodiscard]] bool is_identity() const noexcept { return identity_; }
  [[nodiscard]] auto column(Eigen::Index j) const { return g_.col(j); }

  /// G^{-T} v.
  [[nodiscard]] Vector apply_inverse_transpose(const Vector& v) const {
    detail::require_dim(v.size(), dim(), "BasisMatrix::apply_inverse_transpose");
    if (identity_) return v;
    if (orthonormal_) return g_ * v;
    // G = QR, so G^T y = v  <=>  R^T (Q^T y) = v.
    const Vector z = factor_->r.transpose().triangularView<Eigen::Lower>().solve(v);
    return factor_->q * z;
  }

 private:
  explicit BasisMatrix(Matrix g) : g_(std::move(g)) {}

  static void require_square(const Matrix& g) {
    if (g.rows() != g.cols() || g.rows() == 0) {
      throw dimension_error("BasisMatrix: matrix must be square and non-empty");
    }
  }

  Matrix g_;
  bool orthonormal_ = false;
  bool identity_ = false;
  std::optional<MgsFactor> factor_;
};

}  // namespace smartgrad
