#pragma once

#include "smartgrad/basis.hpp"
#include "smartgrad/core.hpp"
#include "smartgrad/mgs.hpp"

#include <cstddef>

namespace smartgrad {

/// Steps with ||delta_x||_2 at or below this leave the history untouched.
inline constexpr double zero_step_tol = 1e-14;

/// Limited-memory set of recent descent directions, stored as one
/// orthonormal n x n basis. The newest step direction is always column 0;
/// each update pushes the previous columns one slot to the right and drops
/// the oldest.
class DirectionHistory {
 public:
  explicit DirectionHistory(Eigen::Index dim) : basis_(BasisMatrix::identity(dim)) {}

  /// Folds in the step delta_x = x_k - x_{k-1}. Returns false (and changes
  /// nothing) for a zero step.
  bool update(const Vector& delta_x) {
    detail::require_dim(delta_x.size(), dim(), "DirectionHistory::update");
    if (!delta_x.allFinite()) throw precondition_error("DirectionHistory::update: non-finite step");
    if (delta_x.norm() <= zero_step_tol) return false;

    const Eigen::Index n = dim();
    Matrix candidate(n, n);
    candidate.col(0) = delta_x;
    candidate.rightCols(n - 1) = basis_.matrix().leftCols(n - 1);
    basis_ = BasisMatrix::orthonormal(mgs_orthonormalize(candidate));
    ++updates_seen_;
    return true;
  }

  [[nodiscard]] const BasisMatrix& basis() const noexcept { return basis_; }
  [[nodiscard]] Eigen::Index dim() const noexcept { return basis_.dim(); }
  [[nodiscard]] std::size_t updates_seen() const noexcept { return updates_seen_; }

 private:
  BasisMatrix basis_;
  std::size_t updates_seen_ = 0;
};

}  // namespace smartgrad
