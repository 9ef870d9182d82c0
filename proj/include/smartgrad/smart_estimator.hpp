#pragma once

// Smart gradient wrapper: every gradient request at a new point is taken as
// an accepted iterate, its step from the previous request is folded into the
// direction history, and the gradient is estimated in the resulting basis.

#include "smartgrad/direction_history.hpp"
#include "smartgrad/finite_difference.hpp"
#include "smartgrad/objective.hpp"

#include <memory>
#include <optional>
#include <utility>

namespace smartgrad {

class SmartEstimator {
 public:
  SmartEstimator(Objective objective, FdScheme scheme)
      : objective_(std::move(objective)), scheme_(scheme), history_(objective_.dim()) {}

  /// Updates the history when x differs from the previous request, then
  /// estimates the gradient at x in the current basis.
  GradientEstimate gradient(const Vector& x) {
    detail::require_dim(x.size(), objective_.dim(), "SmartEstimator::gradient");
    detail::require_finite(x, "SmartEstimator::gradient");
    if (last_x_ && *last_x_ != x) history_.update(x - *last_x_);
    GradientEstimate est = gradient_in_basis(objective_, x, history_.basis(), scheme_);
    last_x_ = x;
    return est;
  }

  /// Hessian in the current basis. Does not touch the history.
  HessianEstimate hessian(const Vector& x) const {
    return hessian_in_basis(objective_, x, history_.basis(), scheme_);
  }

  [[nodiscard]] const DirectionHistory& history() const noexcept { return history_; }
  [[nodiscard]] const Objective& objective() const noexcept { return objective_; }
  [[nodiscard]] const FdScheme& scheme() const noexcept { return scheme_; }
  [[nodiscard]] const std::optional<Vector>& last_x() const noexcept { return last_x_; }

 private:
  Objective objective_;
  FdScheme scheme_;
  DirectionHistory history_;
  std::optional<Vector> last_x_;
};

/// Gradient callback backed by a shared SmartEstimator. Copies of the
/// callback share one history; separate make_smart calls do not.
class SmartGradient {
 public:
  SmartGradient(Objective objective, FdScheme scheme)
      : state_(std::make_shared<SmartEstimator>(std::move(objective), scheme)) {}

  Vector operator()(const Vector& x) const { return state_->gradient(x).values; }

  [[nodiscard]] SmartEstimator& estimator() const noexcept { return *state_; }

 private:
  std::shared_ptr<SmartEstimator> state_;
};

inline SmartGradient make_smart(Objective objective, FdScheme scheme = {}) {
  return {std::move(objective), scheme};
}

/// Plain canonical-basis callback, the baseline the smart wrapper replaces.
inline GradientFn make_vanilla(Objective objective, FdScheme scheme = {}) {
  return [f = std::move(objective), scheme](const Vector& x) {
    return vanilla_gradient(f, x, scheme).values;
  };
}

}  // namespace smartgrad
