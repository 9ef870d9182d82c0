#pragma once

#include "smartgrad/core.hpp"

#include <cstddef>
#include <functional>
#include <utility>

namespace smartgrad {

/// Scalar objective f: R^n -> R with an evaluation counter.
///
/// The counter is a plain integer: counts are exact as long as one instance
/// is not shared between concurrently running estimators. Copies carry their
/// own counter.
class Objective {
 public:
  using Fn = std::function<double(const Vector&)>;

  Objective(Fn fn, Eigen::Index dim) : fn_(std::move(fn)), dim_(dim) {
    if (!fn_) throw precondition_error("Objective: empty function");
    if (dim_ <= 0) throw precondition_error("Objective: dimension must be positive");
  }

  double operator()(const Vector& x) const {
    detail::require_dim(x.size(), dim_, "Objective");
    ++eval_count_;
    return fn_(x);
  }

  [[nodiscard]] Eigen::Index dim() const noexcept { return dim_; }
  [[nodiscard]] std::size_t eval_count() const noexcept { return eval_count_; }
  void reset_count() noexcept { eval_count_ = 0; }

 private:
  Fn fn_;
  Eigen::Index dim_;
  mutable std::size_t eval_count_ = 0;
};

/// Gradient callback handed to optimizers.
using GradientFn = std::function<Vector(const Vector&)>;

}  // namespace smartgrad
