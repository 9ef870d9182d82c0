#pragma once

#include "smartgrad/core.hpp"

#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>

namespace smartgrad {

enum class FdKind { central, forward };
enum class FdOrder { first, fourth };

/// Finite-difference stencil choice plus absolute step length.
class FdScheme {
 public:
  static constexpr double default_step = 1e-3;

  constexpr FdScheme() = default;

  FdScheme(FdKind kind, FdOrder order, double step = default_step)
      : kind_(kind), order_(order), step_(step) {
    if (!(step > 0.0) || !std::isfinite(step)) {
      throw precondition_error("FdScheme: step must be positive and finite");
    }
    if (kind == FdKind::forward && order == FdOrder::fourth) {
      throw precondition_error("FdScheme: fourth-order forward differences are not supported");
    }
  }

  static FdScheme central1(double step = default_step) {
    return {FdKind::central, FdOrder::first, step};
  }
  static FdScheme central4(double step = default_step) {
    return {FdKind::central, FdOrder::fourth, step};
  }
  static FdScheme forward1(double step = default_step) {
    return {FdKind::forward, FdOrder::first, step};
  }

  /// Parses the CLI names `central1`, `central4`, `forward1`.
  static FdScheme parse(std::string_view name, double step = default_step) {
    if (name == "central1") return central1(step);
    if (name == "central4") return central4(step);
    if (name == "forward1") return forward1(step);
    throw precondition_error("unknown finite-difference scheme '" + std::string(name) + "'");
  }

  [[nodiscard]] constexpr FdKind kind() const noexcept { return kind_; }
  [[nodiscard]] constexpr FdOrder order() const noexcept { return order_; }
  [[nodiscard]] constexpr double step() const noexcept { return step_; }

  [[nodiscard]] std::string name() const {
    if (kind_ == FdKind::forward) return "forward1";
    return order_ == FdOrder::first ? "central1" : "central4";
  }

  /// Objective evaluations needed for one gradient in dimension n.
  [[nodiscard]] std::size_t gradient_evals(std::size_t n) const noexcept {
    if (kind_ == FdKind::forward) return n + 1;
    return order_ == FdOrder::first ? 2 * n : 4 * n;
  }

 private:
  FdKind kind_ = FdKind::central;
  FdOrder order_ = FdOrder::first;
  double step_ = default_step;
};

}  // namespace smartgrad
