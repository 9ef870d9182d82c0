#pragma once

// BFGS with a strong-Wolfe line search (bracketing + zoom).

#include "smartgrad/core.hpp"
#include "smartgrad/objective.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace smartgrad {

struct BfgsOptions {
  int max_iters = 200;
  double grad_tol = 1e-6;  ///< on ||g||_inf
  double wolfe_c1 = 1e-4;
  double wolfe_c2 = 0.9;
  double initial_inverse_hessian = 1.0;
  /// Rescale H0 by s^T y / y^T y before the first update.
  bool scale_initial_hessian = false;
  int max_line_search_steps = 50;
  /// Called with the inverse-Hessian approximation after every accepted step.
  std::function<void(const Matrix&)> observer;

  void validate() const {
    if (!(0.0 < wolfe_c1 && wolfe_c1 < wolfe_c2 && wolfe_c2 < 1.0)) {
      throw precondition_error("BfgsOptions: require 0 < c1 < c2 < 1");
    }
    if (max_iters < 1) throw precondition_error("BfgsOptions: max_iters must be >= 1");
    if (!(grad_tol >= 0.0)) throw precondition_error("BfgsOptions: grad_tol must be >= 0");
    if (!(initial_inverse_hessian > 0.0)) {
      throw precondition_error("BfgsOptions: initial_inverse_hessian must be positive");
    }
    if (max_line_search_steps < 1) throw precondition_error("BfgsOptions: max_line_search_steps must be >= 1");
  }
};

struct LineSearchResult {
  bool ok = false;
  double alpha = 0.0;
  double f = 0.0;
  Vector x;  ///< x + alpha d
  Vector g;  ///< gradient callback value at x (valid when ok)
};

namespace detail {

// Minimizer of the quadratic through (lo, f_lo, slope_lo) and (hi, f_hi),
// kept at least 10% of the interval away from either end.
inline double safeguarded_step(double lo, double f_lo, double slope_lo, double hi, double f_hi) {
  const double width = hi - lo;
  const double left = std::min(lo, hi) + 0.1 * std::abs(width);
  const double right = std::max(lo, hi) - 0.1 * std::abs(width);
  const double denom = 2.0 * (f_hi - f_lo - slope_lo * width);
  if (std::isfinite(f_hi) && denom > 0.0) {
    const double trial = lo - slope_lo * width * width / denom;
    if (std::isfinite(trial) && trial >= left && trial <= right) return trial;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// Finds alpha along the descent direction d satisfying the strong Wolfe
/// conditions
///   f(x + a d) <= f0 + c1 a g0.d   and   |g(x + a d).d| <= c2 |g0.d|.
/// The gradient callback is only invoked at points that already pass the
/// sufficient-decrease test; the last invocation on success is at the
/// returned point. Gives up after opts.max_line_search_steps trial points.
inline LineSearchResult line_search(const Objective& f, const GradientFn& grad, const Vector& x,
                                    const Vector& d, double f0, const Vector& g0,
                                    const BfgsOptions& opts, double alpha_init = 1.0) {
  const double slope0 = g0.dot(d);
  if (!(slope0 < 0.0)) throw precondition_error("line_search: d is not a descent direction");
  const double c1 = opts.wolfe_c1;
  const double c2 = opts.wolfe_c2;
  const double alpha_max = 1e10;
  int budget = opts.max_line_search_steps;

  LineSearchResult result;
  auto armijo = [&](double a, double fa) { return std::isfinite(fa) && fa <= f0 + c1 * a * slope0; };
  auto curvature = [&](double slope) { return std::abs(slope) <= -c2 * slope0; };

  // Zoom between lo (passes Armijo, lowest f so far) and hi.
  auto zoom = [&](double lo, double f_lo, double slope_lo, double hi, double f_hi) {
    while (budget-- > 0) {
      const double a = detail::safeguarded_step(lo, f_lo, slope_lo, hi, f_hi);
      if (a == lo || a == hi) break;
      Vector xa = x + a * d;
      const double fa = f(xa);
      if (!armijo(a, fa) || fa >= f_lo) {
        hi = a;
        f_hi = fa;
        continue;
      }
      Vector ga = grad(xa);
      const double slope = ga.dot(d);
      if (curvature(slope)) {
        result = {true, a, fa, std::move(xa), std::move(ga)};
        return;
      }
      if (slope * (hi - lo) >= 0.0) {
        hi = lo;
        f_hi = f_lo;
      }
      lo = a;
      f_lo = fa;
      slope_lo = slope;
    }
  };

  double prev = 0.0;
  double f_prev = f0;
  double slope_prev = slope0;
  double a = std::clamp(alpha_init, std::numeric_limits<double>::min(), alpha_max);
  for (bool first = true; budget-- > 0; first = false) {
    Vector xa = x + a * d;
    const double fa = f(xa);
    if (!armijo(a, fa) || (!first && fa >= f_prev)) {
      zoom(prev, f_prev, slope_prev, a, fa);
      return result;
    }
    Vector ga = grad(xa);
    const double slope = ga.dot(d);
    if (curvature(slope)) return {true, a, fa, std::move(xa), std::move(ga)};
    if (slope >= 0.0) {
      zoom(a, fa, slope, prev, f_prev);
      return result;
    }
    prev = a;
    f_prev = fa;
    slope_prev = slope;
    a = std::min(2.0 * a, alpha_max);
  }
  return result;
}

struct OptimResult {
  Vector x_opt;
  double f_opt = 0.0;
  int iterations = 0;
  std::vector<Vector> trajectory;  ///< accepted iterates, starting at x0
  std::vector<Vector> gradients;   ///< callback value at each accepted iterate
  std::vector<double> values;      ///< f at each accepted iterate
  std::size_t grad_calls = 0;
  bool converged = false;
};

/// Minimizes f from x0 using the supplied gradient callback.
///
/// Stops when ||g||_inf <= grad_tol (converged), after max_iters, or when
/// the line search fails (best point so far, converged = false). The BFGS
/// inverse-Hessian update is skipped whenever s^T y <= 1e-10 ||s|| ||y||.
inline OptimResult bfgs_minimize(const Objective& f, const GradientFn& grad, const Vector& x0,
                                 const BfgsOptions& opts = {}) {
  opts.validate();
  detail::require_dim(x0.size(), f.dim(), "bfgs_minimize");
  detail::require_finite(x0, "bfgs_minimize");

  const Eigen::Index n = x0.size();
  OptimResult out;
  std::size_t grad_calls = 0;
  GradientFn counted = [&](const Vector& p) {
    ++grad_calls;
    return grad(p);
  };

  Vector x = x0;
  double fx = f(x);
  Vector g = counted(x);
  Matrix inv_h = opts.initial_inverse_hessian * Matrix::Identity(n, n);
  out.trajectory.push_back(x);
  out.gradients.push_back(g);
  out.values.push_back(fx);

  bool converged = g.lpNorm<Eigen::Infinity>() <= opts.grad_tol;
  for (int k = 0; k < opts.max_iters && !converged; ++k) {
    if (!g.allFinite()) break;
    Vector d = -inv_h * g;
    if (!(g.dot(d) < 0.0)) {
      inv_h = opts.initial_inverse_hessian * Matrix::Identity(n, n);
      d = -inv_h * g;
      if (!(g.dot(d) < 0.0)) break;
    }
    LineSearchResult ls = line_search(f, counted, x, d, fx, g, opts);
    if (!ls.ok) break;

    const Vector s = ls.x - x;
    const Vector y = ls.g - g;
    const double sy = s.dot(y);
    if (sy > 1e-10 * s.norm() * y.norm()) {
      if (k == 0 && opts.scale_initial_hessian) {
        inv_h = (sy / y.squaredNorm()) * Matrix::Identity(n, n);
      }
      const double rho = 1.0 / sy;
      const Vector hy = inv_h * y;
      // (I - rho s y^T) H (I - rho y s^T) + rho s s^T, expanded.
      inv_h += (rho * rho * y.dot(hy) + rho) * (s * s.transpose()) -
               rho * (hy * s.transpose() + s * hy.transpose());
      inv_h = 0.5 * (inv_h + inv_h.transpose()).eval();
    }

    x = std::move(ls.x);
    fx = ls.f;
    g = std::move(ls.g);
    out.trajectory.push_back(x);
    out.gradients.push_back(g);
    out.values.push_back(fx);
    if (opts.observer) opts.observer(inv_h);
    converged = g.lpNorm<Eigen::Infinity>() <= opts.grad_tol;
  }

  out.x_opt = x;
  out.f_opt = fx;
  out.iterations = static_cast<int>(out.trajectory.size()) - 1;
  out.grad_calls = grad_calls;
  out.converged = converged;
  return out;
}

}  // namespace smartgrad
