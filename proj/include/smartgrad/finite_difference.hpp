#pragma once

// Finite-difference derivatives of an Objective, either along the canonical
// axes or along the columns of a supplied basis G. For a basis, the
// reparametrized function h(phi) = f(x + G phi) is differentiated at phi = 0
// and the result is mapped back with G^{-T}.

#include "smartgrad/basis.hpp"
#include "smartgrad/core.hpp"
#include "smartgrad/fd_scheme.hpp"
#include "smartgrad/objective.hpp"

#include <cmath>
#include <cstddef>

namespace smartgrad {

struct GradientEstimate {
  Vector values;       ///< gradient in canonical coordinates
  Vector directional;  ///< derivatives of h along each basis column
  BasisMatrix basis;
  std::size_t evals_used = 0;
};

struct HessianEstimate {
  Matrix values;  ///< symmetric, canonical coordinates
  BasisMatrix basis;
  std::size_t evals_used = 0;
};

inline constexpr double unit_vector_tol = 1e-12;

namespace detail {

// Difference quotient along v (not required to be unit length). fx is f(x),
// used only by the forward scheme.
inline double difference_quotient(const Objective& f, const Vector& x, const Vector& v,
                                  const FdScheme& scheme, double fx) {
  const double h = scheme.step();
  if (scheme.kind() == FdKind::forward) {
    return (f(x + h * v) - fx) / h;
  }
  if (scheme.order() == FdOrder::first) {
    return (f(x + h * v) - f(x - h * v)) / (2.0 * h);
  }
  const double f_p2 = f(x + (2.0 * h) * v);
  const double f_p1 = f(x + h * v);
  const double f_m1 = f(x - h * v);
  const double f_m2 = f(x - (2.0 * h) * v);
  return (-f_p2 + 8.0 * f_p1 - 8.0 * f_m1 + f_m2) / (12.0 * h);
}

// Derivatives of h(phi) = f(x + G phi) at phi = 0 along each column of G.
inline Vector basis_derivatives(const Objective& f, const Vector& x, const Matrix& g,
                                const FdScheme& scheme) {
  const Eigen::Index n = x.size();
  const double fx = scheme.kind() == FdKind::forward ? f(x) : 0.0;
  Vector out(n);
  Vector column(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    column = g.col(j);
    out[j] = difference_quotient(f, x, column, scheme, fx);
  }
  return out;
}

inline void check_point(const Objective& f, const Vector& x, const char* what) {
  require_dim(x.size(), f.dim(), what);
  require_finite(x, what);
}

}  // namespace detail

/// Derivative of f at x along the unit vector u. Non-finite objective values
/// propagate into the result.
inline double directional_derivative(const Objective& f, const Vector& x, const Vector& u,
                                     const FdScheme& scheme) {
  detail::check_point(f, x, "directional_derivative");
  detail::require_dim(u.size(), f.dim(), "directional_derivative");
  if (!(std::abs(u.norm() - 1.0) <= unit_vector_tol)) {
    throw precondition_error("directional_derivative: direction is not a unit vector");
  }
  const double fx = scheme.kind() == FdKind::forward ? f(x) : 0.0;
  return detail::difference_quotient(f, x, u, scheme, fx);
}

/// Estimate in basis G: values = G^{-T} (grad h)(0) with h(phi) = f(x + G phi).
/// Orthonormal G is applied directly; general G goes through its stored MGS
/// factorization.
inline GradientEstimate gradient_in_basis(const Objective& f, const Vector& x,
                                          const BasisMatrix& basis, const FdScheme& scheme) {
  detail::check_point(f, x, "gradient_in_basis");
  detail::require_dim(basis.dim(), f.dim(), "gradient_in_basis: basis");
  const std::size_t before = f.eval_count();
  Vector directional = detail::basis_derivatives(f, x, basis.matrix(), scheme);
  Vector values = basis.apply_inverse_transpose(directional);
  return {std::move(values), std::move(directional), basis, f.eval_count() - before};
}

/// Finite-difference gradient along the canonical axes.
inline GradientEstimate vanilla_gradient(const Objective& f, const Vector& x, const FdScheme& scheme) {
  return gradient_in_basis(f, x, BasisMatrix::identity(f.dim()), scheme);
}

/// Hessian estimate in an orthonormal basis G.
///
/// The Hessian of h(phi) = f(x + G phi) is taken with central second
/// differences at step h (2n^2 + 1 evaluations; only scheme.step() is used)
/// and mapped back as G H_h G^T, then symmetrized.
inline HessianEstimate hessian_in_basis(const Objective& f, const Vector& x, const BasisMatrix& basis,
                                        const FdScheme& scheme) {
  detail::check_point(f, x, "hessian_in_basis");
  detail::require_dim(basis.dim(), f.dim(), "hessian_in_basis: basis");
  if (!basis.is_orthonormal()) {
    throw precondition_error("hessian_in_basis: basis must be orthonormal");
  }
  const std::size_t before = f.eval_count();
  const Eigen::Index n = x.size();
  const double h = scheme.step();
  const Matrix& g = basis.matrix();

  const double fx = f(x);
  Vector f_plus(n);
  Vector f_minus(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    f_plus[i] = f(x + h * g.col(i));
    f_minus[i] = f(x - h * g.col(i));
  }

  Matrix inner(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    inner(i, i) = (f_plus[i] - 2.0 * fx + f_minus[i]) / (h * h);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Vector a = h * g.col(i);
      const Vector b = h * g.col(j);
      const double fpp = f(x + a + b);
      const double fpm = f(x + a - b);
      const double fmp = f(x - a + b);
      const double fmm = f(x - a - b);
      inner(i, j) = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
      inner(j, i) = inner(i, j);
    }
  }

  Matrix values = basis.is_identity() ? inner : Matrix(g * inner * g.transpose());
  values = 0.5 * (values + values.transpose()).eval();
  return {std::move(values), basis, f.eval_count() - before};
}

}  // namespace smartgrad
