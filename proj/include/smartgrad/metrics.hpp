#pragma once

#include "smartgrad/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

namespace smartgrad {

/// Mean squared componentwise difference.
inline double grad_mse(const Vector& estimate, const Vector& exact) {
  if (estimate.size() != exact.size()) throw dimension_error("grad_mse: length mismatch");
  if (estimate.size() == 0) throw dimension_error("grad_mse: empty vectors");
  return (estimate - exact).squaredNorm() / static_cast<double>(estimate.size());
}

namespace detail {

// 1-based ranks, ties receive the average of their positions.
inline std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace detail

inline double pearson_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) throw dimension_error("correlation: need two equal-length samples");
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

/// Spearman rank correlation (Pearson correlation of average ranks).
inline double spearman_correlation(std::span<const double> a, std::span<const double> b) {
  const auto ra = detail::average_ranks(a);
  const auto rb = detail::average_ranks(b);
  return pearson_correlation(ra, rb);
}

}  // namespace smartgrad
