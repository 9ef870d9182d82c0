#pragma once

// Accuracy experiments: vanilla vs smart gradients along BFGS runs, the
// rotated-basis scan in 2-D, and Hessians at a located mode. All outputs
// are deterministic functions of their arguments.

#include "smartgrad/bfgs.hpp"
#include "smartgrad/finite_difference.hpp"
#include "smartgrad/metrics.hpp"
#include "smartgrad/smart_estimator.hpp"
#include "smartgrad/test_functions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace smartgrad::bench {

enum class Method { vanilla, smart };

inline std::string to_string(Method m) { return m == Method::vanilla ? "vanilla" : "smart"; }

inline Method parse_method(std::string_view s) {
  if (s == "vanilla") return Method::vanilla;
  if (s == "smart") return Method::smart;
  throw precondition_error("unknown method '" + std::string(s) + "'");
}

struct BenchRecord {
  std::string function;
  int dim = 0;
  int rep = 0;
  int iteration = 0;
  Method method = Method::vanilla;
  double mse = 0.0;
  double grad_norm = 0.0;  ///< ||analytic gradient||_2 at the iterate
};

struct RotateRecord {
  double angle = 0.0;
  double mse = 0.0;
  double dir_grad_magnitude = 0.0;
};

// ---------------------------------------------------------------------------
// Seeding
// ---------------------------------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Independent stream seed for one repetition.
inline std::uint64_t rep_seed(std::uint64_t seed, int rep) {
  return splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(rep));
}

/// i.i.d. standard normal starting point for a repetition.
inline Vector draw_initial_point(Eigen::Index n, std::uint64_t seed, int rep) {
  std::mt19937_64 rng(rep_seed(seed, rep));
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = normal(rng);
  return x;
}

// ---------------------------------------------------------------------------
// Comparison runs
// ---------------------------------------------------------------------------

/// Records of a single optimization: one row per accepted iterate.
inline std::vector<BenchRecord> trajectory_records(const testbed::TestFunction& tf, int rep, Method method,
                                                   const OptimResult& run) {
  std::vector<BenchRecord> out;
  out.reserve(run.trajectory.size());
  for (std::size_t k = 0; k < run.trajectory.size(); ++k) {
    const Vector exact = tf.gradient(run.trajectory[k]);
    out.push_back({tf.name, static_cast<int>(exact.size()), rep, static_cast<int>(k), method,
                   grad_mse(run.gradients[k], exact), exact.norm()});
  }
  return out;
}

/// For each repetition, runs BFGS from one random x0 twice, with the
/// vanilla and with the smart gradient, and scores the gradient used at
/// every accepted iterate against the analytic gradient. Output is sorted
/// by (rep, iteration, method).
inline std::vector<BenchRecord> run_comparison(const std::string& function, int dim, int reps,
                                               std::uint64_t seed, const FdScheme& scheme,
                                               const BfgsOptions& opts = {}) {
  const testbed::TestFunction tf = testbed::find_function(function);
  tf.require_dim(dim);
  if (reps < 1) throw precondition_error("run_comparison: reps must be >= 1");
  opts.validate();

  std::vector<BenchRecord> records;
  for (int rep = 0; rep < reps; ++rep) {
    const Vector x0 = draw_initial_point(dim, seed, rep);

    const Objective f_vanilla = tf.objective(dim);
    const OptimResult vanilla = bfgs_minimize(f_vanilla, make_vanilla(f_vanilla, scheme), x0, opts);
    const Objective f_smart = tf.objective(dim);
    const OptimResult smart = bfgs_minimize(f_smart, make_smart(f_smart, scheme), x0, opts);

    for (auto&& r : trajectory_records(tf, rep, Method::vanilla, vanilla)) records.push_back(std::move(r));
    for (auto&& r : trajectory_records(tf, rep, Method::smart, smart)) records.push_back(std::move(r));
  }
  std::stable_sort(records.begin(), records.end(), [](const BenchRecord& a, const BenchRecord& b) {
    return std::tie(a.rep, a.iteration, a.method) < std::tie(b.rep, b.iteration, b.method);
  });
  return records;
}

struct Summary {
  double vanilla_mse = 0.0;
  double smart_mse = 0.0;
  std::size_t vanilla_count = 0;
  std::size_t smart_count = 0;
  [[nodiscard]] double improvement() const { return vanilla_mse / smart_mse; }
};

/// Grand means over all (rep, iteration) rows of each method.
inline Summary summarize(const std::vector<BenchRecord>& records) {
  Summary s;
  for (const auto& r : records) {
    if (r.method == Method::vanilla) {
      s.vanilla_mse += r.mse;
      ++s.vanilla_count;
    } else {
      s.smart_mse += r.mse;
      ++s.smart_count;
    }
  }
  if (s.vanilla_count == 0 || s.smart_count == 0) {
    throw precondition_error("summarize: records must contain both vanilla and smart rows");
  }
  s.vanilla_mse /= static_cast<double>(s.vanilla_count);
  s.smart_mse /= static_cast<double>(s.smart_count);
  return s;
}

/// summarize() applied per (function, dim) cell.
inline std::map<std::pair<std::string, int>, Summary> summarize_by_cell(const std::vector<BenchRecord>& records) {
  std::map<std::pair<std::string, int>, std::vector<BenchRecord>> cells;
  for (const auto& r : records) cells[{r.function, r.dim}].push_back(r);
  std::map<std::pair<std::string, int>, Summary> out;
  for (const auto& [key, rows] : cells) out.emplace(key, summarize(rows));
  return out;
}

struct IterationMeans {
  int iteration = 0;
  double vanilla_mse = 0.0;
  double smart_mse = 0.0;
  std::size_t vanilla_count = 0;
  std::size_t smart_count = 0;
};

/// Mean MSE at each iteration index over the reps that reached it.
inline std::vector<IterationMeans> per_iteration_means(const std::vector<BenchRecord>& records) {
  std::map<int, IterationMeans> acc;
  for (const auto& r : records) {
    auto& m = acc[r.iteration];
    m.iteration = r.iteration;
    if (r.method == Method::vanilla) {
      m.vanilla_mse += r.mse;
      ++m.vanilla_count;
    } else {
      m.smart_mse += r.mse;
      ++m.smart_count;
    }
  }
  std::vector<IterationMeans> out;
  for (auto& [k, m] : acc) {
    if (m.vanilla_count > 0) m.vanilla_mse /= static_cast<double>(m.vanilla_count);
    if (m.smart_count > 0) m.smart_mse /= static_cast<double>(m.smart_count);
    out.push_back(m);
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline constexpr const char* bench_csv_header = "function,dim,rep,iteration,method,mse,grad_norm";

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_csv(std::ostream& os, const std::vector<BenchRecord>& records) {
  os << bench_csv_header << '\n';
  for (const auto& r : records) {
    os << r.function << ',' << r.dim << ',' << r.rep << ',' << r.iteration << ',' << to_string(r.method) << ','
       << format_double(r.mse) << ',' << format_double(r.grad_norm) << '\n';
  }
}

/// Reads rows written by write_csv. Several concatenated files (each with
/// its own header) are accepted.
inline std::vector<BenchRecord> read_csv(std::istream& is) {
  std::vector<BenchRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line == bench_csv_header) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    for (std::string tok; std::getline(ss, tok, ',');) fields.push_back(tok);
    if (fields.size() != 7) {
      throw precondition_error("read_csv: line " + std::to_string(line_no) + " has " +
                               std::to_string(fields.size()) + " fields, expected 7");
    }
    try {
      records.push_back({fields[0], std::stoi(fields[1]), std::stoi(fields[2]), std::stoi(fields[3]),
                         parse_method(fields[4]), std::stod(fields[5]), std::stod(fields[6])});
    } catch (const std::logic_error&) {
      throw precondition_error("read_csv: malformed value on line " + std::to_string(line_no));
    }
  }
  return records;
}

// ---------------------------------------------------------------------------
// Rotation scan
// ---------------------------------------------------------------------------

inline Matrix rotation_2d(double angle) {
  Matrix r(2, 2);
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return r;
}

/// Gradient of 2-D Rosenbrock at x estimated in every rotated basis
/// R(t), t = 0, step, 2 step, ... < pi.
inline std::vector<RotateRecord> run_rotation_scan(const Vector& x, double angle_step, const FdScheme& scheme) {
  if (!(angle_step > 0.0) || !std::isfinite(angle_step)) {
    throw precondition_error("run_rotation_scan: angle step must be positive");
  }
  if (x.size() != 2) throw dimension_error("run_rotation_scan: x must be 2-D");
  const Objective f(testbed::rosenbrock_2d, 2);
  const Vector exact = testbed::rosenbrock_2d_gradient(x);

  // Number of k with k * step < pi, robust to pi/step landing on an integer.
  const auto count = static_cast<long>(std::ceil(std::numbers::pi / angle_step - 1e-9));
  std::vector<RotateRecord> out;
  out.reserve(static_cast<std::size_t>(count));
  for (long k = 0; k < count; ++k) {
    const double angle = static_cast<double>(k) * angle_step;
    const BasisMatrix basis = k == 0 ? BasisMatrix::identity(2) : BasisMatrix::orthonormal(rotation_2d(angle));
    const GradientEstimate est = gradient_in_basis(f, x, basis, scheme);
    out.push_back({angle, grad_mse(est.values, exact), std::abs(est.directional[0])});
  }
  return out;
}

inline void write_rotate_csv(std::ostream& os, const std::vector<RotateRecord>& records) {
  os << "angle,mse,dir_grad_magnitude\n";
  for (const auto& r : records) {
    os << format_double(r.angle) << ',' << format_double(r.mse) << ',' << format_double(r.dir_grad_magnitude)
       << '\n';
  }
}

// ---------------------------------------------------------------------------
// Hessian at the mode
// ---------------------------------------------------------------------------

struct HessianDemo {
  OptimResult run;
  HessianEstimate hessian;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
};

/// BFGS with smart gradients from a seeded start, then the smart Hessian
/// at the final iterate using the history accumulated along the way.
inline HessianDemo run_hessian_demo(const std::string& function, int dim, std::uint64_t seed,
                                    const FdScheme& scheme = {}, const BfgsOptions& opts = {}) {
  const testbed::TestFunction tf = testbed::find_function(function);
  tf.require_dim(dim);
  const Objective f = tf.objective(dim);
  const SmartGradient grad = make_smart(f, scheme);
  OptimResult run = bfgs_minimize(f, grad, draw_initial_point(dim, seed, 0), opts);
  HessianEstimate hess = grad.estimator().hessian(run.x_opt);
  const Vector eig = Eigen::SelfAdjointEigenSolver<Matrix>(hess.values, Eigen::EigenvaluesOnly).eigenvalues();
  return {std::move(run), std::move(hess), eig.minCoeff(), eig.maxCoeff()};
}

inline void print_hessian_demo(std::ostream& os, const std::string& function, const HessianDemo& demo) {
  const Eigen::IOFormat fmt(Eigen::FullPrecision, 0, ", ", "\n", "  [", "]");
  os << "function: " << function << '\n'
     << "dim: " << demo.run.x_opt.size() << '\n'
     << "converged: " << (demo.run.converged ? "true" : "false") << '\n'
     << "iterations: " << demo.run.iterations << '\n'
     << "x_opt:\n" << demo.run.x_opt.transpose().format(fmt) << '\n'
     << "f_opt: " << format_double(demo.run.f_opt) << '\n'
     << "hessian:\n" << demo.hessian.values.format(fmt) << '\n'
     << "eigenvalue_min: " << format_double(demo.min_eigenvalue) << '\n'
     << "eigenvalue_max: " << format_double(demo.max_eigenvalue) << '\n';
}

}  // namespace smartgrad::bench
