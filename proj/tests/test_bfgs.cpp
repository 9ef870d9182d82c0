#include "smartgrad/bench.hpp"
#include "smartgrad/bfgs.hpp"
#include "smartgrad/smart_estimator.hpp"
#include "smartgrad/test_functions.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace smartgrad;

namespace {

struct Quadratic {
  Matrix a;
  Vector b;
  double operator()(const Vector& x) const { return 0.5 * x.dot(a * x) - b.dot(x); }
  Vector grad(const Vector& x) const { return a * x - b; }
};

void expect_strong_wolfe(const Objective& f, const GradientFn& grad, const Vector& x, const Vector& d,
                         const LineSearchResult& r, const BfgsOptions& o) {
  ASSERT_TRUE(r.ok);
  const double f0 = f(x);
  const double slope0 = grad(x).dot(d);
  const Vector xa = x + r.alpha * d;
  EXPECT_LE(f(xa), f0 + o.wolfe_c1 * r.alpha * slope0);
  EXPECT_LE(std::abs(grad(xa).dot(d)), -o.wolfe_c2 * slope0);
  EXPECT_EQ(r.x, xa);
  EXPECT_EQ(r.f, f(xa));
}

}  // namespace

TEST(BfgsOptions, Validation) {
  BfgsOptions o;
  EXPECT_NO_THROW(o.validate());
  o.wolfe_c1 = 0.95;
  EXPECT_THROW(o.validate(), precondition_error);
  o = {};
  o.wolfe_c2 = 1.0;
  EXPECT_THROW(o.validate(), precondition_error);
  o = {};
  o.max_iters = 0;
  EXPECT_THROW(o.validate(), precondition_error);
}

TEST(LineSearch, NewtonStepOnQuadraticIsAcceptedImmediately) {
  Quadratic q{(Matrix(2, 2) << 3, 1, 1, 2).finished(), Vector::Ones(2)};
  const Objective f(q, 2);
  int grad_calls = 0;
  const GradientFn grad = [&](const Vector& x) {
    ++grad_calls;
    return q.grad(x);
  };
  const Vector x = (Vector(2) << 2, -1).finished();
  const Vector g = q.grad(x);
  const Vector d = -q.a.ldlt().solve(g);
  const auto r = line_search(f, grad, x, d, f(x), g, BfgsOptions{});
  ASSERT_TRUE(r.ok);
  EXPECT_EQ(r.alpha, 1.0);
  EXPECT_EQ(grad_calls, 1);
}

TEST(LineSearch, OneDimensionalParabola) {
  const Objective f([](const Vector& x) { return x[0] * x[0]; }, 1);
  const GradientFn grad = [](const Vector& x) { return Vector::Constant(1, 2.0 * x[0]); };
  const Vector x = Vector::Ones(1);
  const Vector d = -Vector::Ones(1);
  const BfgsOptions o;
  const auto r = line_search(f, grad, x, d, f(x), grad(x), o);
  EXPECT_GT(r.alpha, 0.0);
  EXPECT_LT(r.alpha, 2.0);
  expect_strong_wolfe(f, grad, x, d, r, o);
}

TEST(LineSearch, SteepRosenbrockValley) {
  const Objective f(testbed::rosenbrock_2d, 2);
  const GradientFn grad = testbed::rosenbrock_2d_gradient;
  const BfgsOptions o;
  for (const auto& x : {Vector((Vector(2) << -1.2, 1.0).finished()), Vector((Vector(2) << 0.5, 0.9).finished()),
                        Vector((Vector(2) << 1.5, 2.0).finished())}) {
    const Vector d = -grad(x);
    const auto r = line_search(f, grad, x, d, f(x), grad(x), o);
    expect_strong_wolfe(f, grad, x, d, r, o);
  }
}

TEST(LineSearch, RejectsAscentDirection) {
  const Objective f(testbed::sphere, 2);
  const GradientFn grad = [](const Vector& x) { return x; };
  const Vector x = Vector::Ones(2);
  EXPECT_THROW(line_search(f, grad, x, x, f(x), grad(x), BfgsOptions{}), precondition_error);
  EXPECT_THROW(line_search(f, grad, x, Vector::Zero(2), f(x), grad(x), BfgsOptions{}), precondition_error);
}

TEST(LineSearch, ReportsFailureWhenCurvatureUnreachable) {
  // Gradient callback that lies: always reports steep descent, so the
  // curvature condition can never hold.
  const Objective f([](const Vector& x) { return -x[0]; }, 1);
  const GradientFn grad = [](const Vector&) { return Vector::Constant(1, -1.0); };
  const auto r = line_search(f, grad, Vector::Zero(1), Vector::Ones(1), 0.0, grad(Vector::Zero(1)), BfgsOptions{});
  EXPECT_FALSE(r.ok);
}

TEST(Bfgs, ShiftedSphereConvergesImmediately) {
  const Vector c = (Vector(3) << 1, 2, 3).finished();
  const Objective f([c](const Vector& x) { return 0.5 * (x - c).squaredNorm(); }, 3);
  const auto run = bfgs_minimize(f, [c](const Vector& x) -> Vector { return x - c; }, Vector::Zero(3));
  EXPECT_TRUE(run.converged);
  EXPECT_LE(run.iterations, 3);
  EXPECT_LE((run.x_opt - c).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_EQ(run.trajectory.front(), Vector::Zero(3));
}

TEST(Bfgs, RosenbrockWithAnalyticGradient) {
  const Objective f(testbed::rosenbrock_2d, 2);
  const auto run = bfgs_minimize(f, testbed::rosenbrock_2d_gradient, (Vector(2) << -1.2, 1).finished());
  EXPECT_TRUE(run.converged);
  EXPECT_LE((run.x_opt - Vector::Ones(2)).cwiseAbs().maxCoeff(), 1e-5);
  EXPECT_EQ(run.trajectory.size(), static_cast<std::size_t>(run.iterations) + 1);
  EXPECT_EQ(run.gradients.size(), run.trajectory.size());
  EXPECT_GE(run.grad_calls, run.trajectory.size());
}

TEST(Bfgs, SmartGradientOnChainedRosenbrock) {
  const auto tf = testbed::make_rosenbrock(testbed::RosenbrockVariant::chained);
  const Objective f = tf.objective(5);
  const auto run = bfgs_minimize(f, make_smart(f), bench::draw_initial_point(5, 3, 0));
  EXPECT_LE((run.x_opt - Vector::Ones(5)).cwiseAbs().maxCoeff(), 1e-4) << run.x_opt.transpose();
}

TEST(Bfgs, TrajectoryDecreasesAndInverseHessianStaysPositiveDefinite) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = 2 + trial % 9;
    const auto tf = trial % 2 == 0 ? testbed::make_rosenbrock(testbed::RosenbrockVariant::chained)
                                   : testbed::make_freudenstein_roth();
    const Eigen::Index dim = tf.accepts_dim(n) ? n : n + 1;
    const Objective f = tf.objective(dim);
    double min_eig = INFINITY;
    BfgsOptions o;
    o.observer = [&](const Matrix& h) {
      EXPECT_LE((h - h.transpose()).cwiseAbs().maxCoeff(), 1e-12 * h.cwiseAbs().maxCoeff());
      min_eig = std::min(min_eig, Eigen::SelfAdjointEigenSolver<Matrix>(h).eigenvalues().minCoeff());
    };
    const auto run = bfgs_minimize(f, make_smart(f), oracle::random_vector(dim, rng), o);
    EXPECT_GT(min_eig, 0.0);
    for (std::size_t k = 1; k < run.values.size(); ++k) {
      EXPECT_LT(run.values[k], run.values[k - 1]);
      EXPECT_EQ(run.values[k], tf.value(run.trajectory[k]));
    }
  }
}

// Finite termination needs (near) exact line searches; a small c2 makes the
// zoom phase land on the minimizer along each direction. The minimum value is
// zero so late function differences stay above rounding.
TEST(Bfgs, ConvexQuadraticsConvergeInFewIterations) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 1 + trial % 10;
    const Matrix a = oracle::random_spd(n, rng, 3.0);
    const Vector x_star = oracle::random_vector(n, rng);
    const Objective f([&](const Vector& x) { return 0.5 * (x - x_star).dot(a * (x - x_star)); }, n);
    BfgsOptions o;
    o.grad_tol = 1e-10;
    o.wolfe_c2 = 1e-3;
    const auto run =
        bfgs_minimize(f, [&](const Vector& x) -> Vector { return a * (x - x_star); }, oracle::random_vector(n, rng), o);
    EXPECT_LE((run.x_opt - x_star).cwiseAbs().maxCoeff(), 1e-8) << "n=" << n;
    EXPECT_LE(run.iterations, n + 2) << "n=" << n;
  }
}

TEST(Bfgs, IsDeterministic) {
  const auto tf = testbed::make_freudenstein_roth();
  const Vector x0 = bench::draw_initial_point(6, 5, 2);
  const Objective f1 = tf.objective(6), f2 = tf.objective(6);
  const auto a = bfgs_minimize(f1, make_smart(f1), x0);
  const auto b = bfgs_minimize(f2, make_smart(f2), x0);
  ASSERT_EQ(a.trajectory.size(), b.trajectory.size());
  for (std::size_t k = 0; k < a.trajectory.size(); ++k) EXPECT_EQ(a.trajectory[k], b.trajectory[k]);
  EXPECT_EQ(a.grad_calls, b.grad_calls);
}

TEST(Bfgs, StopsAtIterationLimit) {
  const Objective f(testbed::rosenbrock_2d, 2);
  BfgsOptions o;
  o.max_iters = 3;
  const auto run = bfgs_minimize(f, testbed::rosenbrock_2d_gradient, (Vector(2) << -1.2, 1).finished(), o);
  EXPECT_FALSE(run.converged);
  EXPECT_EQ(run.iterations, 3);
}

TEST(Bfgs, RejectsBadStart) {
  const Objective f(testbed::sphere, 2);
  const GradientFn g = [](const Vector& x) { return x; };
  EXPECT_THROW(bfgs_minimize(f, g, Vector::Ones(3)), dimension_error);
  EXPECT_THROW(bfgs_minimize(f, g, Vector::Constant(2, NAN)), precondition_error);
}
