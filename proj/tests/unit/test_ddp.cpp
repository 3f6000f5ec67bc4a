/*
 Copyright 2026 The distddp Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include <gtest/gtest.h>

#include <cmath>

#include "distddp/ddp.hpp"
#include "distddp/models.hpp"
#include "oracles.hpp"

namespace distddp {
namespace {

using testing::LinearDynamics;
using testing::LqrInstance;
using testing::Random;

Trajectory zero_start(const Dynamics& dyn, const Vector& x0, int K) {
  return zero_control_rollout(dyn, x0, K);
}

TEST(BackwardPass, ScalarRiccatiGains) {
  // x+ = x + u, cost x^2 + u^2, K = 2.
  LqrInstance lqr;
  lqr.A = Matrix::Ones(1, 1);
  lqr.B = Matrix::Ones(1, 1);
  lqr.Q = lqr.R = lqr.Qf = Matrix::Ones(1, 1);
  lqr.goal = Vector::Zero(1);
  lqr.x0 = Vector::Constant(1, 1.0);
  lqr.horizon = 2;
  const auto oracle = testing::riccati_lqr(lqr);
  // Hand check of the recursion: P2 = 1, K1 = -1/2, P1 = 3/2, K0 = -3/5.
  EXPECT_NEAR(oracle.gains[1](0, 0), -0.5, 1e-15);
  EXPECT_NEAR(oracle.gains[0](0, 0), -0.6, 1e-15);

  LinearDynamics dyn(lqr.A, lqr.B);
  const QuadraticCost cost(lqr.Q, lqr.R, lqr.Qf, lqr.goal);
  const auto bp = backward_pass(zero_start(dyn, lqr.x0, 2), cost, dyn, 0.0);
  ASSERT_TRUE(bp);
  for (int k = 0; k < 2; ++k) EXPECT_NEAR(bp->law.feedback[k](0, 0), oracle.gains[k](0, 0), 1e-12);
}

TEST(BackwardPass, ZeroCostGivesZeroLaw) {
  DubinsCar car(0.02);
  const Matrix Z4 = Matrix::Zero(4, 4);
  const Matrix Z2 = Matrix::Zero(2, 2);
  const QuadraticCost cost(Z4, Z2, Z4, Vector::Zero(4));
  Random rng(3);
  std::vector<Vector> u(10);
  for (auto& v : u) v = rng.vector(2);
  const auto nominal = rollout(car, rng.vector(4), u);
  const auto bp = backward_pass(nominal, cost, car, 1e-6);
  ASSERT_TRUE(bp);
  for (int k = 0; k < 10; ++k) {
    EXPECT_EQ(bp->law.feedforward[k].norm(), 0.0);
    EXPECT_EQ(bp->law.feedback[k].norm(), 0.0);
  }
  for (int k = 0; k <= 10; ++k) {
    EXPECT_EQ(bp->value.value[k], 0.0);
    EXPECT_EQ(bp->value.gradient[k].norm(), 0.0);
    EXPECT_EQ(bp->value.hessian[k].norm(), 0.0);
  }
}

TEST(BackwardPass, ValueHessianSymmetricAndStationaryAtOptimum) {
  DubinsCar car(0.02);
  Vector q(4), r(2), qf(4), goal(4);
  q << 30, 30, 0, 6;
  r << 0.5, 0.5;
  qf << 300, 300, 0, 60;
  goal << 2, 1, 0, 0;
  const auto cost = QuadraticCost::diagonal(q, r, qf, goal);
  Random rng(11);
  std::vector<Vector> u(60);
  for (auto& v : u) v = rng.vector(2, -0.5, 0.5);
  const auto nominal = rollout(car, Vector::Zero(4), u);

  const auto bp = backward_pass(nominal, *cost, car, 1e-6);
  ASSERT_TRUE(bp);
  for (const auto& V : bp->value.hessian) EXPECT_LT((V - V.transpose()).norm(), 1e-9 * (1.0 + V.norm()));

  DdpSettings s;
  s.max_iterations = 300;
  s.abs_tolerance = 1e-12;
  s.rel_tolerance = 1e-14;
  const auto res = solve(nominal, *cost, car, s);
  // Largest |Q_u| along the exact (unregularized) backward sweep around `t`.
  auto stationarity = [&](const Trajectory& t) {
    const auto lin = linearize(t, *cost, car);
    Vector Vx = lin.terminal.lx;
    Matrix Vxx = lin.terminal.lxx;
    double worst = 0.0;
    for (int k = t.horizon() - 1; k >= 0; --k) {
      const auto Qk = q_expansion(lin.running[k], lin.fx[k], lin.fu[k], Vx, Vxx);
      worst = std::max(worst, Qk.Qu.norm());
      const Matrix Kk = -Qk.Quu.ldlt().solve(Qk.Qux);
      const Vector kk = -Qk.Quu.ldlt().solve(Qk.Qu);
      Vx = Qk.Qx + Kk.transpose() * Qk.Quu * kk + Kk.transpose() * Qk.Qu + Qk.Qux.transpose() * kk;
      Vxx = Qk.Qxx + Kk.transpose() * Qk.Quu * Kk + Kk.transpose() * Qk.Qux + Qk.Qux.transpose() * Kk;
      Vxx = 0.5 * (Vxx + Vxx.transpose());
    }
    return worst;
  };
  // Cost-based stopping cannot resolve gradients much below sqrt(eps) of the cost scale,
  // so stationarity is measured against the gradient at the start point.
  const double start = stationarity(nominal), end = stationarity(res.trajectory);
  EXPECT_LT(end, 1e-7 * start) << "start " << start << " end " << end;
}

TEST(BackwardPass, QGradientMatchesBellmanFiniteDifference) {
  DubinsCar car(0.05);
  Random rng(5);
  Vector q(4), r(2), qf(4);
  q << 30, 30, 0, 6;
  r << 0.5, 0.5;
  qf = 10 * q;
  const auto cost = QuadraticCost::diagonal(q, r, qf, rng.vector(4));
  for (int trial = 0; trial < 20; ++trial) {
    const Vector x = rng.vector(4), u = rng.vector(2);
    const Vector x_next = car.step(x, u);
    const Vector Vx = rng.vector(4);
    const Matrix Vxx = rng.spd(4);
    RunningDerivatives l;
    cost->running_derivatives(x, u, 0, l);
    Matrix fx, fu;
    car.jacobians(x, u, fx, fu);
    const auto Qk = q_expansion(l, fx, fu, Vx, Vxx);
    // Right-hand side of the Bellman recursion with the quadratic model of the next value.
    auto bellman = [&](const Vector& xu) {
      const Vector dx = car.step(xu.head(4), xu.tail(2)) - x_next;
      return cost->running(xu.head(4), xu.tail(2), 0) + Vx.dot(dx) + 0.5 * dx.dot(Vxx * dx);
    };
    Vector xu(6);
    xu << x, u;
    const Vector fd = testing::central_gradient(bellman, xu);
    EXPECT_LT(testing::relative_error(Qk.Qx, fd.head(4)), 1e-4);
    EXPECT_LT(testing::relative_error(Qk.Qu, fd.tail(2)), 1e-4);
  }
}

TEST(BackwardPass, RegularizationRejectsIndefiniteQuu) {
  LinearDynamics dyn(Matrix::Identity(1, 1), Matrix::Identity(1, 1));
  const QuadraticCost cost(Matrix::Zero(1, 1), -Matrix::Identity(1, 1), Matrix::Zero(1, 1),
                           Vector::Zero(1));
  const auto nominal = zero_start(dyn, Vector::Ones(1), 3);
  EXPECT_FALSE(backward_pass(nominal, cost, dyn, 0.0));
  EXPECT_TRUE(backward_pass(nominal, cost, dyn, 10.0));
}

TEST(ForwardPass, ZeroLawReproducesNominal) {
  DubinsCar car(0.02);
  Random rng(2);
  std::vector<Vector> u(25);
  for (auto& v : u) v = rng.vector(2);
  const auto nominal = rollout(car, rng.vector(4), u);
  ControlLaw law;
  law.feedforward.assign(25, Vector::Zero(2));
  law.feedback.assign(25, Matrix::Zero(2, 4));
  for (double a : {0.0, 0.3, 1.0}) {
    const auto t = forward_pass(nominal, law, car, a);
    EXPECT_EQ(max_abs_difference(t.states, nominal.states), 0.0);
    EXPECT_EQ(max_abs_difference(t.controls, nominal.controls), 0.0);
  }
}

TEST(ForwardPass, ZeroStepIsIdentityOnConsistentNominal) {
  DubinsCar car(0.02);
  Random rng(9);
  std::vector<Vector> u(25);
  for (auto& v : u) v = rng.vector(2);
  const auto nominal = rollout(car, rng.vector(4), u);
  ControlLaw law;
  for (int k = 0; k < 25; ++k) {
    law.feedforward.push_back(rng.vector(2));
    law.feedback.push_back(rng.matrix(2, 4));
  }
  const auto t = forward_pass(nominal, law, car, 0.0);
  EXPECT_EQ(max_abs_difference(t.states, nominal.states), 0.0);
  EXPECT_EQ(max_abs_difference(t.controls, nominal.controls), 0.0);
}

TEST(Solve, MatchesRiccatiOracleOnRandomInstances) {
  Random rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const int p = rng.integer(1, 6), q = rng.integer(1, 3), K = rng.integer(5, 50);
    const auto lqr = testing::random_lqr(rng, p, q, K);
    const auto oracle = testing::riccati_lqr(lqr);
    ASSERT_NEAR(oracle.cost, oracle.rollout_cost, 1e-9 * std::abs(oracle.cost));
    LinearDynamics dyn(lqr.A, lqr.B);
    const QuadraticCost cost(lqr.Q, lqr.R, lqr.Qf, lqr.goal);
    const auto res = solve(zero_start(dyn, lqr.x0, K), cost, dyn);
    EXPECT_NEAR(res.cost, oracle.cost, 1e-8 * std::abs(oracle.cost)) << "trial " << trial;
    EXPECT_LT(max_abs_difference(res.trajectory.states, oracle.states), 1e-6);
    // One full Newton step solves a linear-quadratic problem.
    ASSERT_GE(res.cost_history.size(), 2u);
    EXPECT_NEAR(res.cost_history[1], oracle.cost, 1e-8 * std::abs(oracle.cost));
    for (int k = 0; k < K; ++k) EXPECT_LT((res.law.feedback[k] - oracle.gains[k]).norm(), 1e-6);
  }
}

TEST(Solve, OptimalInputIsAFixedPoint) {
  Random rng(7);
  const auto lqr = testing::random_lqr(rng, 3, 2, 20);
  const auto oracle = testing::riccati_lqr(lqr);
  LinearDynamics dyn(lqr.A, lqr.B);
  const QuadraticCost cost(lqr.Q, lqr.R, lqr.Qf, lqr.goal);
  const auto start = rollout(dyn, lqr.x0, oracle.controls);
  const auto res = solve(start, cost, dyn);
  EXPECT_LE(res.iterations, 1);
  EXPECT_NEAR(res.cost, oracle.cost, 1e-8 * std::abs(oracle.cost));
}

TEST(Solve, CarCostSequenceIsMonotone) {
  DubinsCar car(0.02);
  Vector q(4), r(2), qf(4), goal(4);
  q << 30, 30, 0, 6;
  r << 0.5, 0.5;
  qf << 300, 300, 0, 60;
  goal << 3, -1, 0, 0;
  const auto cost = QuadraticCost::diagonal(q, r, qf, goal);
  const auto res = solve(zero_start(car, Vector::Zero(4), 150), *cost, car);
  ASSERT_GE(res.cost_history.size(), 3u);
  for (std::size_t i = 1; i < res.cost_history.size(); ++i)
    EXPECT_LE(res.cost_history[i], res.cost_history[i - 1]);
  EXPECT_LT((res.trajectory.states.back().head(2) - goal.head(2)).norm(), 0.2);
}

TEST(Solve, Deterministic) {
  DubinsCar car(0.02);
  Vector q(4), r(2), goal(4);
  q << 30, 30, 0, 6;
  r << 0.5, 0.5;
  goal << 1, 2, 0, 0;
  const auto cost = QuadraticCost::diagonal(q, r, 10 * q, goal);
  const auto a = solve(zero_start(car, Vector::Zero(4), 80), *cost, car);
  const auto b = solve(zero_start(car, Vector::Zero(4), 80), *cost, car);
  EXPECT_EQ(max_abs_difference(a.trajectory.states, b.trajectory.states), 0.0);
  EXPECT_EQ(a.cost, b.cost);
}

TEST(Solve, WarmstartFlagIgnoresInitialControls) {
  Random rng(1);
  const auto lqr = testing::random_lqr(rng, 2, 1, 10);
  LinearDynamics dyn(lqr.A, lqr.B);
  const QuadraticCost cost(lqr.Q, lqr.R, lqr.Qf, lqr.goal);
  std::vector<Vector> u(10, Vector::Constant(1, 5.0));
  DdpSettings cold;
  cold.warmstart = false;
  cold.max_iterations = 1;
  const auto a = solve(rollout(dyn, lqr.x0, u), cost, dyn, cold);
  const auto b = solve(zero_start(dyn, lqr.x0, 10), cost, dyn, cold);
  EXPECT_EQ(max_abs_difference(a.trajectory.controls, b.trajectory.controls), 0.0);
}

TEST(Settings, RejectsInvalidValues) {
  DdpSettings s;
  s.alphas = {1.5};
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = DdpSettings{};
  s.reg_min = 0.0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
}

TEST(TrajectoryType, ValidateChecksLengths) {
  Trajectory t;
  t.states = {Vector::Zero(2), Vector::Zero(2)};
  t.controls = {Vector::Zero(1)};
  EXPECT_NO_THROW(t.validate());
  t.states.push_back(Vector::Zero(3));
  EXPECT_THROW(t.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace distddp
