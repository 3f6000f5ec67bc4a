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

#include "distddp/md_ddp.hpp"
#include "distddp/qp.hpp"
#include "oracles.hpp"
#include "projection_oracle.hpp"

namespace distddp {
namespace {

using testing::Random;

constexpr double kInf = std::numeric_limits<double>::infinity();

TEST(SolveQp, UnconstrainedMinimizer) {
  Random rng(1);
  QpProblem qp;
  qp.H = rng.spd(4);
  qp.g = rng.vector(4);
  qp.A.resize(0, 4);
  qp.b.resize(0);
  const auto res = solve_qp(qp);
  EXPECT_LT((res.v + qp.H.ldlt().solve(qp.g)).norm(), 1e-12);
  EXPECT_TRUE(res.feasible);
}

TEST(SolveQp, MatchesEnumerationOnRandomFeasibleProblems) {
  Random rng(2);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = rng.integer(1, 5), m = rng.integer(0, 6);
    QpProblem qp;
    qp.H = rng.spd(n, 0.1, 4.0);
    qp.g = rng.vector(n, -3, 3);
    const Vector feasible = rng.vector(n);
    qp.A = rng.matrix(m, n);
    qp.b = qp.A * feasible + rng.vector(m, 0.0, 0.5);
    if (rng.uniform(0, 1) < 0.5) {
      qp.lower = feasible - rng.vector(n, 0.0, 1.0);
      qp.upper = feasible + rng.vector(n, 0.0, 1.0);
      for (int i = 0; i < n; ++i)
        if (rng.uniform(0, 1) < 0.3) qp.upper(i) = kInf;
    }
    const auto oracle = testing::solve_qp_enumeration(qp);
    const auto res = solve_qp(qp);
    ASSERT_TRUE(oracle.feasible);
    EXPECT_TRUE(res.feasible);
    EXPECT_LT((res.v - oracle.v).cwiseAbs().maxCoeff(), 1e-6) << "trial " << trial;
    EXPECT_LE(testing::qp_violation(qp, res.v), 1e-8);
  }
}

TEST(SolveQp, ConflictingRowsReportInfeasible) {
  QpProblem qp;
  qp.H = Matrix::Identity(1, 1);
  qp.g = Vector::Zero(1);
  qp.A.resize(2, 1);
  qp.A << 1, -1;
  qp.b.resize(2);
  qp.b << -1, -1;  // v <= -1 and v >= 1
  const auto res = solve_qp(qp);
  EXPECT_FALSE(res.feasible);
  EXPECT_GT(res.violation, 0.0);
  EXPECT_TRUE(res.v.allFinite());
  // The least-violating point splits the conflict evenly.
  EXPECT_NEAR(res.v(0), 0.0, 1e-6);
}

TEST(ControlProjection, InteriorPointIsUnchanged) {
  const BoxConstraint box(BoxConstraint::Target::Control, {0, 1}, Vector::Constant(2, -10),
                          Vector::Constant(2, 10));
  Vector u(2), xi = Vector::Zero(2);
  u << 1.0, -3.0;
  EXPECT_EQ((safe_control_projection(u, xi, Vector::Constant(2, 2.0), {&box}) - u).norm(), 0.0);
}

TEST(ControlProjection, ClampsShiftedTarget) {
  const BoxConstraint box(BoxConstraint::Target::Control, {0}, Vector::Constant(1, -10),
                          Vector::Constant(1, 10));
  // u + xi / tau = 11 + 8 / 2 = 15 is clamped to the bound.
  const Vector v = safe_control_projection(Vector::Constant(1, 11.0), Vector::Constant(1, 8.0),
                                           Vector::Constant(1, 2.0), {&box});
  EXPECT_EQ(v(0), 10.0);
}

TEST(ControlProjection, WheelSpeedBoxMatchesEnumeration) {
  const double R = 0.016, L = 0.11;
  Matrix C(2, 2);
  C << 2.0, L, 2.0, -L;
  C /= 2.0 * R;
  const BoxConstraint box(BoxConstraint::Target::Control, {0, 1}, Vector::Constant(2, -12.5),
                          Vector::Constant(2, 12.5), C);
  Random rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    Vector u(2);
    u << rng.uniform(-0.6, 0.6), rng.uniform(-8, 8);
    const Vector xi = rng.vector(2, -0.5, 0.5), T = rng.vector(2, 0.5, 5.0);
    const Vector v = safe_control_projection(u, xi, T, {&box});
    QpProblem qp;
    qp.H = Matrix(T.asDiagonal());
    qp.g = -T.cwiseProduct(u + xi.cwiseQuotient(T));
    qp.A.resize(4, 2);
    qp.A << C, -C;
    qp.b = Vector::Constant(4, 12.5);
    const auto oracle = testing::solve_qp_enumeration(qp);
    ASSERT_TRUE(oracle.feasible);
    EXPECT_LT((v - oracle.v).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_TRUE(box.contains(v, 1e-9));
  }
}

TEST(StateProjection, NoRowsGivesClosedForm) {
  StateProjectionInput in;
  in.own_dim = 2;
  in.block_offsets = {0, 2};
  in.own_state = Vector::Constant(2, 1.0);
  in.own_dual = Vector::Constant(2, 2.0);
  in.own_weight = Vector::Constant(2, 4.0);
  in.consensus = Vector::Constant(4, 3.0);
  in.consensus_dual = Vector::Constant(4, 1.0);
  in.consensus_weight = Vector::Constant(4, 2.0);
  const auto res = safe_state_projection(in);
  // Own block: (P a + M b) / (P + M) with a = 1 + 2/4, b = 3 - 1/2.
  EXPECT_NEAR(res.state(0), (4 * 1.5 + 2 * 2.5) / 6.0, 1e-14);
  EXPECT_NEAR(res.state(3), 2.5, 1e-14);
  EXPECT_TRUE(res.feasible);
}

TEST(StateProjection, SingleHalfSpaceIsEuclideanProjection) {
  Random rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    StateProjectionInput in;
    in.own_dim = 2;
    in.block_offsets = {0};
    in.own_state = rng.vector(2);
    in.own_dual = Vector::Zero(2);
    in.own_weight = Vector::Constant(2, 1.0);
    in.consensus = in.own_state;
    in.consensus_dual = Vector::Zero(2);
    in.consensus_weight = Vector::Constant(2, 1.0);
    HalfSpace h;
    h.normal = rng.unit(2);
    h.offset = rng.uniform(-1, 1);
    h.first = 0;
    h.second = -1;
    in.halfspaces.push_back(h);
    const auto res = safe_state_projection(in);
    const double gap = h.offset - h.normal.dot(in.own_state);
    const Vector expected = gap > 0 ? Vector(in.own_state + gap * h.normal) : in.own_state;
    EXPECT_LT((res.state - expected).norm(), 1e-10);
  }
}

TEST(StateProjection, MatchesEnumerationOracle) {
  Random rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto inst = testing::random_projection(rng);
    const auto res = safe_state_projection(inst.input);
    const auto qp = testing::projection_qp(inst.input);
    const auto oracle = testing::solve_qp_enumeration(qp);
    ASSERT_TRUE(oracle.feasible);
    EXPECT_TRUE(res.feasible);
    EXPECT_LT((res.state - oracle.v).cwiseAbs().maxCoeff(), 1e-6) << "trial " << trial;
    EXPECT_LE(testing::qp_violation(qp, res.state), 1e-8);
    // Box rows hold exactly.
    for (const auto* b : inst.input.own_boxes) {
      Vector sel(b->indices().size());
      for (std::size_t i = 0; i < b->indices().size(); ++i) sel(i) = res.state(b->indices()[i]);
      EXPECT_TRUE(b->contains(sel));
    }
  }
}

TEST(StateProjection, ConflictingHalfSpacesFallBackToLeastViolation) {
  StateProjectionInput in;
  in.own_dim = 2;
  in.block_offsets = {0};
  in.own_state = Vector::Zero(2);
  in.own_dual = Vector::Zero(2);
  in.own_weight = Vector::Ones(2);
  in.consensus = Vector::Zero(2);
  in.consensus_dual = Vector::Zero(2);
  in.consensus_weight = Vector::Ones(2);
  HalfSpace a, b;
  a.normal = Vector::Unit(2, 0);
  a.offset = 1.0;  // x >= 1
  b.normal = -Vector::Unit(2, 0);
  b.offset = 1.0;  // x <= -1
  in.halfspaces = {a, b};
  const auto res = safe_state_projection(in);
  EXPECT_FALSE(res.feasible);
  EXPECT_TRUE(res.state.allFinite());
}

}  // namespace
}  // namespace distddp
