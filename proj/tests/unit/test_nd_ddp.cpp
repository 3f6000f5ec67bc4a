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

#include <algorithm>

#include "distddp/augmented_lagrangian.hpp"
#include "distddp/centralized.hpp"
#include "distddp/nd_ddp.hpp"
#include "distddp/runner.hpp"
#include "distddp/scenario.hpp"
#include "fixtures.hpp"

namespace distddp {
namespace {

// Inner solves run to machine precision so that comparisons are not limited by the
// default cost-change tolerance.
DdpSettings tight() {
  DdpSettings d;
  d.max_iterations = 300;
  d.abs_tolerance = 1e-12;
  d.rel_tolerance = 1e-14;
  return d;
}

Vector p2(double x, double y) {
  Vector v(2);
  v << x, y;
  return v;
}

TEST(NdDdp, SingleAgentMatchesCentralized) {
  auto prob = testing::car_team({p2(0, 0)}, {p2(1.5, 0.5)}, NeighborhoodGraph::complete(1), 60);
  NdSettings s;
  s.max_iterations = 5;
  s.ddp = tight();
  const auto nd = NdDdp(prob, s).run();
  CentralizedSettings cs;
  cs.ddp = tight();
  const auto central = solve_centralized(prob, cs);
  EXPECT_LT(max_abs_difference(nd.trajectories[0].states, central.trajectories[0].states), 1e-6);
}

TEST(NdDdp, VanishingPenaltiesDecoupleAgents) {
  // Without coupling rows and with negligible penalties every agent solves its own problem.
  auto prob = testing::car_team({p2(0, 0), p2(0, 1)}, {p2(1, 0), p2(1, 1.5)}, NeighborhoodGraph::complete(2), 50);
  NdSettings s;
  s.max_iterations = 3;
  s.uniform_state_penalty = 1e-9;
  s.uniform_control_penalty = 1e-9;
  s.penalty_floor = 1e-9;
  s.mode = PenaltyMode::Scalar;
  s.ddp = tight();
  const auto nd = NdDdp(prob, s).run();
  for (int i = 0; i < 2; ++i) {
    const auto& a = prob.agents[i];
    const auto own =
        solve(zero_control_rollout(*a.dynamics, a.initial_state, 50), *a.cost, *a.dynamics, tight());
    EXPECT_LT(max_abs_difference(nd.trajectories[i].states, own.trajectory.states), 1e-4);
  }
}

TEST(NdDdp, TwoCarSwapReachesConsensusAndKeepsDistance) {
  auto cfg = builtin_scenario("swap2");
  cfg.solver.kind = "nd-ddp";
  cfg.solver.admm_iterations = 50;
  const auto run = run_scenario(cfg);
  EXPECT_GE(run.metrics.min_pair_distance, 0.3 - 1e-3);
  EXPECT_LT(run.metrics.max_terminal_position_error, 0.2);
  double gap = 0.0;
  for (const auto& r : run.report.residuals)
    if (r.iteration == run.report.iterations) gap = std::max(gap, r.blocks[0].primal);
  EXPECT_LE(gap, 1e-2);
  EXPECT_TRUE(run.audit.ok());

  // Median-filtered consensus gap does not grow over the last ten iterations.
  std::vector<double> total;
  for (const auto& t : run.report.total_residual_history) total.push_back(t[0].primal);
  ASSERT_GE(total.size(), 12u);
  auto med3 = [&](std::size_t i) {
    std::array<double, 3> w{total[i - 1], total[i], total[i + 1]};
    std::sort(w.begin(), w.end());
    return w[1];
  };
  const std::size_t last = total.size() - 2;
  EXPECT_LE(med3(last), med3(last - 9) * (1.0 + 1e-9));
}

TEST(NdDdp, MessageCountsMatchGraph) {
  auto cfg = builtin_scenario("swap4");
  cfg.solver.kind = "nd-ddp";
  cfg.solver.admm_iterations = 3;
  cfg.graph.kind = "k_nearest";
  cfg.graph.size = 2;
  const auto problem = build_problem(cfg);
  NdDdp solver(problem, nd_settings(cfg));
  solver.run();
  const auto audit = audit_messages(solver.network());
  EXPECT_TRUE(audit.ok());
  EXPECT_EQ(solver.network().non_edge_messages(), 0u);
  for (int n = 1; n <= 3; ++n) {
    EXPECT_EQ(solver.network().count(n, Phase::CopiesToOwner), solver.network().expected_count(Phase::CopiesToOwner));
    EXPECT_EQ(solver.network().count(n, Phase::GlobalsToNeighbors),
              solver.network().expected_count(Phase::GlobalsToNeighbors));
  }
}

TEST(NdDdp, ScheduleIndependent) {
  auto cfg = builtin_scenario("swap4");
  cfg.solver.kind = "nd-ddp";
  cfg.solver.admm_iterations = 4;
  const auto problem = build_problem(cfg);
  auto s = nd_settings(cfg);
  s.workers = 1;
  const auto a = NdDdp(problem, s).run();
  s.workers = 4;
  const auto b = NdDdp(problem, s).run();
  for (int i = 0; i < problem.size(); ++i) {
    EXPECT_EQ(max_abs_difference(a.trajectories[i].states, b.trajectories[i].states), 0.0);
    EXPECT_EQ(max_abs_difference(a.trajectories[i].controls, b.trajectories[i].controls), 0.0);
  }
}

TEST(NdDdp, ScalarModeMatchesUniformMatrixMode) {
  auto cfg = builtin_scenario("swap2");
  cfg.solver.kind = "nd-ddp";
  cfg.solver.admm_iterations = 5;
  cfg.solver.uniform_rho = 50.0;
  cfg.solver.uniform_mu = 5.0;
  const auto problem = build_problem(cfg);
  auto s = nd_settings(cfg);
  s.mode = PenaltyMode::Scalar;
  const auto scalar = NdDdp(problem, s).run();
  s.mode = PenaltyMode::Matrix;
  const auto matrix = NdDdp(problem, s).run();
  // With uniform penalties the dual terms of the scalar average sum to zero across copies,
  // so both averages agree up to rounding.
  for (int i = 0; i < problem.size(); ++i)
    EXPECT_LT(max_abs_difference(scalar.trajectories[i].states, matrix.trajectories[i].states), 1e-8);
}

TEST(NdDdp, RejectsBadSettings) {
  NdSettings s;
  s.max_iterations = 0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace distddp
