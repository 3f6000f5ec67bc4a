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

#include "distddp/centralized.hpp"

#include <chrono>

namespace distddp {

SolveReport solve_centralized(const MultiAgentProblem& problem, const CentralizedSettings& settings) {
  problem.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const StackedProblem stack = assemble_centralized(problem);

  std::vector<Trajectory> parts;
  for (const auto& a : problem.agents)
    parts.push_back(zero_control_rollout(*a.dynamics, a.initial_state, problem.horizon));
  const auto result = solve_constrained(stack.stack(parts), stack.cost, *stack.dynamics,
                                        stack.constraints, settings.ddp, settings.al);

  SolveReport report;
  report.solver = "centralized";
  report.iterations = result.ddp_iterations;
  for (int i = 0; i < problem.size(); ++i) {
    report.trajectories.push_back(stack.member_trajectory(result.ddp.trajectory, i));
    if (settings.ddp.compute_final_law) report.laws.push_back(stack.member_law(result.ddp.law, i));
  }
  report.notes.push_back("outer iterations: " + std::to_string(result.outer_iterations));
  report.notes.push_back("constraint violation: " + std::to_string(result.violation));
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report.critical_path_time = report.wall_time;
  report.local_step_time = report.wall_time;
  return report;
}

}  // namespace distddp
