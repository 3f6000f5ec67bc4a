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

#include "distddp/runner.hpp"

#include <map>

#include "distddp/errors.hpp"

namespace distddp {

MessageAudit audit_messages(const Network& network) {
  MessageAudit audit;
  audit.non_edge_messages = network.non_edge_messages();
  std::map<std::pair<int, Phase>, std::size_t> counts;
  for (const auto& m : network.log()) ++counts[{m.iteration, m.phase}];
  for (const auto& [key, n] : counts) {
    ++audit.exchanges_checked;
    const std::size_t expected = network.expected_count(key.second);
    if (n != expected)
      audit.mismatches.push_back("iteration " + std::to_string(key.first) + ", " + to_string(key.second) + ": " +
                                 std::to_string(n) + " messages, expected " + std::to_string(expected));
  }
  return audit;
}

RunOutput run_scenario(const ScenarioConfig& cfg) {
  RunOutput out;
  out.config = cfg;
  const MultiAgentProblem problem = build_problem(cfg);
  try {
    if (cfg.solver.kind == "md-ddp") {
      MdDdp solver(problem, md_settings(cfg));
      out.report = solver.run();
      out.messages = solver.network().log();
      out.audit = audit_messages(solver.network());
    } else if (cfg.solver.kind == "nd-ddp") {
      NdDdp solver(problem, nd_settings(cfg));
      out.report = solver.run();
      out.messages = solver.network().log();
      out.audit = audit_messages(solver.network());
    } else {
      out.report = solve_centralized(problem, centralized_settings(cfg));
    }
  } catch (const SolverError& e) {
    throw SolverError(cfg.name + ": " + e.what());
  }
  out.metrics = evaluate_solution(problem, out.report.trajectories);
  return out;
}

}  // namespace distddp
