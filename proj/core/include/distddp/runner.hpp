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

#pragma once

#include <string>
#include <vector>

#include "distddp/scenario.hpp"

namespace distddp {

/// Message-log check against the closed-form counts of the graph.
struct MessageAudit {
  std::size_t non_edge_messages = 0;
  std::size_t exchanges_checked = 0;
  std::vector<std::string> mismatches;
  [[nodiscard]] bool ok() const { return non_edge_messages == 0 && mismatches.empty(); }
};

MessageAudit audit_messages(const Network& network);

struct RunOutput {
  ScenarioConfig config;
  SolveReport report;
  SolutionMetrics metrics;
  std::vector<MessageRecord> messages;
  MessageAudit audit;
};

/// Builds the task, runs the configured solver and evaluates the result. Solver failures
/// propagate as SolverError with the scenario name prepended.
RunOutput run_scenario(const ScenarioConfig& cfg);

}  // namespace distddp
