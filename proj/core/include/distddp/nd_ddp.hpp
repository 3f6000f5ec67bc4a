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

#include <optional>

#include "distddp/augmented_lagrangian.hpp"
#include "distddp/consensus.hpp"
#include "distddp/network.hpp"
#include "distddp/problem.hpp"

namespace distddp {

struct NdSettings {
  int max_iterations = 50;
  DdpSettings ddp;
  AlSettings al;
  // P_i = c_P bdiag(Q_j), M_i = c_M bdiag(R_j) over the neighborhood; uniform values override.
  double state_penalty_scale = 8.0;
  double control_penalty_scale = 2.0;
  std::optional<double> uniform_state_penalty;
  std::optional<double> uniform_control_penalty;
  double penalty_floor = 1.0;
  PenaltyMode mode = PenaltyMode::Matrix;
  bool reset_multipliers = false;  // start every local AL-DDP from zero multipliers
  AdaptationSettings adaptation;   // two blocks: state consensus, control consensus
  int workers = 1;

  void validate() const;
};

/// Nested distributed DDP. Each agent solves its neighborhood-augmented problem with
/// AL-DDP, owners average the copies of their trajectory, and duals ascend on the gaps.
class NdDdp {
 public:
  NdDdp(MultiAgentProblem problem, NdSettings settings);

  SolveReport run();
  [[nodiscard]] const Network& network() const { return network_; }
  [[nodiscard]] const MultiAgentProblem& problem() const { return problem_; }

 private:
  MultiAgentProblem problem_;
  NdSettings settings_;
  Network network_;
};

}  // namespace distddp
