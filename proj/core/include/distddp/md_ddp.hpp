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

#include <memory>
#include <optional>
#include <vector>

#include "distddp/consensus.hpp"
#include "distddp/constraints.hpp"
#include "distddp/ddp.hpp"
#include "distddp/network.hpp"
#include "distddp/problem.hpp"

namespace distddp {

struct MdSettings {
  int max_iterations = 200;
  DdpSettings ddp;
  // Bases T0 = c1 R_i, P0 = c2 Q_i, M0 = c3 bdiag(Q_j); uniform values override them.
  double control_penalty_scale = 2.0;
  double state_penalty_scale = 8.0;
  double consensus_penalty_scale = 8.0;
  std::optional<double> uniform_control_penalty;
  std::optional<double> uniform_state_penalty;
  std::optional<double> uniform_consensus_penalty;
  double penalty_floor = 1.0;
  PenaltyMode mode = PenaltyMode::Matrix;
  double nesterov_eta = 0.0;
  bool nesterov_restart = false;
  AdaptationSettings adaptation;
  StopSettings stop;
  int workers = 1;
  int ddp_iterations_per_step = 0;  // 0: use ddp.max_iterations

  void validate() const;
};

/// Step 2 control projection at one step: argmin 1/2 |v - (u + T^-1 xi)|^2_T over the boxes.
/// Unmapped boxes reduce to componentwise clamping; mapped boxes are solved as a small QP.
Vector safe_control_projection(const Vector& u, const Vector& xi, const Vector& T,
                               const std::vector<const BoxConstraint*>& boxes);

/// Data of one per-step safe state projection. The augmented variable stacks the owner's
/// block (first `own_dim` entries) and the copies; block b starts at block_offsets[b] and
/// its position occupies the first `position_dim` entries of the block.
struct StateProjectionInput {
  Vector own_state;         // x_{i,k} from Step 1
  Vector own_dual;          // lambda_{i,k}
  Vector own_weight;        // diag P_i
  Vector consensus;         // z^a_{i,k}
  Vector consensus_dual;    // y_{i,k}
  Vector consensus_weight;  // diag M_i
  int own_dim = 0;
  std::vector<int> block_offsets;
  int position_dim = 2;
  std::vector<const BoxConstraint*> own_boxes;  // already filtered to the active step
  std::vector<HalfSpace> halfspaces;
};

struct StateProjectionResult {
  Vector state;
  bool feasible = true;
  double violation = 0.0;
};

/// argmin 1/2|x - v_own + P^-1 lambda|^2_P + 1/2|v - z + M^-1 y|^2_M subject to the own
/// state boxes and the half-spaces. Components no row touches take their closed form.
StateProjectionResult safe_state_projection(const StateProjectionInput& in);

/// Merged distributed DDP. Every agent runs an unconstrained local DDP, projects onto its
/// linearized safe set, and agrees with its neighbors through consensus averaging.
class MdDdp {
 public:
  MdDdp(MultiAgentProblem problem, MdSettings settings);

  SolveReport run();
  [[nodiscard]] const Network& network() const { return network_; }
  [[nodiscard]] const MultiAgentProblem& problem() const { return problem_; }

 private:
  MultiAgentProblem problem_;
  MdSettings settings_;
  Network network_;
};

}  // namespace distddp
