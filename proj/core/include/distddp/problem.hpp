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
#include <string>
#include <vector>

#include "distddp/constraints.hpp"
#include "distddp/cost.hpp"
#include "distddp/ddp.hpp"
#include "distddp/dynamics.hpp"
#include "distddp/network.hpp"

namespace distddp {

/// One agent of a multi-agent task. Its position is the first `position_dim` state entries.
struct AgentSpec {
  DynamicsPtr dynamics;
  std::shared_ptr<const QuadraticCost> cost;
  Vector initial_state;
  int position_dim = 2;
  std::vector<std::shared_ptr<const BoxConstraint>> state_boxes;
  std::vector<std::shared_ptr<const BoxConstraint>> control_boxes;
  std::vector<std::shared_ptr<const ObstacleConstraint>> obstacles;

  [[nodiscard]] int state_dim() const { return dynamics->state_dim(); }
  [[nodiscard]] int control_dim() const { return dynamics->control_dim(); }
  [[nodiscard]] Vector position(const Vector& x) const { return x.head(position_dim); }
};

/// Agents, horizon, neighborhoods and the pairwise distance limits (0 disables a family).
struct MultiAgentProblem {
  std::vector<AgentSpec> agents;
  int horizon = 0;
  NeighborhoodGraph graph;
  double collision_distance = 0.0;
  double connectivity_distance = 0.0;

  [[nodiscard]] int size() const { return static_cast<int>(agents.size()); }
  [[nodiscard]] double dt() const { return agents.front().dynamics->dt(); }
  /// Throws ConfigError listing every inconsistency.
  void validate() const;
  /// Boxes and obstacles of agent i, shifted to the given offsets of a stacked vector.
  [[nodiscard]] std::vector<ConstraintPtr> local_constraints(int i, int state_offset,
                                                             int control_offset) const;
};

/// A stacked system made of several agents' blocks: the augmented problem of one owner
/// (members = N_owner, cost weights 1/|P_j|) or the centralized problem (all agents, weight 1).
struct StackedProblem {
  int owner = -1;  // -1 for the centralized stack
  std::vector<int> members;
  std::vector<int> state_offsets;
  std::vector<int> control_offsets;
  int state_dim = 0;
  int control_dim = 0;
  std::shared_ptr<const BlockDiagonalDynamics> dynamics;
  std::shared_ptr<const BlockSumCost> cost;
  std::shared_ptr<const ConstraintStack> constraints;
  Vector initial_state;

  [[nodiscard]] Vector block(const Vector& stacked, int member_slot) const;
  [[nodiscard]] Trajectory member_trajectory(const Trajectory& stacked, int member_slot) const;
  [[nodiscard]] Trajectory stack(const std::vector<Trajectory>& member_trajectories) const;
  /// Rows of the law belonging to the member's controls and columns of its states.
  [[nodiscard]] ControlLaw member_law(const ControlLaw& law, int member_slot) const;
};

/// Neighborhood-augmented problem of agent `owner`: its own block first, then its
/// neighbors in ascending id; inter-agent rows couple the owner's block to each copy.
StackedProblem assemble_augmented(const MultiAgentProblem& problem, int owner);

/// All agents in one stack with every coupled pair constrained once.
StackedProblem assemble_centralized(const MultiAgentProblem& problem);

/// Outcome metrics of a set of per-agent trajectories against the original task.
struct SolutionMetrics {
  double total_cost = 0.0;
  std::vector<double> agent_cost;
  std::vector<double> terminal_position_error;
  double max_terminal_position_error = 0.0;
  double min_pair_distance = 0.0;           // over coupled pairs and all steps
  double collision_violation = 0.0;         // worst d_col - distance over coupled pairs
  double connectivity_violation = 0.0;      // worst distance - d_con over coupled pairs
  double obstacle_violation = 0.0;
  double state_box_violation = 0.0;
  double control_box_violation = 0.0;
};

SolutionMetrics evaluate_solution(const MultiAgentProblem& problem,
                                  const std::vector<Trajectory>& trajectories);

/// Distance limits of one pair over time; used for replay and reports.
double min_distance(const Trajectory& a, const Trajectory& b, int position_dim);

}  // namespace distddp
