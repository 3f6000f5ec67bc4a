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

#include "distddp/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "distddp/errors.hpp"

namespace distddp {

void MultiAgentProblem::validate() const {
  std::vector<std::string> problems;
  auto fail = [&](const std::string& s) { problems.push_back(s); };
  if (agents.empty()) fail("no agents");
  if (horizon <= 0) fail("horizon must be positive");
  if (graph.size() != size()) fail("neighborhood graph size differs from the agent count");
  if (collision_distance < 0.0) fail("collision distance must be non-negative");
  if (connectivity_distance < 0.0) fail("connectivity distance must be non-negative");
  if (collision_distance > 0.0 && connectivity_distance > 0.0 &&
      !(collision_distance < connectivity_distance))
    fail("collision distance must be smaller than the connectivity distance");
  for (int i = 0; i < size(); ++i) {
    const auto& a = agents[i];
    const std::string who = "agent " + std::to_string(i) + ": ";
    if (!a.dynamics || !a.cost) {
      fail(who + "missing dynamics or cost");
      continue;
    }
    if (a.initial_state.size() != a.state_dim()) fail(who + "initial state has the wrong size");
    if (a.cost->goal().size() != a.state_dim()) fail(who + "goal has the wrong size");
    if (a.cost->R().rows() != a.control_dim()) fail(who + "control weight has the wrong size");
    if (a.position_dim < 1 || a.position_dim > a.state_dim()) fail(who + "bad position dimension");
    if (a.dynamics->dt() != agents.front().dynamics->dt()) fail(who + "time step differs");
    for (const auto& o : a.obstacles)
      if (o->center().size() != a.position_dim) fail(who + "obstacle dimension mismatch");
    for (const auto& b : a.state_boxes)
      for (int idx : b->indices())
        if (idx < 0 || idx >= a.state_dim()) fail(who + "state box index out of range");
    for (const auto& b : a.control_boxes)
      for (int idx : b->indices())
        if (idx < 0 || idx >= a.control_dim()) fail(who + "control box index out of range");
  }
  for (int i = 1; i < size(); ++i)
    if (agents[i].position_dim != agents[0].position_dim)
      fail("all agents must share one position dimension");
  if (!problems.empty()) throw ConfigError(problems);
}

std::vector<ConstraintPtr> MultiAgentProblem::local_constraints(int i, int state_offset,
                                                                int control_offset) const {
  std::vector<ConstraintPtr> out;
  const auto& a = agents.at(i);
  for (const auto& b : a.control_boxes) out.push_back(b->shifted(state_offset, control_offset));
  for (const auto& b : a.state_boxes) out.push_back(b->shifted(state_offset, control_offset));
  for (const auto& o : a.obstacles) out.push_back(o->shifted(state_offset, control_offset));
  return out;
}

namespace {

StackedProblem build_stack(const MultiAgentProblem& problem, int owner,
                           const std::vector<int>& members, bool centralized) {
  StackedProblem s;
  s.owner = owner;
  s.members = members;
  std::vector<DynamicsPtr> blocks;
  std::vector<BlockSumCost::Term> terms;
  for (int j : members) {
    const auto& a = problem.agents[j];
    s.state_offsets.push_back(s.state_dim);
    s.control_offsets.push_back(s.control_dim);
    blocks.push_back(a.dynamics);
    BlockSumCost::Term t;
    t.cost = a.cost;
    t.weight = centralized ? 1.0 : 1.0 / static_cast<double>(problem.graph.neighbor_of(j).size());
    t.state_offset = s.state_dim;
    t.state_dim = a.state_dim();
    t.control_offset = s.control_dim;
    t.control_dim = a.control_dim();
    terms.push_back(t);
    s.state_dim += a.state_dim();
    s.control_dim += a.control_dim();
  }
  s.dynamics = std::make_shared<BlockDiagonalDynamics>(blocks);
  s.cost = std::make_shared<BlockSumCost>(terms, s.state_dim, s.control_dim);
  s.initial_state.resize(s.state_dim);
  for (std::size_t b = 0; b < members.size(); ++b)
    s.initial_state.segment(s.state_offsets[b], problem.agents[members[b]].state_dim()) =
        problem.agents[members[b]].initial_state;

  auto stack = std::make_shared<ConstraintStack>();
  const int dim = problem.agents.front().position_dim;
  auto couple = [&](int slot_a, int slot_b, int neighbor) {
    if (problem.collision_distance > 0.0)
      stack->add(std::make_shared<InterAgentConstraint>(
          InterAgentConstraint::Kind::Collision, problem.collision_distance, s.state_offsets[slot_a],
          s.state_offsets[slot_b], dim, neighbor));
    if (problem.connectivity_distance > 0.0)
      stack->add(std::make_shared<InterAgentConstraint>(
          InterAgentConstraint::Kind::Connectivity, problem.connectivity_distance,
          s.state_offsets[slot_a], s.state_offsets[slot_b], dim, neighbor));
  };
  if (centralized) {
    for (std::size_t b = 0; b < members.size(); ++b)
      for (const auto& c : problem.local_constraints(members[b], s.state_offsets[b], s.control_offsets[b]))
        stack->add(c);
    for (const auto& [i, j] : problem.graph.coupled_pairs()) couple(i, j, j);
  } else {
    for (const auto& c : problem.local_constraints(owner, 0, 0)) stack->add(c);
    for (std::size_t b = 1; b < members.size(); ++b) couple(0, static_cast<int>(b), members[b]);
  }
  s.constraints = stack;
  return s;
}

}  // namespace

StackedProblem assemble_augmented(const MultiAgentProblem& problem, int owner) {
  return build_stack(problem, owner, problem.graph.neighbors(owner), false);
}

StackedProblem assemble_centralized(const MultiAgentProblem& problem) {
  std::vector<int> all(problem.size());
  for (int i = 0; i < problem.size(); ++i) all[i] = i;
  return build_stack(problem, -1, all, true);
}

Vector StackedProblem::block(const Vector& stacked, int slot) const {
  const int next = slot + 1 < static_cast<int>(members.size()) ? state_offsets[slot + 1] : state_dim;
  return stacked.segment(state_offsets[slot], next - state_offsets[slot]);
}

Trajectory StackedProblem::member_trajectory(const Trajectory& stacked, int slot) const {
  const int p = (slot + 1 < static_cast<int>(members.size()) ? state_offsets[slot + 1] : state_dim) -
                state_offsets[slot];
  const int q = (slot + 1 < static_cast<int>(members.size()) ? control_offsets[slot + 1] : control_dim) -
                control_offsets[slot];
  Trajectory t;
  t.dt = stacked.dt;
  t.states = slice_sequence(stacked.states, state_offsets[slot], p);
  t.controls = slice_sequence(stacked.controls, control_offsets[slot], q);
  return t;
}

Trajectory StackedProblem::stack(const std::vector<Trajectory>& parts) const {
  if (parts.size() != members.size()) throw std::invalid_argument("one trajectory per member needed");
  Trajectory t;
  t.dt = parts.front().dt;
  const int K = parts.front().horizon();
  t.states.assign(K + 1, Vector(state_dim));
  t.controls.assign(K, Vector(control_dim));
  for (std::size_t b = 0; b < parts.size(); ++b) {
    for (int k = 0; k <= K; ++k)
      t.states[k].segment(state_offsets[b], parts[b].states[k].size()) = parts[b].states[k];
    for (int k = 0; k < K; ++k)
      t.controls[k].segment(control_offsets[b], parts[b].controls[k].size()) = parts[b].controls[k];
  }
  return t;
}

ControlLaw StackedProblem::member_law(const ControlLaw& law, int slot) const {
  const int last = static_cast<int>(members.size()) - 1;
  const int p = (slot < last ? state_offsets[slot + 1] : state_dim) - state_offsets[slot];
  const int q = (slot < last ? control_offsets[slot + 1] : control_dim) - control_offsets[slot];
  ControlLaw out;
  for (int k = 0; k < law.horizon(); ++k) {
    out.feedforward.push_back(law.feedforward[k].segment(control_offsets[slot], q));
    out.feedback.push_back(law.feedback[k].block(control_offsets[slot], state_offsets[slot], q, p));
  }
  out.expected_linear = law.expected_linear;
  out.expected_quadratic = law.expected_quadratic;
  return out;
}

double min_distance(const Trajectory& a, const Trajectory& b, int position_dim) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < a.states.size(); ++k)
    best = std::min(best, (a.states[k].head(position_dim) - b.states[k].head(position_dim)).norm());
  return best;
}

SolutionMetrics evaluate_solution(const MultiAgentProblem& problem,
                                  const std::vector<Trajectory>& trajectories) {
  if (static_cast<int>(trajectories.size()) != problem.size())
    throw std::invalid_argument("one trajectory per agent is required");
  SolutionMetrics m;
  const int K = problem.horizon;
  for (int i = 0; i < problem.size(); ++i) {
    const auto& a = problem.agents[i];
    const auto& t = trajectories[i];
    const double J = total_cost(*a.cost, t);
    m.agent_cost.push_back(J);
    m.total_cost += J;
    const double err = (a.position(t.states.back()) - a.position(a.cost->goal())).norm();
    m.terminal_position_error.push_back(err);
    m.max_terminal_position_error = std::max(m.max_terminal_position_error, err);
    for (int k = 0; k <= K; ++k) {
      const Vector none;
      for (const auto& b : a.state_boxes)
        if (b->window.contains(k))
          m.state_box_violation =
              std::max(m.state_box_violation, b->evaluate(t.states[k], none).maxCoeff());
      for (const auto& o : a.obstacles)
        if (o->window.contains(k))
          m.obstacle_violation = std::max(m.obstacle_violation, o->evaluate(t.states[k], none)(0));
      if (k < K)
        for (const auto& b : a.control_boxes)
          if (b->window.contains(k))
            m.control_box_violation =
                std::max(m.control_box_violation, b->evaluate(t.states[k], t.controls[k]).maxCoeff());
    }
  }
  m.min_pair_distance = std::numeric_limits<double>::infinity();
  const int dim = problem.agents.front().position_dim;
  for (const auto& [i, j] : problem.graph.coupled_pairs()) {
    for (int k = 0; k <= K; ++k) {
      const double d = (trajectories[i].states[k].head(dim) - trajectories[j].states[k].head(dim)).norm();
      m.min_pair_distance = std::min(m.min_pair_distance, d);
      if (problem.collision_distance > 0.0)
        m.collision_violation = std::max(m.collision_violation, problem.collision_distance - d);
      if (problem.connectivity_distance > 0.0)
        m.connectivity_violation = std::max(m.connectivity_violation, d - problem.connectivity_distance);
    }
  }
  return m;
}

}  // namespace distddp
