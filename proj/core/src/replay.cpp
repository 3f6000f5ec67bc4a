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

#include "distddp/replay.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <stdexcept>

namespace distddp {

ReplayResult replay_closed_loop(const MultiAgentProblem& problem, const std::vector<Trajectory>& plans,
                                const std::vector<ControlLaw>& laws, const ReplaySettings& settings) {
  const int M = problem.size();
  if (static_cast<int>(plans.size()) != M) throw std::invalid_argument("one plan per agent is required");
  if (settings.feedback && static_cast<int>(laws.size()) != M)
    throw std::invalid_argument("feedback replay needs one control law per agent");
  if (settings.position_noise_std < 0) throw std::invalid_argument("noise level must be non-negative");

  std::mt19937_64 rng(settings.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  const int K = problem.horizon;

  ReplayResult out;
  out.executed.resize(M);
  out.error_trace.assign(M, {});
  for (int i = 0; i < M; ++i) {
    out.executed[i].dt = plans[i].dt;
    out.executed[i].states.push_back(plans[i].states[0]);
  }
  // Agents advance in lockstep so the random stream does not depend on agent order within a step.
  for (int k = 0; k < K; ++k) {
    for (int i = 0; i < M; ++i) {
      const auto& spec = problem.agents[i];
      const Vector& x = out.executed[i].states[k];
      Vector u = plans[i].controls[k];
      if (settings.feedback) u += laws[i].feedback[k] * (x - plans[i].states[k]);
      Vector next = spec.dynamics->step(x, u);
      if (settings.position_noise_std > 0)
        for (int d = 0; d < spec.position_dim; ++d) next(d) += settings.position_noise_std * noise(rng);
      out.executed[i].controls.push_back(u);
      out.executed[i].states.push_back(next);
    }
  }

  double total = 0.0;
  for (int i = 0; i < M; ++i) {
    const int pd = problem.agents[i].position_dim;
    for (int k = 0; k <= K; ++k)
      out.error_trace[i].push_back((out.executed[i].states[k].head(pd) - plans[i].states[k].head(pd)).norm());
    out.tracking_error.push_back(out.error_trace[i].back());
    total += out.tracking_error.back();
  }
  out.mean_terminal_error = total / M;
  out.min_pair_distance = std::numeric_limits<double>::infinity();
  // Every pair counts here, not just graph edges: a drifting robot can hit anyone.
  for (int i = 0; i < M; ++i)
    for (int j = i + 1; j < M; ++j) {
      const double d = min_distance(out.executed[i], out.executed[j], problem.agents[i].position_dim);
      out.min_pair_distance = std::min(out.min_pair_distance, d);
      out.collision_violation = std::max(out.collision_violation, problem.collision_distance - d);
    }
  return out;
}

}  // namespace distddp
