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

#include <cstdint>
#include <vector>

#include "distddp/problem.hpp"

namespace distddp {

struct ReplaySettings {
  double position_noise_std = 0.0;  // additive noise on every position component, every step
  std::uint64_t seed = 0;
  bool feedback = true;             // false: apply the planned controls open loop
};

struct ReplayResult {
  std::vector<Trajectory> executed;
  std::vector<double> tracking_error;           // |p_K - p*_K| per agent
  std::vector<std::vector<double>> error_trace; // per agent, per step
  double mean_terminal_error = 0.0;
  double min_pair_distance = 0.0;
  double collision_violation = 0.0;  // max(0, d_col - min distance) over all pairs
};

/// Executes the plans under additive state noise with u = u* + K (x - x*) or u = u*.
ReplayResult replay_closed_loop(const MultiAgentProblem& problem, const std::vector<Trajectory>& plans,
                                const std::vector<ControlLaw>& laws, const ReplaySettings& settings);

}  // namespace distddp
