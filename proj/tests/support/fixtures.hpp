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

#include "distddp/problem.hpp"

namespace distddp::testing {

/// Cars at the given (x, y) starts driving to the given goals, with the usual car weights.
/// No boxes, obstacles or distance limits unless the caller adds them.
MultiAgentProblem car_team(const std::vector<Vector>& starts, const std::vector<Vector>& goals,
                           NeighborhoodGraph graph, int horizon, double dt = 0.02);

}  // namespace distddp::testing
