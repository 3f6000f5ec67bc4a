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

#include "distddp/md_ddp.hpp"
#include "oracles.hpp"

namespace distddp::testing {

/// Random per-step safe-state projection with a known feasible point. The augmented
/// variable has at most `max_dim` entries, 2D positions, own boxes and up to
/// `max_halfspaces` half-spaces.
struct ProjectionInstance {
  StateProjectionInput input;
  std::vector<std::shared_ptr<BoxConstraint>> boxes;  // owns what input.own_boxes points to
};

ProjectionInstance random_projection(Random& rng, int max_dim = 6, int max_halfspaces = 4);

/// The same problem written as a dense QP straight from its objective and rows.
QpProblem projection_qp(const StateProjectionInput& in);

}  // namespace distddp::testing
