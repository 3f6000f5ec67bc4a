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

#include "distddp/augmented_lagrangian.hpp"
#include "distddp/consensus.hpp"
#include "distddp/problem.hpp"

namespace distddp {

struct CentralizedSettings {
  DdpSettings ddp;
  AlSettings al;
};

/// Baseline: every agent stacked into one system and solved by AL-DDP with full information.
SolveReport solve_centralized(const MultiAgentProblem& problem, const CentralizedSettings& settings = {});

}  // namespace distddp
