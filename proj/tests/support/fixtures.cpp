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

#include "fixtures.hpp"

#include "distddp/models.hpp"

namespace distddp::testing {

MultiAgentProblem car_team(const std::vector<Vector>& starts, const std::vector<Vector>& goals,
                           NeighborhoodGraph graph, int horizon, double dt) {
  MultiAgentProblem p;
  p.horizon = horizon;
  p.graph = std::move(graph);
  Vector q(4), r(2), qf(4);
  q << 30, 30, 0, 6;
  r << 0.5, 0.5;
  qf << 100, 100, 0, 100;
  auto dyn = std::make_shared<DubinsCar>(dt);
  for (std::size_t i = 0; i < starts.size(); ++i) {
    AgentSpec a;
    a.dynamics = dyn;
    a.initial_state = Vector::Zero(4);
    a.initial_state.head(2) = starts[i];
    Vector g = Vector::Zero(4);
    g.head(2) = goals[i];
    a.cost = QuadraticCost::diagonal(q, r, qf, g);
    p.agents.push_back(a);
  }
  return p;
}

}  // namespace distddp::testing
