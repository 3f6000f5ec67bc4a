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
#include <optional>
#include <string>
#include <vector>

#include "distddp/centralized.hpp"
#include "distddp/md_ddp.hpp"
#include "distddp/models.hpp"
#include "distddp/nd_ddp.hpp"
#include "distddp/problem.hpp"

namespace distddp {

struct DynamicsConfig {
  std::string kind = "car";  // car | unicycle | quadrotor
  double dt = 0.02;
  QuadrotorParams quadrotor;
};

/// Box rows on each agent's state or control. window_end < 0 means "until the end of the horizon".
struct BoxConfig {
  std::string target = "state";  // state | control
  std::vector<int> indices;
  Vector lower;
  Vector upper;
  std::optional<Matrix> map;
  int window_start = 0;
  int window_end = -1;
};

struct AgentConfig {
  Vector initial_state;
  Vector goal;
  std::vector<BoxConfig> boxes;  // in addition to the boxes shared by all agents
};

struct ObstacleConfig {
  Vector center;
  double radius = 0.0;
  double clearance = 0.0;
};

struct GraphConfig {
  std::string kind = "all";  // all | radius | k_nearest | explicit
  double radius = 0.0;
  int size = 0;  // k_nearest: |N_i| including self; radius: optional cap
  std::vector<std::vector<int>> adjacency;
};

struct SolverConfig {
  std::string kind = "md-ddp";  // md-ddp | nd-ddp | centralized
  int admm_iterations = 200;    // N
  int al_iterations = 10;       // L
  int ddp_iterations = 100;     // D
  double al_tolerance = 1e-3;
  double al_penalty_initial = 10.0;
  // MD-DDP: T = c1 R, P = c2 Q, M = c3 bdiag(Q). ND-DDP: P = c2 bdiag(Q), M = c1 bdiag(R).
  double c1 = 2.0;
  double c2 = 8.0;
  double c3 = 8.0;
  std::optional<double> uniform_tau;
  std::optional<double> uniform_rho;
  std::optional<double> uniform_mu;
  double penalty_floor = 1.0;
  std::string penalty_mode = "matrix";
  double nesterov_eta = 0.0;
  bool nesterov_restart = false;
  AdaptationSettings adaptation;
  StopSettings stop;
  bool reset_multipliers = false;
  int workers = 1;
};

struct ScenarioConfig {
  std::string name = "scenario";
  std::string family;  // builtin family the file came from; empty for hand-written tasks
  std::uint64_t seed = 0;
  DynamicsConfig dynamics;
  int horizon = 150;
  int position_dim = 2;
  Vector q, r, qf;
  Vector control_reference;  // empty: zero
  std::vector<AgentConfig> agents;
  std::vector<BoxConfig> boxes;
  std::vector<ObstacleConfig> obstacles;
  double collision_distance = 0.0;
  double connectivity_distance = 0.0;
  GraphConfig graph;
  SolverConfig solver;
};

/// Parses a JSON scenario. Unknown keys, malformed JSON (reported with line and column)
/// and every validation problem raise ConfigError. Overrides are "dotted.key=value" and
/// are applied before validation; values are read as JSON, falling back to a string.
ScenarioConfig parse_config(const std::string& text, const std::vector<std::string>& overrides = {},
                            const std::string& source = "<string>");
ScenarioConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

/// Serializes every field, defaults included, so that parsing the result gives `cfg` back.
std::string write_config(const ScenarioConfig& cfg);

/// Every inconsistency found; empty when the config is usable.
std::vector<std::string> validate_config(const ScenarioConfig& cfg);

MultiAgentProblem build_problem(const ScenarioConfig& cfg);
NeighborhoodGraph build_graph(const ScenarioConfig& cfg);
DynamicsPtr build_dynamics(const DynamicsConfig& cfg);
MdSettings md_settings(const ScenarioConfig& cfg);
NdSettings nd_settings(const ScenarioConfig& cfg);
CentralizedSettings centralized_settings(const ScenarioConfig& cfg);

// ---------------------------------------------------------------------------
// Builtin task generators. `agents` <= 0 selects the family's default size.

struct BuiltinOptions {
  int agents = 0;
  int neighbors = 0;  // |N_i| for families with a k-nearest graph; 0 keeps the default
};

std::vector<std::string> builtin_names();
ScenarioConfig builtin_scenario(const std::string& name, const BuiltinOptions& options = {});

/// Differences between the config's constraint constants and the reference constants of
/// its builtin family. Empty when `family` is empty or everything matches.
std::vector<std::string> builtin_constant_mismatches(const ScenarioConfig& cfg);

}  // namespace distddp
