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

#include <iosfwd>
#include <string>
#include <vector>

#include "distddp/runner.hpp"

namespace distddp {

/// One row per step: k, t, states, then controls (blank on the final row). Values use
/// 17 significant digits so a write/read cycle reproduces every double exactly.
void write_trajectory_csv(std::ostream& os, const Trajectory& t);
Trajectory read_trajectory_csv(std::istream& is);

/// One row per step: k, feedforward, then the feedback matrix row by row.
void write_gains_csv(std::ostream& os, const ControlLaw& law, int state_dim);
ControlLaw read_gains_csv(std::istream& is);

void write_residuals_csv(std::ostream& os, const std::vector<ResidualRecord>& records);
void write_summary_json(std::ostream& os, const RunOutput& run);

/// Writes config.json, summary.json, timing.json, residuals.csv, messages.csv and per-agent
/// trajectory/gain files into `dir`, creating it when needed. Everything except
/// timing.json is reproducible bit for bit.
void write_run(const std::string& dir, const RunOutput& run);

struct StoredRun {
  ScenarioConfig config;
  std::vector<Trajectory> trajectories;
  std::vector<ControlLaw> laws;
};

StoredRun load_run(const std::string& dir);

}  // namespace distddp
