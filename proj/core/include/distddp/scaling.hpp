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

#include <string>
#include <vector>

#include "distddp/scenario.hpp"

namespace distddp {

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

double median(std::vector<double> values);

struct ScalingPoint {
  int agents = 0;
  std::string solver;
  double wall_time = 0.0;        // median over repetitions
  double local_step_time = 0.0;  // median; slowest agent's Step-1 time summed over iterations
  double critical_path_time = 0.0;
  int iterations = 0;
};

struct ScalingOptions {
  std::string family = "formation";
  std::vector<int> agents{2, 4, 8, 16};
  std::vector<std::string> solvers{"centralized", "md-ddp"};
  int neighbors = 2;
  int repetitions = 3;
  std::vector<std::string> overrides;  // dotted key=value applied to every generated task
};

/// Runs every solver at every team size under the same iteration budgets.
std::vector<ScalingPoint> scaling_benchmark(const ScalingOptions& options);

}  // namespace distddp
