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

#include "distddp/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "distddp/runner.hpp"

namespace distddp {

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope fit needs two or more points");
  double mx = 0, my = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0 && y[i] > 0)) throw std::invalid_argument("log-log fit needs positive data");
    mx += std::log(x[i]) / n;
    my += std::log(y[i]) / n;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0) throw std::invalid_argument("slope fit needs distinct x values");
  return sxy / sxx;
}

double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median of nothing");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<ScalingPoint> scaling_benchmark(const ScalingOptions& o) {
  if (o.repetitions < 1) throw std::invalid_argument("at least one repetition is required");
  std::vector<ScalingPoint> table;
  for (const auto& solver : o.solvers) {
    for (int M : o.agents) {
      BuiltinOptions b;
      b.agents = M;
      b.neighbors = o.neighbors;
      std::vector<std::string> overrides = o.overrides;
      overrides.push_back("solver.kind=\"" + solver + "\"");
      const ScenarioConfig cfg = parse_config(write_config(builtin_scenario(o.family, b)), overrides);
      std::vector<double> wall, local, critical;
      int iterations = 0;
      for (int r = 0; r < o.repetitions; ++r) {
        const RunOutput run = run_scenario(cfg);
        wall.push_back(run.report.wall_time);
        local.push_back(run.report.local_step_time);
        critical.push_back(run.report.critical_path_time);
        iterations = run.report.iterations;
      }
      table.push_back({M, solver, median(wall), median(local), median(critical), iterations});
    }
  }
  return table;
}

}  // namespace distddp
