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

// distddp command line: run, bench, replay, validate and generate scenarios.

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>

#include "distddp/errors.hpp"
#include "distddp/replay.hpp"
#include "distddp/run_io.hpp"
#include "distddp/scaling.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kSolverError = 3;

// "builtin:<name>" selects a generator; anything else is a file path.
distddp::ScenarioConfig resolve(const std::string& source, const std::vector<std::string>& overrides,
                                const distddp::BuiltinOptions& options) {
  const std::string prefix = "builtin:";
  if (source.rfind(prefix, 0) == 0) {
    const auto cfg = distddp::builtin_scenario(source.substr(prefix.size()), options);
    return distddp::parse_config(distddp::write_config(cfg), overrides, source);
  }
  return distddp::load_config(source, overrides);
}

void print_metrics(const distddp::RunOutput& run) {
  const auto& m = run.metrics;
  std::cout << std::setprecision(6) << run.config.name << " [" << run.report.solver << "] iterations="
            << run.report.iterations << " cost=" << m.total_cost
            << " max_terminal_error=" << m.max_terminal_position_error << " min_distance=" << m.min_pair_distance
            << " collision=" << m.collision_violation << " connectivity=" << m.connectivity_violation
            << " obstacle=" << m.obstacle_violation << " state_box=" << m.state_box_violation
            << " control_box=" << m.control_box_violation << " wall=" << run.report.wall_time << "s"
            << " messages=" << run.messages.size() << " non_edge=" << run.audit.non_edge_messages << "\n";
}

std::vector<int> parse_ints(const std::string& list) {
  std::vector<int> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  return out;
}

std::vector<std::string> parse_words(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed DDP trajectory optimization for multi-agent teams"};
  app.require_subcommand(1);

  std::string source, out_dir, run_dir;
  std::vector<std::string> overrides;
  distddp::BuiltinOptions builtin;

  auto* run = app.add_subcommand("run", "solve a scenario and write its outputs");
  run->add_option("config", source, "config file, or builtin:<name>")->required();
  run->add_option("overrides", overrides, "dotted key=value overrides");
  run->add_option("-o,--output", out_dir, "output directory");
  run->add_option("--agents", builtin.agents, "team size for builtin scenarios");
  run->add_option("--neighbors", builtin.neighbors, "|N_i| for builtin scenarios");

  auto* validate = app.add_subcommand("validate", "check a scenario without solving it");
  validate->add_option("config", source, "config file, or builtin:<name>")->required();
  validate->add_option("overrides", overrides, "dotted key=value overrides");

  auto* generate = app.add_subcommand("generate", "write a builtin scenario as a config file");
  std::string name;
  generate->add_option("name", name, "builtin name")->required();
  generate->add_option("-o,--output", out_dir, "config path (default: stdout)");
  generate->add_option("--agents", builtin.agents, "team size");
  generate->add_option("--neighbors", builtin.neighbors, "|N_i|");

  auto* bench = app.add_subcommand("bench", "time solvers over team sizes of one task family");
  distddp::ScalingOptions scaling;
  std::string agents_list = "2,4,8,16", solver_list = "centralized,md-ddp";
  bench->add_option("--family", scaling.family, "builtin family");
  bench->add_option("--agents", agents_list, "comma separated team sizes");
  bench->add_option("--solvers", solver_list, "comma separated solvers");
  bench->add_option("--neighbors", scaling.neighbors, "fixed |N_i|");
  bench->add_option("--repetitions", scaling.repetitions, "repetitions per point (median reported)");
  bench->add_option("--set", scaling.overrides, "dotted key=value overrides");

  auto* replay = app.add_subcommand("replay", "execute a solved run under position noise");
  double noise = 0.01;
  int seeds = 20;
  bool feedback = true;
  replay->add_option("run_dir", run_dir, "output directory of a run")->required();
  replay->add_option("--noise", noise, "position noise std per step [m]");
  replay->add_option("--seeds", seeds, "number of seeds (0, 1, ...)");
  replay->add_option("--feedback", feedback, "apply the feedback gains (true/false)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*validate) {
      const auto cfg = resolve(source, overrides, builtin);
      std::cout << cfg.name << ": valid (" << cfg.agents.size() << " agents)\n";
      return kOk;
    }
    if (*generate) {
      const auto text = distddp::write_config(distddp::builtin_scenario(name, builtin));
      if (out_dir.empty()) {
        std::cout << text;
      } else {
        std::ofstream(out_dir) << text;
      }
      return kOk;
    }
    if (*run) {
      const auto cfg = resolve(source, overrides, builtin);
      const auto result = distddp::run_scenario(cfg);
      if (!out_dir.empty()) distddp::write_run(out_dir, result);
      print_metrics(result);
      return kOk;
    }
    if (*bench) {
      scaling.agents = parse_ints(agents_list);
      scaling.solvers = parse_words(solver_list);
      const auto table = distddp::scaling_benchmark(scaling);
      std::cout << "solver,agents,iterations,wall_time_s,local_step_time_s,critical_path_time_s\n";
      for (const auto& p : table)
        std::cout << p.solver << "," << p.agents << "," << p.iterations << "," << p.wall_time << ","
                  << p.local_step_time << "," << p.critical_path_time << "\n";
      for (const auto& solver : scaling.solvers) {
        std::vector<double> m, wall, local;
        for (const auto& p : table)
          if (p.solver == solver) {
            m.push_back(p.agents);
            wall.push_back(p.wall_time);
            local.push_back(p.local_step_time);
          }
        if (m.size() >= 2)
          std::cout << "# " << solver << ": wall-time slope " << distddp::loglog_slope(m, wall)
                    << ", local-step slope " << distddp::loglog_slope(m, local) << "\n";
      }
      return kOk;
    }
    if (*replay) {
      const auto stored = distddp::load_run(run_dir);
      const auto problem = distddp::build_problem(stored.config);
      std::cout << "seed,feedback,mean_terminal_error,min_pair_distance,collision_violation\n";
      for (int s = 0; s < seeds; ++s) {
        distddp::ReplaySettings rs;
        rs.position_noise_std = noise;
        rs.seed = static_cast<std::uint64_t>(s);
        rs.feedback = feedback;
        const auto r = distddp::replay_closed_loop(problem, stored.trajectories, stored.laws, rs);
        std::cout << s << "," << feedback << "," << r.mean_terminal_error << "," << r.min_pair_distance << ","
                  << r.collision_violation << "\n";
      }
      return kOk;
    }
  } catch (const distddp::ConfigError& e) {
    std::cerr << "configuration error:\n";
    for (const auto& p : e.problems()) std::cerr << "  " << p << "\n";
    return kConfigError;
  } catch (const distddp::SolverError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kSolverError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kOk;
}
