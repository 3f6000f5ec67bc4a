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

#include "distddp/run_io.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "distddp/errors.hpp"

namespace distddp {

namespace fs = std::filesystem;

namespace {

constexpr int kDigits = std::numeric_limits<double>::max_digits10;

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double number(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("malformed number '" + s + "'");
  return v;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream os(p);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  os << std::setprecision(kDigits);
  return os;
}

std::ifstream open_in(const fs::path& p) {
  std::ifstream is(p);
  if (!is) throw std::runtime_error("cannot read " + p.string());
  return is;
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const Trajectory& t) {
  const int p = t.state_dim(), q = t.control_dim();
  os << std::setprecision(kDigits);
  os << "# one row per step k at time t = k*dt; x* are states, u* controls (empty on the final step)\n";
  os << "# dt=" << t.dt << "\n";
  os << "k,t";
  for (int i = 0; i < p; ++i) os << ",x" << i;
  for (int i = 0; i < q; ++i) os << ",u" << i;
  os << "\n";
  for (std::size_t k = 0; k < t.states.size(); ++k) {
    os << k << "," << static_cast<double>(k) * t.dt;
    for (int i = 0; i < p; ++i) os << "," << t.states[k](i);
    for (int i = 0; i < q; ++i) {
      os << ",";
      if (k < t.controls.size()) os << t.controls[k](i);
    }
    os << "\n";
  }
}

Trajectory read_trajectory_csv(std::istream& is) {
  Trajectory t;
  std::string line;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(is, line)) {
    if (line.rfind("# dt=", 0) == 0) {
      t.dt = number(line.substr(5));
      continue;
    }
    if (line.empty() || line[0] == '#') continue;
    if (header.empty()) header = split(line);
    else rows.push_back(split(line));
  }
  int p = 0, q = 0;
  for (const auto& h : header) {
    if (h.rfind("x", 0) == 0) ++p;
    if (h.rfind("u", 0) == 0) ++q;
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& cells = rows[r];
    if (static_cast<int>(cells.size()) != 2 + p + q) throw std::invalid_argument("trajectory row with wrong width");
    Vector x(p);
    for (int i = 0; i < p; ++i) x(i) = number(cells[2 + i]);
    t.states.push_back(x);
    if (r + 1 < rows.size()) {
      Vector u(q);
      for (int i = 0; i < q; ++i) u(i) = number(cells[2 + p + i]);
      t.controls.push_back(u);
    }
  }
  t.validate();
  return t;
}

void write_gains_csv(std::ostream& os, const ControlLaw& law, int state_dim) {
  const int q = law.horizon() > 0 ? static_cast<int>(law.feedforward[0].size()) : 0;
  os << std::setprecision(kDigits);
  os << "# one row per step k; kff* is the feed-forward term, K<r>_<c> the feedback gain on state c for control r\n";
  os << "# state_dim=" << state_dim << "\n";
  os << "k";
  for (int i = 0; i < q; ++i) os << ",kff" << i;
  for (int r = 0; r < q; ++r)
    for (int c = 0; c < state_dim; ++c) os << ",K" << r << "_" << c;
  os << "\n";
  for (int k = 0; k < law.horizon(); ++k) {
    os << k;
    for (int i = 0; i < q; ++i) os << "," << law.feedforward[k](i);
    for (int r = 0; r < q; ++r)
      for (int c = 0; c < state_dim; ++c) os << "," << law.feedback[k](r, c);
    os << "\n";
  }
}

ControlLaw read_gains_csv(std::istream& is) {
  ControlLaw law;
  std::string line;
  int p = -1;
  std::vector<std::string> header;
  while (std::getline(is, line)) {
    if (line.rfind("# state_dim=", 0) == 0) {
      p = std::stoi(line.substr(12));
      continue;
    }
    if (line.empty() || line[0] == '#') continue;
    if (header.empty()) {
      header = split(line);
      continue;
    }
    const auto cells = split(line);
    int q = 0;
    for (const auto& h : header)
      if (h.rfind("kff", 0) == 0) ++q;
    if (p < 0 || static_cast<int>(cells.size()) != 1 + q + q * p) throw std::invalid_argument("gain row with wrong width");
    Vector ff(q);
    Matrix K(q, p);
    for (int i = 0; i < q; ++i) ff(i) = number(cells[1 + i]);
    for (int r = 0; r < q; ++r)
      for (int c = 0; c < p; ++c) K(r, c) = number(cells[1 + q + r * p + c]);
    law.feedforward.push_back(ff);
    law.feedback.push_back(K);
  }
  return law;
}

void write_residuals_csv(std::ostream& os, const std::vector<ResidualRecord>& records) {
  os << std::setprecision(kDigits);
  os << "# per iteration and agent: primal/dual residual norms of the control, own-state and consensus blocks,\n"
     << "# penalty scale factors, worst constraint violation and infeasible projections\n";
  os << "iteration,agent,r1_pri,r1_dual,r2_pri,r2_dual,r3_pri,r3_dual,a1,a2,a3,violation,infeasible\n";
  for (const auto& r : records) {
    os << r.iteration << "," << r.agent;
    for (const auto& b : r.blocks) os << "," << b.primal << "," << b.dual;
    for (double a : r.scales) os << "," << a;
    os << "," << r.constraint_violation << "," << r.infeasible_projections << "\n";
  }
}

void write_summary_json(std::ostream& os, const RunOutput& run) {
  nlohmann::json j;
  const auto& r = run.report;
  const auto& m = run.metrics;
  j["scenario"] = run.config.name;
  j["solver"] = r.solver;
  j["agents"] = r.trajectories.size();
  j["iterations"] = r.iterations;
  j["stopped_on_residuals"] = r.stopped_on_residuals;
  j["infeasible_projections"] = r.infeasible_projections;
  j["notes"] = r.notes;
  j["total_cost"] = m.total_cost;
  j["agent_cost"] = m.agent_cost;
  j["terminal_position_error"] = m.terminal_position_error;
  j["max_terminal_position_error"] = m.max_terminal_position_error;
  j["min_pair_distance"] = m.min_pair_distance;
  j["violations"] = {{"collision", m.collision_violation},       {"connectivity", m.connectivity_violation},
                     {"obstacle", m.obstacle_violation},         {"state_box", m.state_box_violation},
                     {"control_box", m.control_box_violation}};
  j["messages"] = {{"total", run.messages.size()},
                   {"non_edge", run.audit.non_edge_messages},
                   {"exchanges_checked", run.audit.exchanges_checked},
                   {"count_mismatches", run.audit.mismatches}};
  if (!r.total_residual_history.empty()) {
    const auto& last = r.total_residual_history.back();
    nlohmann::json res = nlohmann::json::array();
    for (const auto& b : last) res.push_back({{"primal", b.primal}, {"dual", b.dual}});
    j["final_total_residuals"] = res;
  }
  os << j.dump(2) << "\n";
}

void write_run(const std::string& dir, const RunOutput& run) {
  const fs::path root(dir);
  fs::create_directories(root);
  {
    auto os = open_out(root / "config.json");
    os << write_config(run.config);
  }
  {
    auto os = open_out(root / "summary.json");
    write_summary_json(os, run);
  }
  {
    // Timings are the only non-reproducible output, so they live apart from the summary.
    nlohmann::json t = {{"wall_time_s", run.report.wall_time},
                        {"critical_path_time_s", run.report.critical_path_time},
                        {"local_step_time_s", run.report.local_step_time}};
    auto os = open_out(root / "timing.json");
    os << t.dump(2) << "\n";
  }
  {
    auto os = open_out(root / "residuals.csv");
    write_residuals_csv(os, run.report.residuals);
  }
  {
    auto os = open_out(root / "messages.csv");
    os << "# one row per delivered message\n";
    os << "iteration,phase,sender,receiver,kind,bytes\n";
    for (const auto& m : run.messages)
      os << m.iteration << "," << to_string(m.phase) << "," << m.sender << "," << m.receiver << ","
         << to_string(m.kind) << "," << m.bytes << "\n";
  }
  for (std::size_t i = 0; i < run.report.trajectories.size(); ++i) {
    const auto& t = run.report.trajectories[i];
    auto os = open_out(root / ("agent_" + std::to_string(i) + "_trajectory.csv"));
    write_trajectory_csv(os, t);
    if (i < run.report.laws.size()) {
      auto gs = open_out(root / ("agent_" + std::to_string(i) + "_gains.csv"));
      write_gains_csv(gs, run.report.laws[i], t.state_dim());
    }
  }
}

StoredRun load_run(const std::string& dir) {
  const fs::path root(dir);
  StoredRun run;
  run.config = load_config((root / "config.json").string());
  for (std::size_t i = 0; i < run.config.agents.size(); ++i) {
    auto ts = open_in(root / ("agent_" + std::to_string(i) + "_trajectory.csv"));
    run.trajectories.push_back(read_trajectory_csv(ts));
    const fs::path gains = root / ("agent_" + std::to_string(i) + "_gains.csv");
    if (fs::exists(gains)) {
      auto gs = open_in(gains);
      run.laws.push_back(read_gains_csv(gs));
    }
  }
  return run;
}

}  // namespace distddp
