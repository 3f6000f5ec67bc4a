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

#include "distddp/scenario.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "distddp/errors.hpp"

namespace distddp {

namespace {

using json = nlohmann::json;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Reads the keys of one JSON object, recording type errors and unknown keys as problems.
class Reader {
 public:
  Reader(const json& j, std::string path, std::vector<std::string>& problems)
      : j_(j), path_(std::move(path)), problems_(problems) {
    if (!j_.is_object()) problems_.push_back(where() + ": expected an object");
  }

  template <class T>
  void get(const std::string& key, T& out, bool required = false) {
    used_.insert(key);
    if (!j_.is_object() || !j_.contains(key)) {
      if (required) problems_.push_back(where(key) + ": required key missing");
      return;
    }
    try {
      convert(j_.at(key), out);
    } catch (const json::exception& e) {
      problems_.push_back(where(key) + ": " + e.what());
    }
  }

  /// Bounds are numbers or null, where null stands for an infinite bound of sign `sign`.
  void bounds(const std::string& key, Vector& out, double sign) {
    used_.insert(key);
    if (!j_.is_object() || !j_.contains(key)) return;
    const json& a = j_.at(key);
    if (!a.is_array()) {
      problems_.push_back(where(key) + ": expected an array");
      return;
    }
    out.resize(static_cast<Eigen::Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i].is_null()) out(i) = sign * kInf;
      else if (a[i].is_number()) out(i) = a[i].get<double>();
      else problems_.push_back(where(key) + ": bounds must be numbers or null");
    }
  }

  /// Calls fn(Reader) on every element of an array of objects.
  template <class Fn>
  void each(const std::string& key, Fn fn) {
    used_.insert(key);
    if (!j_.is_object() || !j_.contains(key)) return;
    const json& a = j_.at(key);
    if (!a.is_array()) {
      problems_.push_back(where(key) + ": expected an array");
      return;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
      Reader item(a[i], where(key) + "[" + std::to_string(i) + "]", problems_);
      fn(item);
      item.finish();
    }
  }

  Reader child(const std::string& key) {
    used_.insert(key);
    static const json empty = json::object();
    return Reader(j_.is_object() && j_.contains(key) ? j_.at(key) : empty, where(key), problems_);
  }

  [[nodiscard]] bool has(const std::string& key) const { return j_.is_object() && j_.contains(key); }
  [[nodiscard]] const json& raw() const { return j_; }
  [[nodiscard]] std::string where(const std::string& key = "") const {
    if (key.empty()) return path_.empty() ? "<root>" : path_;
    return path_.empty() ? key : path_ + "." + key;
  }
  std::vector<std::string>& problems() { return problems_; }

  void finish() {
    if (!j_.is_object()) return;
    for (const auto& [key, value] : j_.items())
      if (!used_.count(key)) problems_.push_back(where(key) + ": unknown key");
  }

 private:
  template <class T>
  static void convert(const json& j, T& out) {
    out = j.get<T>();
  }
  static void convert(const json& j, Vector& out) {
    const auto v = j.get<std::vector<double>>();
    out = Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
  }
  static void convert(const json& j, std::optional<double>& out) {
    if (j.is_null()) out.reset();
    else out = j.get<double>();
  }
  static void convert(const json& j, std::optional<Matrix>& out) {
    if (j.is_null()) {
      out.reset();
      return;
    }
    const auto rows = j.get<std::vector<std::vector<double>>>();
    Matrix m(static_cast<Eigen::Index>(rows.size()), rows.empty() ? 0 : static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (static_cast<Eigen::Index>(rows[r].size()) != m.cols())
        throw json::type_error::create(302, "matrix rows differ in length", &j);
      for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
    }
    out = m;
  }
  template <class T, std::size_t N>
  static void convert(const json& j, std::array<T, N>& out) {
    const auto v = j.get<std::vector<T>>();
    if (v.size() != N) throw json::type_error::create(302, "expected " + std::to_string(N) + " entries", &j);
    std::copy(v.begin(), v.end(), out.begin());
  }

  const json& j_;
  std::string path_;
  std::vector<std::string>& problems_;
  std::set<std::string> used_;
};

json vec(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json bound_vec(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    a.push_back(std::isfinite(v(i)) ? json(v(i)) : json(nullptr));
  return a;
}

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

void read_adaptation(Reader r, AdaptationSettings& a) {
  r.get("enabled", a.enabled);
  r.get("every", a.every);
  r.get("increase", a.increase);
  r.get("decrease", a.decrease);
  r.get("sigma_increase", a.sigma_increase);
  r.get("sigma_decrease", a.sigma_decrease);
  r.get("scale_min", a.scale_min);
  r.get("scale_max", a.scale_max);
  r.finish();
}

void read_stop(Reader r, StopSettings& s) {
  r.get("enabled", s.enabled);
  r.get("primal", s.primal);
  r.get("dual", s.dual);
  r.finish();
}

BoxConfig read_box(Reader& b) {
  BoxConfig box;
  b.get("target", box.target);
  b.get("indices", box.indices, true);
  b.bounds("lower", box.lower, -1.0);
  b.bounds("upper", box.upper, 1.0);
  b.get("map", box.map);
  b.get("window_start", box.window_start);
  b.get("window_end", box.window_end);
  return box;
}

json box_json(const BoxConfig& b) {
  json m = nullptr;
  if (b.map) {
    m = json::array();
    for (Eigen::Index r = 0; r < b.map->rows(); ++r) m.push_back(vec(b.map->row(r).transpose()));
  }
  return {{"target", b.target},       {"indices", b.indices},
          {"lower", bound_vec(b.lower)}, {"upper", bound_vec(b.upper)},
          {"map", m},                  {"window_start", b.window_start},
          {"window_end", b.window_end}};
}

ScenarioConfig from_json(const json& root) {
  std::vector<std::string> problems;
  ScenarioConfig c;
  Reader r(root, "", problems);
  r.get("name", c.name);
  r.get("family", c.family);
  r.get("seed", c.seed, true);
  r.get("horizon", c.horizon);
  r.get("position_dim", c.position_dim);
  r.get("q", c.q, true);
  r.get("r", c.r, true);
  r.get("qf", c.qf, true);
  r.get("control_reference", c.control_reference);
  r.get("collision_distance", c.collision_distance);
  r.get("connectivity_distance", c.connectivity_distance);
  {
    Reader d = r.child("dynamics");
    d.get("kind", c.dynamics.kind);
    d.get("dt", c.dynamics.dt);
    Reader q = d.child("quadrotor");
    q.get("mass", c.dynamics.quadrotor.mass);
    Vector inertia = c.dynamics.quadrotor.inertia;
    q.get("inertia", inertia);
    if (inertia.size() == 3) c.dynamics.quadrotor.inertia = inertia;
    else problems.push_back("dynamics.quadrotor.inertia: expected 3 entries");
    q.get("arm_length", c.dynamics.quadrotor.arm_length);
    q.get("torque_coefficient", c.dynamics.quadrotor.torque_coefficient);
    q.get("gravity", c.dynamics.quadrotor.gravity);
    q.finish();
    d.finish();
  }
  r.each("agents", [&](Reader& a) {
    AgentConfig agent;
    a.get("initial_state", agent.initial_state, true);
    a.get("goal", agent.goal, true);
    a.each("boxes", [&](Reader& b) { agent.boxes.push_back(read_box(b)); });
    c.agents.push_back(std::move(agent));
  });
  r.each("boxes", [&](Reader& b) { c.boxes.push_back(read_box(b)); });
  r.each("obstacles", [&](Reader& o) {
    ObstacleConfig obs;
    o.get("center", obs.center, true);
    o.get("radius", obs.radius, true);
    o.get("clearance", obs.clearance);
    c.obstacles.push_back(std::move(obs));
  });
  {
    Reader g = r.child("graph");
    g.get("kind", c.graph.kind);
    g.get("radius", c.graph.radius);
    g.get("size", c.graph.size);
    g.get("adjacency", c.graph.adjacency);
    g.finish();
  }
  {
    Reader s = r.child("solver");
    auto& v = c.solver;
    s.get("kind", v.kind);
    s.get("admm_iterations", v.admm_iterations);
    s.get("al_iterations", v.al_iterations);
    s.get("ddp_iterations", v.ddp_iterations);
    s.get("al_tolerance", v.al_tolerance);
    s.get("al_penalty_initial", v.al_penalty_initial);
    s.get("c1", v.c1);
    s.get("c2", v.c2);
    s.get("c3", v.c3);
    s.get("uniform_tau", v.uniform_tau);
    s.get("uniform_rho", v.uniform_rho);
    s.get("uniform_mu", v.uniform_mu);
    s.get("penalty_floor", v.penalty_floor);
    s.get("penalty_mode", v.penalty_mode);
    s.get("nesterov_eta", v.nesterov_eta);
    s.get("nesterov_restart", v.nesterov_restart);
    read_adaptation(s.child("adaptation"), v.adaptation);
    read_stop(s.child("stop"), v.stop);
    s.get("reset_multipliers", v.reset_multipliers);
    s.get("workers", v.workers);
    s.finish();
  }
  r.finish();
  if (!problems.empty()) throw ConfigError(problems);
  return c;
}

json to_json(const ScenarioConfig& c) {
  json j;
  j["name"] = c.name;
  j["family"] = c.family;
  j["seed"] = c.seed;
  j["dynamics"] = {{"kind", c.dynamics.kind},
                   {"dt", c.dynamics.dt},
                   {"quadrotor",
                    {{"mass", c.dynamics.quadrotor.mass},
                     {"inertia", vec(c.dynamics.quadrotor.inertia)},
                     {"arm_length", c.dynamics.quadrotor.arm_length},
                     {"torque_coefficient", c.dynamics.quadrotor.torque_coefficient},
                     {"gravity", c.dynamics.quadrotor.gravity}}}};
  j["horizon"] = c.horizon;
  j["position_dim"] = c.position_dim;
  j["q"] = vec(c.q);
  j["r"] = vec(c.r);
  j["qf"] = vec(c.qf);
  j["control_reference"] = vec(c.control_reference);
  j["agents"] = json::array();
  for (const auto& a : c.agents) {
    json boxes = json::array();
    for (const auto& b : a.boxes) boxes.push_back(box_json(b));
    j["agents"].push_back({{"initial_state", vec(a.initial_state)}, {"goal", vec(a.goal)}, {"boxes", boxes}});
  }
  j["boxes"] = json::array();
  for (const auto& b : c.boxes) j["boxes"].push_back(box_json(b));
  j["obstacles"] = json::array();
  for (const auto& o : c.obstacles)
    j["obstacles"].push_back({{"center", vec(o.center)}, {"radius", o.radius}, {"clearance", o.clearance}});
  j["collision_distance"] = c.collision_distance;
  j["connectivity_distance"] = c.connectivity_distance;
  j["graph"] = {{"kind", c.graph.kind}, {"radius", c.graph.radius}, {"size", c.graph.size},
                {"adjacency", c.graph.adjacency}};
  const auto& s = c.solver;
  j["solver"] = {
      {"kind", s.kind},
      {"admm_iterations", s.admm_iterations},
      {"al_iterations", s.al_iterations},
      {"ddp_iterations", s.ddp_iterations},
      {"al_tolerance", s.al_tolerance},
      {"al_penalty_initial", s.al_penalty_initial},
      {"c1", s.c1},
      {"c2", s.c2},
      {"c3", s.c3},
      {"uniform_tau", opt(s.uniform_tau)},
      {"uniform_rho", opt(s.uniform_rho)},
      {"uniform_mu", opt(s.uniform_mu)},
      {"penalty_floor", s.penalty_floor},
      {"penalty_mode", s.penalty_mode},
      {"nesterov_eta", s.nesterov_eta},
      {"nesterov_restart", s.nesterov_restart},
      {"adaptation",
       {{"enabled", s.adaptation.enabled},
        {"every", s.adaptation.every},
        {"increase", s.adaptation.increase},
        {"decrease", s.adaptation.decrease},
        {"sigma_increase", s.adaptation.sigma_increase},
        {"sigma_decrease", s.adaptation.sigma_decrease},
        {"scale_min", s.adaptation.scale_min},
        {"scale_max", s.adaptation.scale_max}}},
      {"stop", {{"enabled", s.stop.enabled}, {"primal", s.stop.primal}, {"dual", s.stop.dual}}},
      {"reset_multipliers", s.reset_multipliers},
      {"workers", s.workers}};
  return j;
}

void apply_override(json& root, const std::string& assignment, std::vector<std::string>& problems) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    problems.push_back("override '" + assignment + "': expected key=value");
    return;
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  json* node = &root;
  std::stringstream parts(key);
  std::string part;
  std::vector<std::string> path;
  while (std::getline(parts, part, '.')) path.push_back(part);
  for (std::size_t i = 0; i < path.size(); ++i) {
    const bool last = i + 1 == path.size();
    if (node->is_array()) {
      std::size_t idx = 0;
      try {
        idx = std::stoul(path[i]);
      } catch (const std::exception&) {
        problems.push_back("override '" + key + "': '" + path[i] + "' is not an array index");
        return;
      }
      if (idx >= node->size()) {
        problems.push_back("override '" + key + "': index " + path[i] + " out of range");
        return;
      }
      node = &(*node)[idx];
    } else if (node->is_object() || node->is_null()) {
      node = &(*node)[path[i]];
    } else {
      problems.push_back("override '" + key + "': '" + path[i - 1] + "' is not an object");
      return;
    }
    if (last) *node = value;
  }
}

std::pair<int, int> line_and_column(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

ScenarioConfig parse_config(const std::string& text, const std::vector<std::string>& overrides,
                            const std::string& source) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_and_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ConfigError({source + ":" + std::to_string(line) + ":" + std::to_string(col) +
                       ": malformed JSON (" + e.what() + ")"});
  }
  std::vector<std::string> problems;
  for (const auto& o : overrides) apply_override(root, o, problems);
  if (!problems.empty()) throw ConfigError(problems);
  ScenarioConfig cfg = from_json(root);
  problems = validate_config(cfg);
  if (!problems.empty()) throw ConfigError(problems);
  return cfg;
}

ScenarioConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError({path + ": cannot open file"});
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), overrides, path);
}

std::string write_config(const ScenarioConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

std::vector<std::string> validate_config(const ScenarioConfig& c) {
  std::vector<std::string> p;
  int sdim = 0, cdim = 0;
  if (c.dynamics.kind == "car") {
    sdim = 4;
    cdim = 2;
  } else if (c.dynamics.kind == "unicycle") {
    sdim = 3;
    cdim = 2;
  } else if (c.dynamics.kind == "quadrotor") {
    sdim = 12;
    cdim = 4;
    try {
      c.dynamics.quadrotor.validate();
    } catch (const std::exception& e) {
      p.push_back(std::string("dynamics.quadrotor: ") + e.what());
    }
  } else {
    p.push_back("dynamics.kind: unknown model '" + c.dynamics.kind + "'");
  }
  if (!(c.dynamics.dt > 0.0)) p.push_back("dynamics.dt: must be positive");
  if (c.horizon < 1) p.push_back("horizon: must be at least 1");
  if (c.position_dim != 2 && c.position_dim != 3) p.push_back("position_dim: must be 2 or 3");
  if (sdim > 0 && c.position_dim > sdim) p.push_back("position_dim: exceeds the state dimension");
  if (sdim > 0) {
    if (c.q.size() != sdim) p.push_back("q: expected " + std::to_string(sdim) + " entries");
    if (c.qf.size() != sdim) p.push_back("qf: expected " + std::to_string(sdim) + " entries");
    if (c.r.size() != cdim) p.push_back("r: expected " + std::to_string(cdim) + " entries");
    if (c.control_reference.size() != 0 && c.control_reference.size() != cdim)
      p.push_back("control_reference: expected " + std::to_string(cdim) + " entries or none");
  }
  if ((c.q.array() < 0).any() || (c.qf.array() < 0).any()) p.push_back("q, qf: weights must be non-negative");
  if ((c.r.array() <= 0).any()) p.push_back("r: weights must be positive");
  if (c.agents.empty()) p.push_back("agents: at least one agent is required");
  for (std::size_t i = 0; i < c.agents.size(); ++i) {
    const auto& a = c.agents[i];
    const std::string at = "agents[" + std::to_string(i) + "]";
    if (sdim > 0 && a.initial_state.size() != sdim) p.push_back(at + ".initial_state: expected " + std::to_string(sdim) + " entries");
    if (sdim > 0 && a.goal.size() != sdim) p.push_back(at + ".goal: expected " + std::to_string(sdim) + " entries");
    if (!a.initial_state.allFinite() || !a.goal.allFinite()) p.push_back(at + ": non-finite entries");
  }
  auto check_box = [&](const BoxConfig& b, const std::string& at) {
    const int dim = b.target == "state" ? sdim : b.target == "control" ? cdim : -1;
    if (dim < 0) p.push_back(at + ".target: must be state or control");
    if (b.indices.empty()) p.push_back(at + ".indices: empty");
    for (int idx : b.indices)
      if (dim >= 0 && (idx < 0 || idx >= dim)) p.push_back(at + ".indices: " + std::to_string(idx) + " out of range");
    const auto rows = b.map ? b.map->rows() : static_cast<Eigen::Index>(b.indices.size());
    if (b.map && b.map->cols() != static_cast<Eigen::Index>(b.indices.size()))
      p.push_back(at + ".map: needs one column per index");
    if (b.lower.size() != rows || b.upper.size() != rows) {
      p.push_back(at + ": lower/upper need " + std::to_string(rows) + " entries");
    } else if ((b.lower.array() > b.upper.array()).any()) {
      p.push_back(at + ": lower exceeds upper");
    }
    if (b.window_start < 0) p.push_back(at + ".window_start: negative");
    if (b.window_end >= 0 && b.window_end < b.window_start) p.push_back(at + ": window ends before it starts");
  };
  for (std::size_t i = 0; i < c.boxes.size(); ++i) check_box(c.boxes[i], "boxes[" + std::to_string(i) + "]");
  for (std::size_t i = 0; i < c.agents.size(); ++i)
    for (std::size_t b = 0; b < c.agents[i].boxes.size(); ++b)
      check_box(c.agents[i].boxes[b], "agents[" + std::to_string(i) + "].boxes[" + std::to_string(b) + "]");
  for (std::size_t i = 0; i < c.obstacles.size(); ++i) {
    const auto& o = c.obstacles[i];
    const std::string at = "obstacles[" + std::to_string(i) + "]";
    if (o.center.size() != c.position_dim) p.push_back(at + ".center: expected position_dim entries");
    if (o.radius < 0 || o.clearance < 0) p.push_back(at + ": radius and clearance must be non-negative");
  }
  if (c.collision_distance < 0) p.push_back("collision_distance: negative");
  if (c.connectivity_distance < 0) p.push_back("connectivity_distance: negative");
  if (c.collision_distance > 0 && c.connectivity_distance > 0 && c.collision_distance >= c.connectivity_distance)
    p.push_back("collision_distance: must be smaller than connectivity_distance");
  const int M = static_cast<int>(c.agents.size());
  const auto& g = c.graph;
  if (g.kind == "radius") {
    if (!(g.radius > 0)) p.push_back("graph.radius: must be positive");
  } else if (g.kind == "k_nearest") {
    if (g.size < 1 || g.size > M) p.push_back("graph.size: must lie in [1, number of agents]");
  } else if (g.kind == "explicit") {
    if (static_cast<int>(g.adjacency.size()) != M) p.push_back("graph.adjacency: one list per agent required");
    for (const auto& row : g.adjacency)
      for (int j : row)
        if (j < 0 || j >= M) p.push_back("graph.adjacency: agent id " + std::to_string(j) + " out of range");
  } else if (g.kind != "all") {
    p.push_back("graph.kind: unknown kind '" + g.kind + "'");
  }
  const auto& s = c.solver;
  if (s.kind != "md-ddp" && s.kind != "nd-ddp" && s.kind != "centralized")
    p.push_back("solver.kind: must be md-ddp, nd-ddp or centralized");
  if (s.admm_iterations < 1 || s.al_iterations < 1 || s.ddp_iterations < 1)
    p.push_back("solver: iteration budgets must be positive");
  if (!(s.al_tolerance > 0) || !(s.al_penalty_initial > 0)) p.push_back("solver: AL tolerance and penalty must be positive");
  if (!(s.c1 > 0 && s.c2 > 0 && s.c3 > 0)) p.push_back("solver: c1, c2, c3 must be positive");
  for (const auto& u : {s.uniform_tau, s.uniform_rho, s.uniform_mu})
    if (u && !(*u > 0)) p.push_back("solver: uniform penalties must be positive");
  if (!(s.penalty_floor > 0)) p.push_back("solver.penalty_floor: must be positive");
  if (s.penalty_mode != "matrix" && s.penalty_mode != "scalar") p.push_back("solver.penalty_mode: must be matrix or scalar");
  if (!(s.nesterov_eta >= 0 && s.nesterov_eta < 1)) p.push_back("solver.nesterov_eta: must lie in [0, 1)");
  try {
    s.adaptation.validate();
  } catch (const std::exception& e) {
    p.push_back(std::string("solver.adaptation: ") + e.what());
  }
  if (s.workers < 1) p.push_back("solver.workers: must be positive");
  for (auto& m : builtin_constant_mismatches(c)) p.push_back(std::move(m));

  // Initial configuration against the pairwise limits is a property of the task, not a
  // parse problem, and is left to the solvers.
  return p;
}

DynamicsPtr build_dynamics(const DynamicsConfig& d) {
  if (d.kind == "car") return std::make_shared<DubinsCar>(d.dt);
  if (d.kind == "unicycle") return std::make_shared<Unicycle>(d.dt);
  if (d.kind == "quadrotor") return std::make_shared<Quadrotor>(d.dt, d.quadrotor);
  throw ConfigError({"dynamics.kind: unknown model '" + d.kind + "'"});
}

NeighborhoodGraph build_graph(const ScenarioConfig& c) {
  const int M = static_cast<int>(c.agents.size());
  std::vector<Vector> positions;
  for (const auto& a : c.agents) positions.push_back(a.initial_state.head(c.position_dim));
  if (c.graph.kind == "all") return NeighborhoodGraph::complete(M);
  if (c.graph.kind == "radius") return NeighborhoodGraph::from_positions(positions, c.graph.radius, c.graph.size);
  if (c.graph.kind == "k_nearest") return NeighborhoodGraph::k_nearest(positions, c.graph.size);
  return NeighborhoodGraph::from_adjacency(c.graph.adjacency);
}

MultiAgentProblem build_problem(const ScenarioConfig& c) {
  if (auto p = validate_config(c); !p.empty()) throw ConfigError(p);
  MultiAgentProblem problem;
  problem.horizon = c.horizon;
  problem.collision_distance = c.collision_distance;
  problem.connectivity_distance = c.connectivity_distance;
  problem.graph = build_graph(c);
  const DynamicsPtr dyn = build_dynamics(c.dynamics);
  for (const auto& a : c.agents) {
    AgentSpec spec;
    spec.dynamics = dyn;
    spec.cost = QuadraticCost::diagonal(c.q, c.r, c.qf, a.goal, c.control_reference);
    spec.initial_state = a.initial_state;
    spec.position_dim = c.position_dim;
    std::vector<BoxConfig> boxes = c.boxes;
    boxes.insert(boxes.end(), a.boxes.begin(), a.boxes.end());
    for (const auto& b : boxes) {
      Window w;
      w.start = b.window_start;
      if (b.window_end >= 0) w.end = b.window_end;
      auto box = std::make_shared<BoxConstraint>(
          b.target == "state" ? BoxConstraint::Target::State : BoxConstraint::Target::Control, b.indices,
          b.lower, b.upper, b.map, w);
      (b.target == "state" ? spec.state_boxes : spec.control_boxes).push_back(box);
    }
    for (const auto& o : c.obstacles)
      spec.obstacles.push_back(std::make_shared<ObstacleConstraint>(0, o.center, o.radius, o.clearance));
    problem.agents.push_back(std::move(spec));
  }
  problem.validate();
  return problem;
}

namespace {

DdpSettings ddp_settings(const ScenarioConfig& c) {
  DdpSettings d;
  d.max_iterations = c.solver.ddp_iterations;
  return d;
}

AlSettings al_settings(const ScenarioConfig& c) {
  AlSettings a;
  a.max_outer = c.solver.al_iterations;
  a.tolerance = c.solver.al_tolerance;
  a.penalty_initial = c.solver.al_penalty_initial;
  return a;
}

}  // namespace

MdSettings md_settings(const ScenarioConfig& c) {
  const auto& s = c.solver;
  MdSettings m;
  m.max_iterations = s.admm_iterations;
  m.ddp = ddp_settings(c);
  m.control_penalty_scale = s.c1;
  m.state_penalty_scale = s.c2;
  m.consensus_penalty_scale = s.c3;
  m.uniform_control_penalty = s.uniform_tau;
  m.uniform_state_penalty = s.uniform_rho;
  m.uniform_consensus_penalty = s.uniform_mu;
  m.penalty_floor = s.penalty_floor;
  m.mode = parse_penalty_mode(s.penalty_mode);
  m.nesterov_eta = s.nesterov_eta;
  m.nesterov_restart = s.nesterov_restart;
  m.adaptation = s.adaptation;
  m.stop = s.stop;
  m.workers = s.workers;
  return m;
}

NdSettings nd_settings(const ScenarioConfig& c) {
  const auto& s = c.solver;
  NdSettings n;
  n.max_iterations = s.admm_iterations;
  n.ddp = ddp_settings(c);
  n.al = al_settings(c);
  n.state_penalty_scale = s.c2;
  n.control_penalty_scale = s.c1;
  n.uniform_state_penalty = s.uniform_rho;
  n.uniform_control_penalty = s.uniform_mu;
  n.penalty_floor = s.penalty_floor;
  n.mode = parse_penalty_mode(s.penalty_mode);
  n.reset_multipliers = s.reset_multipliers;
  n.adaptation = s.adaptation;
  n.workers = s.workers;
  return n;
}

CentralizedSettings centralized_settings(const ScenarioConfig& c) {
  CentralizedSettings s;
  s.ddp = ddp_settings(c);
  s.al = al_settings(c);
  return s;
}

}  // namespace distddp
