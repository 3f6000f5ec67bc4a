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

#include <cmath>
#include <functional>
#include <map>
#include <numbers>

#include "distddp/errors.hpp"
#include "distddp/scenario.hpp"

namespace distddp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Task constants of the builtin families.
namespace car {
constexpr double a_max = 10.0;
constexpr double omega_max = 30.0 * kPi / 180.0;
constexpr double v_max = 10.0;
constexpr double clearance = 0.3;
constexpr double d_col = 0.3;
constexpr double d_con = 2.0;
}  // namespace car
namespace drone {
constexpr double f_max = 30.0;
constexpr double d_col = 0.5;
constexpr double d_con = 2.0;
constexpr double gate_y = 1.0;
constexpr double gate_z = 0.5;
constexpr int gate_k1 = 30;
constexpr int gate_k2 = 100;
}  // namespace drone
namespace robot {
constexpr double wheel_radius = 0.016;
constexpr double axle_length = 0.11;
constexpr double wheel_speed_max = 12.5;
constexpr double clearance = 0.15;
constexpr double d_col = 0.2;
constexpr double d_con = 0.5;
}  // namespace robot

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

BoxConfig box(const std::string& target, std::vector<int> indices, Vector lower, Vector upper) {
  BoxConfig b;
  b.target = target;
  b.indices = std::move(indices);
  b.lower = std::move(lower);
  b.upper = std::move(upper);
  return b;
}

Matrix wheel_map() {
  Matrix C(2, 2);
  C << 2.0, robot::axle_length, 2.0, -robot::axle_length;
  return C / (2.0 * robot::wheel_radius);
}

ScenarioConfig car_task(const std::string& family, double field) {
  ScenarioConfig c;
  c.name = family;
  c.family = family;
  c.dynamics.kind = "car";
  c.dynamics.dt = 0.02;
  c.horizon = 150;
  c.position_dim = 2;
  c.q = vec({30, 30, 0, 6});
  c.r = vec({0.5, 0.5});
  c.qf = vec({100, 100, 0, 100});
  c.boxes.push_back(box("control", {0, 1}, vec({-car::a_max, -car::omega_max}), vec({car::a_max, car::omega_max})));
  c.boxes.push_back(box("state", {0, 1}, vec({-field, -field}), vec({field, field})));
  c.boxes.push_back(box("state", {3}, vec({-car::v_max}), vec({car::v_max})));
  c.collision_distance = car::d_col;
  c.connectivity_distance = car::d_con;
  c.solver.kind = "md-ddp";
  c.solver.admm_iterations = 200;
  return c;
}

// Dense desk-scale tasks leave the Step-1 trajectories a few centimeters short of the
// safe copies after a few hundred iterations with the default car tuning, so they use
// stiffer consensus penalties and a longer budget.
void stiff_consensus(ScenarioConfig& c, double state_scale) {
  c.solver.c1 = 8.0;
  c.solver.c2 = state_scale;
  c.solver.c3 = state_scale;
  c.solver.admm_iterations = 300;
}

AgentConfig car_agent(double x, double y, double heading, double gx, double gy, double speed = 0.0) {
  return {vec({x, y, heading, speed}), vec({gx, gy, 0.0, 0.0}), {}};
}

ScenarioConfig swap2(const BuiltinOptions&) {
  auto c = car_task("swap2", 5.0);
  c.agents.push_back(car_agent(-0.9, 0.1, 0.0, 0.9, 0.1));
  c.agents.push_back(car_agent(0.9, -0.1, kPi, -0.9, -0.1));
  c.graph.kind = "all";
  return c;
}

// Cars on the corners of a square drive to the opposite corner. Every path is shifted
// sideways by the same amount so that opposite cars pass on parallel lines.
ScenarioConfig swap4(const BuiltinOptions&) {
  auto c = car_task("swap4", 5.0);
  const double r = 0.85, shift = 0.15;
  for (int i = 0; i < 4; ++i) {
    const double a = kPi / 4.0 + i * kPi / 2.0;
    const Eigen::Vector2d dir(std::cos(a), std::sin(a));
    const Eigen::Vector2d side(-dir.y(), dir.x());
    const Eigen::Vector2d start = r * dir + shift * side, goal = -r * dir + shift * side;
    c.agents.push_back(car_agent(start.x(), start.y(), a + kPi, goal.x(), goal.y()));
  }
  c.graph.kind = "all";
  return c;
}

// Cars on a circle swap with the diametrically opposite car around a central obstacle.
// Goals are rotated slightly so every car leaves the obstacle on the same side.
ScenarioConfig circle_swap(const BuiltinOptions& o) {
  const int M = o.agents > 0 ? o.agents : 24;
  auto c = car_task("swap24", 6.0);
  c.name = "swap" + std::to_string(M);
  const double radius = 3.5, twist = 0.25;
  for (int i = 0; i < M; ++i) {
    const double a = 2.0 * kPi * i / M;
    const double g = a + kPi + twist;
    c.agents.push_back(car_agent(radius * std::cos(a), radius * std::sin(a), a + kPi,
                                 radius * std::cos(g), radius * std::sin(g)));
  }
  c.obstacles.push_back({vec({0.0, 0.0}), 0.5, car::clearance});
  c.graph.kind = "k_nearest";
  c.graph.size = std::min(M, o.neighbors > 0 ? o.neighbors : 5);
  stiff_consensus(c, 300.0);
  return c;
}

// Four groups of cars drive straight through a four-way intersection and keep to
// their lanes (right-hand traffic, lanes 1 m wide).
ScenarioConfig intersection(const BuiltinOptions& o) {
  const int per_group = o.agents > 0 ? std::max(1, o.agents / 4) : 4;
  auto c = car_task("intersection16", 10.0);
  c.name = "intersection" + std::to_string(4 * per_group);
  c.connectivity_distance = 0.0;  // every car is a neighbor of every other car
  const double speed = 3.0, spacing = 1.0, first = 2.0, travel = 6.0;
  for (int g = 0; g < 4; ++g) {
    const double heading = g * kPi / 2.0;
    const Eigen::Vector2d dir(std::cos(heading), std::sin(heading));
    const Eigen::Vector2d right(dir.y(), -dir.x());
    const int lateral = std::abs(dir.x()) > 0.5 ? 1 : 0;  // component held by the lane box
    for (int j = 0; j < per_group; ++j) {
      const Eigen::Vector2d start = -(first + spacing * j) * dir + 0.5 * right;
      const Eigen::Vector2d goal = start + travel * dir;
      AgentConfig a = car_agent(start.x(), start.y(), heading, goal.x(), goal.y(), speed);
      const double lane_center = start(lateral);
      a.boxes.push_back(box("state", {lateral}, vec({lane_center - 0.5}), vec({lane_center + 0.5})));
      c.agents.push_back(std::move(a));
    }
  }
  c.graph.kind = "all";
  stiff_consensus(c, 300.0);
  return c;
}

// Two columns of cars pass a gap between two round obstacles.
ScenarioConfig bottleneck(const BuiltinOptions& o) {
  const int M = o.agents > 0 ? o.agents : 8;
  auto c = car_task("bottleneck8", 6.0);
  c.name = "bottleneck" + std::to_string(M);
  c.horizon = 200;
  const int rows = (M + 1) / 2;
  const double spacing = 0.6;
  for (int i = 0; i < M; ++i) {
    const int col = i % 2, row = i / 2;
    const double y = (row - 0.5 * (rows - 1)) * spacing;
    const double x = -4.0 - 0.8 * col;
    c.agents.push_back(car_agent(x, y, 0.0, -x, y));
  }
  // Car centers fit through |y| <= 0.4 at x = 0.
  c.obstacles.push_back({vec({0.0, 1.6}), 0.9, car::clearance});
  c.obstacles.push_back({vec({0.0, -1.6}), 0.9, car::clearance});
  c.graph.kind = "k_nearest";
  // Cars in the two columns overtake each other in the gap, so every car needs every
  // other car as a neighbor at this size.
  c.graph.size = std::min(M, o.neighbors > 0 ? o.neighbors : 8);
  stiff_consensus(c, 300.0);
  return c;
}

// A square grid of cars moves to a grid on the other side of a few obstacles.
ScenarioConfig formation(const BuiltinOptions& o) {
  const int M = o.agents > 0 ? o.agents : 16;
  auto c = car_task("formation", 8.0);
  c.name = "formation" + std::to_string(M);
  const int rows = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(M))));
  const int cols = (M + rows - 1) / rows;
  const double spacing = 0.8, shift = 8.0;
  for (int i = 0; i < M; ++i) {
    const int row = i % rows, col = i / rows;
    const double y = (row - 0.5 * (rows - 1)) * spacing;
    const double x = -0.5 * shift - (col - 0.5 * (cols - 1)) * spacing;
    c.agents.push_back(car_agent(x, y, 0.0, x + shift, y));
  }
  c.obstacles.push_back({vec({0.0, 0.0}), 0.3, car::clearance});
  c.obstacles.push_back({vec({0.0, 2.2}), 0.3, car::clearance});
  c.obstacles.push_back({vec({0.0, -2.2}), 0.3, car::clearance});
  c.graph.kind = "k_nearest";
  c.graph.size = std::min(M, o.neighbors > 0 ? o.neighbors : 5);
  return c;
}

// Drones fly from one side of a gate to the other and must be inside its opening
// during a fixed window of steps.
ScenarioConfig gate(const BuiltinOptions& o) {
  const int M = o.agents > 0 ? o.agents : 4;
  ScenarioConfig c;
  c.family = "gate";
  c.name = "gate" + std::to_string(M);
  c.dynamics.kind = "quadrotor";
  c.dynamics.dt = 0.02;
  c.horizon = 150;
  c.position_dim = 3;
  c.q = Vector::Constant(12, 50.0);
  c.q.head(3).setConstant(150.0);
  c.r = Vector::Ones(4);
  c.qf = c.q;
  c.control_reference = Vector::Constant(4, c.dynamics.quadrotor.hover_thrust());
  c.boxes.push_back(box("control", {0, 1, 2, 3}, Vector::Zero(4), Vector::Constant(4, drone::f_max)));
  c.boxes.push_back(box("state", {0, 1, 2}, Vector::Constant(3, -5.0), Vector::Constant(3, 5.0)));
  BoxConfig window = box("state", {1, 2}, vec({-drone::gate_y, -drone::gate_z}), vec({drone::gate_y, drone::gate_z}));
  window.window_start = drone::gate_k1;
  window.window_end = drone::gate_k2;
  c.boxes.push_back(window);
  for (int i = 0; i < M; ++i) {
    const double y = (i % 2 == 0 ? -0.6 : 0.6);
    const double z = 0.8 * (i / 2);
    Vector x0 = Vector::Zero(12), goal = Vector::Zero(12);
    x0.head(3) << -2.5, y, z;
    goal.head(3) << 2.5, y, z;
    c.agents.push_back({x0, goal, {}});
  }
  c.collision_distance = drone::d_col;
  c.connectivity_distance = drone::d_con;
  c.graph.kind = "k_nearest";
  c.graph.size = std::min(M, o.neighbors > 0 ? o.neighbors : 4);
  c.solver.kind = "md-ddp";
  stiff_consensus(c, 100.0);
  return c;
}

// Differential-drive robots on a circle trade places with the robot opposite them while
// keeping their ring neighbors in communication range and avoiding a post in the middle.
ScenarioConfig unicycle_swap(const BuiltinOptions& o) {
  const int M = o.agents > 0 ? o.agents : 6;
  ScenarioConfig c;
  c.family = "unicycle_swap";
  c.name = "unicycle_swap" + std::to_string(M);
  c.dynamics.kind = "unicycle";
  c.dynamics.dt = 0.033;
  c.horizon = 300;
  c.position_dim = 2;
  c.q = vec({100, 100, 0});
  c.r = vec({100, 10});
  c.qf = vec({300, 300, 30});
  BoxConfig wheels = box("control", {0, 1}, Vector::Constant(2, -robot::wheel_speed_max),
                         Vector::Constant(2, robot::wheel_speed_max));
  wheels.map = wheel_map();
  c.boxes.push_back(wheels);
  c.boxes.push_back(box("state", {0, 1}, vec({-1.6, -1.0}), vec({1.6, 1.0})));
  // Ring spacing equals the radius for six robots, inside the communication range.
  const double radius = 0.45, twist = 0.25;
  for (int i = 0; i < M; ++i) {
    const double a = 2.0 * kPi * i / M;
    const double g = a + kPi + twist;
    c.agents.push_back({vec({radius * std::cos(a), radius * std::sin(a), a + 0.5 * kPi}),
                        vec({radius * std::cos(g), radius * std::sin(g), g + 0.5 * kPi}), {}});
  }
  c.obstacles.push_back({vec({0.0, 0.0}), 0.05, robot::clearance});
  c.collision_distance = robot::d_col;
  c.connectivity_distance = robot::d_con;
  c.graph.kind = "k_nearest";
  c.graph.size = std::min(M, o.neighbors > 0 ? o.neighbors : 3);
  c.solver.kind = "md-ddp";
  c.solver.admm_iterations = 200;
  return c;
}

using Generator = std::function<ScenarioConfig(const BuiltinOptions&)>;

const std::map<std::string, Generator>& generators() {
  static const std::map<std::string, Generator> g{
      {"swap2", swap2},           {"swap4", swap4},         {"swap24", circle_swap},
      {"intersection16", intersection}, {"bottleneck8", bottleneck}, {"formation", formation},
      {"gate", gate},             {"unicycle_swap", unicycle_swap}};
  return g;
}

const BoxConfig* find_box(const ScenarioConfig& c, const std::string& target, const std::vector<int>& indices) {
  for (const auto& b : c.boxes)
    if (b.target == target && b.indices == indices) return &b;
  return nullptr;
}

void expect_box(const ScenarioConfig& c, const std::string& target, const std::vector<int>& indices,
                const Vector& lower, const Vector& upper, std::vector<std::string>& out,
                const std::string& what) {
  const BoxConfig* b = find_box(c, target, indices);
  if (!b || b->lower.size() != lower.size() || b->upper.size() != upper.size() ||
      !b->lower.isApprox(lower, 1e-12) || !b->upper.isApprox(upper, 1e-12))
    out.push_back(c.family + ": " + what + " differs from the task definition");
}

void expect_value(double actual, double expected, const std::string& family, const std::string& what,
                  std::vector<std::string>& out) {
  if (std::abs(actual - expected) > 1e-12)
    out.push_back(family + ": " + what + " is " + std::to_string(actual) + ", expected " + std::to_string(expected));
}

}  // namespace

std::vector<std::string> builtin_names() {
  std::vector<std::string> names;
  for (const auto& [name, g] : generators()) names.push_back(name);
  return names;
}

ScenarioConfig builtin_scenario(const std::string& name, const BuiltinOptions& options) {
  const auto it = generators().find(name);
  if (it == generators().end()) throw ConfigError({"unknown builtin scenario '" + name + "'"});
  ScenarioConfig c = it->second(options);
  c.seed = 1;
  if (auto p = validate_config(c); !p.empty()) throw ConfigError(p);
  return c;
}

std::vector<std::string> builtin_constant_mismatches(const ScenarioConfig& c) {
  std::vector<std::string> out;
  const std::string& f = c.family;
  if (f.empty()) return out;
  if (f == "swap2" || f == "swap4" || f == "swap24" || f == "intersection16" || f == "bottleneck8" ||
      f == "formation") {
    expect_box(c, "control", {0, 1}, vec({-car::a_max, -car::omega_max}), vec({car::a_max, car::omega_max}), out,
               "acceleration / turn-rate box");
    expect_box(c, "state", {3}, vec({-car::v_max}), vec({car::v_max}), out, "speed box");
    for (const auto& o : c.obstacles) expect_value(o.clearance, car::clearance, f, "obstacle clearance", out);
    expect_value(c.collision_distance, car::d_col, f, "collision distance", out);
    expect_value(c.connectivity_distance, f == "intersection16" ? 0.0 : car::d_con, f, "connectivity distance", out);
  } else if (f == "gate") {
    expect_box(c, "control", {0, 1, 2, 3}, Vector::Zero(4), Vector::Constant(4, drone::f_max), out, "rotor thrust box");
    const BoxConfig* w = find_box(c, "state", {1, 2});
    if (!w || w->window_start != drone::gate_k1 || w->window_end != drone::gate_k2 ||
        !w->lower.isApprox(vec({-drone::gate_y, -drone::gate_z})) || !w->upper.isApprox(vec({drone::gate_y, drone::gate_z})))
      out.push_back("gate: gate window differs from the task definition");
    expect_value(c.collision_distance, drone::d_col, f, "collision distance", out);
    expect_value(c.connectivity_distance, drone::d_con, f, "connectivity distance", out);
  } else if (f == "unicycle_swap") {
    const BoxConfig* b = find_box(c, "control", {0, 1});
    if (!b || !b->map || !b->map->isApprox(wheel_map()) ||
        !b->upper.isApprox(Vector::Constant(2, robot::wheel_speed_max)) ||
        !b->lower.isApprox(Vector::Constant(2, -robot::wheel_speed_max)))
      out.push_back("unicycle_swap: wheel-speed box differs from the task definition");
    for (const auto& o : c.obstacles) expect_value(o.clearance, robot::clearance, f, "obstacle clearance", out);
    expect_value(c.collision_distance, robot::d_col, f, "collision distance", out);
    expect_value(c.connectivity_distance, robot::d_con, f, "connectivity distance", out);
  } else {
    out.push_back("family: unknown builtin family '" + f + "'");
  }
  return out;
}

}  // namespace distddp
