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

#include <array>
#include <string>
#include <vector>

#include "distddp/ddp.hpp"
#include "distddp/trajectory.hpp"

namespace distddp {

/// How the owner averages the copies of its trajectory.
/// Scalar: z = (sum W_j)^-1 sum (W_j c_j + d_j), the dual-corrected average.
/// Matrix: z = (sum W_j)^-1 sum W_j c_j, the weighted form without dual terms.
enum class PenaltyMode { Scalar, Matrix };

PenaltyMode parse_penalty_mode(const std::string& s);
std::string to_string(PenaltyMode mode);

/// Per-component average of copies of one vector. `duals` may be empty.
Vector consensus_average(const std::vector<Vector>& copies, const std::vector<Vector>& weights,
                         const std::vector<Vector>& duals, PenaltyMode mode);

/// v + gamma (v - previous), copying v exactly when gamma is zero.
Vector extrapolate(const Vector& v, const Vector& previous, double gamma);
std::vector<Vector> extrapolate(const std::vector<Vector>& v, const std::vector<Vector>& previous,
                                double gamma);

/// d += W (a - b) for every step.
void dual_ascent(std::vector<Vector>& dual, const std::vector<Vector>& base, const Vector& weight,
                 const std::vector<Vector>& a, const std::vector<Vector>& b);

/// Momentum schedule: alpha_1 = 1, alpha_{n+1} = (1 + sqrt(1 + 4 alpha_n^2)) / 2 and
/// gamma_n = eta (alpha_n - 1) / alpha_{n+1}.
class NesterovSequence {
 public:
  explicit NesterovSequence(double eta = 0.0);
  [[nodiscard]] double eta() const { return eta_; }
  [[nodiscard]] double alpha() const { return alpha_; }
  /// gamma_n for the current n, without advancing.
  [[nodiscard]] double gamma() const;
  /// Returns gamma_n and moves to n + 1.
  double advance();
  void restart() { alpha_ = 1.0; }

 private:
  double eta_;
  double alpha_ = 1.0;
};

struct ResidualPair {
  double primal = 0.0;
  double dual = 0.0;
};

/// Residual norms of one agent, blocks in the order used by the adaptation rule.
using ResidualBlocks = std::array<ResidualPair, 3>;

/// Total norms of the concatenation over agents, per block.
ResidualBlocks total_residuals(const std::vector<ResidualBlocks>& agents);

/// |sum_k W (a_k - b_k)|_2 over the sequence; W empty means the identity.
double weighted_difference_norm(const std::vector<Vector>& a, const std::vector<Vector>& b,
                                const Vector& weight = Vector());

struct AdaptationSettings {
  bool enabled = false;
  int every = 10;
  double increase = 2.0;
  double decrease = 2.0;
  std::array<double, 3> sigma_increase{1.0 / 200.0, 1.0 / 200.0, 1.0 / 20.0};
  std::array<double, 3> sigma_decrease{1.0 / 50.0, 1.0 / 50.0, 1.0 / 5.0};
  double scale_min = 1.0 / 64.0;
  double scale_max = 64.0;

  void validate() const;
};

/// One application of the residual-balancing rule to an agent's scale factors.
/// The increase test is evaluated first, so it wins when both tests fire.
std::array<double, 3> adapt_scales(const ResidualBlocks& residuals, std::array<double, 3> scales,
                                   const AdaptationSettings& settings, int blocks = 3);

struct StopSettings {
  bool enabled = false;
  std::array<double, 3> primal{5.0, 10.0, 10.0};
  std::array<double, 3> dual{50.0, 1e3, 1e3};
};

bool residuals_below(const ResidualBlocks& total, const StopSettings& stop, int blocks = 3);

/// Diagonal penalty weights, floored at `floor` so every component stays penalized.
Vector penalty_diagonal(const Vector& base, double scale, double floor);

/// Per-iteration, per-agent record shared by the distributed solvers.
struct ResidualRecord {
  int iteration = 0;
  int agent = 0;
  ResidualBlocks blocks;
  std::array<double, 3> scales{1.0, 1.0, 1.0};
  double constraint_violation = 0.0;
  int infeasible_projections = 0;
};

/// Output shared by all three solvers.
struct SolveReport {
  std::string solver;
  std::vector<Trajectory> trajectories;
  std::vector<ControlLaw> laws;
  int iterations = 0;
  bool stopped_on_residuals = false;
  std::vector<ResidualRecord> residuals;
  std::vector<ResidualBlocks> total_residual_history;
  double wall_time = 0.0;          // whole solve, seconds
  double critical_path_time = 0.0; // sum over iterations of the slowest agent's compute time
  double local_step_time = 0.0;    // sum over iterations of the slowest agent's Step-1 time
  int infeasible_projections = 0;
  std::vector<std::string> notes;
};

}  // namespace distddp
