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

#include <optional>
#include <vector>

#include "distddp/cost.hpp"
#include "distddp/dynamics.hpp"

namespace distddp {

/// Affine time-varying policy u_k = u_bar_k + alpha * k_k + K_k (x_k - x_bar_k).
struct ControlLaw {
  std::vector<Vector> feedforward;
  std::vector<Matrix> feedback;
  // The predicted cost change of a step alpha is alpha * linear + alpha^2 * quadratic,
  // where linear = sum Qu' k and quadratic = 1/2 sum k' Quu k.
  double expected_linear = 0.0;
  double expected_quadratic = 0.0;

  [[nodiscard]] int horizon() const { return static_cast<int>(feedforward.size()); }
  /// Positive when the model predicts a cost decrease.
  [[nodiscard]] double expected_reduction(double alpha) const {
    return -alpha * expected_linear - alpha * alpha * expected_quadratic;
  }
};

struct ValueExpansion {
  std::vector<double> value;     // K+1 entries
  std::vector<Vector> gradient;  // K+1 entries
  std::vector<Matrix> hessian;   // K+1 entries
};

/// Derivatives of cost and dynamics along a nominal trajectory.
struct Linearization {
  std::vector<Matrix> fx;
  std::vector<Matrix> fu;
  std::vector<RunningDerivatives> running;
  std::vector<double> running_cost;
  TerminalDerivatives terminal;
  double terminal_cost = 0.0;
};

Linearization linearize(const Trajectory& nominal, const Cost& cost, const Dynamics& dynamics);

/// Second-order expansion of the state-action value at one stage.
struct QExpansion {
  Vector Qx, Qu;
  Matrix Qxx, Quu, Qux;
};

QExpansion q_expansion(const RunningDerivatives& l, const Matrix& fx, const Matrix& fu,
                       const Vector& Vx_next, const Matrix& Vxx_next);

struct BackwardPassResult {
  ControlLaw law;
  ValueExpansion value;
};

/// Riccati-like sweep. Every Quu is inverted as Quu + reg*I; returns nullopt as soon
/// as one of them is not positive definite so the caller can raise the regularization.
std::optional<BackwardPassResult> backward_pass(const Linearization& lin, double reg);
std::optional<BackwardPassResult> backward_pass(const Trajectory& nominal, const Cost& cost,
                                                const Dynamics& dynamics, double reg);

/// Applies `law` around `nominal` with step `alpha`; x_0 stays fixed.
/// Throws DivergenceError when the rollout leaves the finite numbers.
Trajectory forward_pass(const Trajectory& nominal, const ControlLaw& law, const Dynamics& dynamics,
                        double alpha);

struct DdpSettings {
  int max_iterations = 100;
  double reg_initial = 0.0;
  double reg_min = 1e-8;
  double reg_max = 1e8;
  double reg_increase = 10.0;
  double reg_decrease = 2.0;
  std::vector<double> alphas = default_alphas();
  double abs_tolerance = 1e-6;
  double rel_tolerance = 1e-8;
  bool warmstart = true;           // false: start from zero controls regardless of the input
  bool compute_final_law = true;   // re-expand around the returned trajectory for its gains

  static std::vector<double> default_alphas();
  void validate() const;
};

struct DdpResult {
  Trajectory trajectory;
  ControlLaw law;
  int iterations = 0;
  double cost = 0.0;
  std::vector<double> cost_history;  // cost of the start point followed by every accepted step
  bool converged = false;
  double final_regularization = 0.0;
};

DdpResult solve(const Trajectory& initial, const Cost& cost, const Dynamics& dynamics,
                const DdpSettings& settings = {});

}  // namespace distddp
