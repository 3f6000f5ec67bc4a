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

#include <memory>
#include <vector>

#include "distddp/constraints.hpp"
#include "distddp/cost.hpp"
#include "distddp/ddp.hpp"

namespace distddp {

struct AlSettings {
  int max_outer = 10;
  double tolerance = 1e-3;
  double penalty_initial = 10.0;
  double penalty_growth = 10.0;
  double penalty_max = 1e8;

  void validate() const;
};

/// Multipliers w >= 0 and penalties beta > 0 for every row at every step (K+1 steps).
/// Not to be confused with the consensus control variables of the distributed solvers.
struct AlState {
  std::vector<Vector> multipliers;
  std::vector<Vector> penalties;
  int outer_iteration = 0;
  double tolerance = 1e-3;

  static AlState initial(int horizon, int rows, const AlSettings& settings);
  [[nodiscard]] bool matches(int horizon, int rows) const;
};

/// Base cost plus, per active row, (beta/2) max(0, s + w/beta)^2 - w^2/(2 beta).
/// Hessians use the Gauss-Newton term beta * grad(s) grad(s)' on rows where the
/// shifted value s + w/beta is positive.
class PenalizedCost final : public Cost {
 public:
  PenalizedCost(CostPtr base, std::shared_ptr<const ConstraintStack> stack, AlState al,
                int control_dim);

  double running(const Vector& x, const Vector& u, int k) const override;
  double terminal(const Vector& x) const override;
  void running_derivatives(const Vector& x, const Vector& u, int k,
                           RunningDerivatives& out) const override;
  void terminal_derivatives(const Vector& x, TerminalDerivatives& out) const override;

 private:
  double penalty(const Vector& s, int k) const;
  // Adds the penalty gradient and Gauss-Newton hessian of the rows at step k. Control
  // terms are skipped when `running` is null (terminal step).
  void accumulate(const Vector& x, const Vector& u, int k, Vector& lx, Matrix& lxx,
                  RunningDerivatives* running) const;

  CostPtr base_;
  std::shared_ptr<const ConstraintStack> stack_;
  AlState al_;
  int control_dim_;
  int horizon_;
};

std::shared_ptr<PenalizedCost> penalized_cost(CostPtr base,
                                              std::shared_ptr<const ConstraintStack> stack,
                                              const AlState& al, int control_dim);

/// w <- max(0, w + beta s); beta <- min(growth beta, beta_max) on rows with s > tolerance.
AlState update_multipliers(const AlState& al, const std::vector<Vector>& achieved,
                           const AlSettings& settings);

struct ConstrainedResult {
  DdpResult ddp;
  AlState al;
  double violation = 0.0;
  int outer_iterations = 0;
  int ddp_iterations = 0;
};

/// Outer multiplier loop around DDP. `warm` (optional) carries multipliers from an earlier call.
ConstrainedResult solve_constrained(const Trajectory& initial, const CostPtr& base,
                                    const Dynamics& dynamics,
                                    const std::shared_ptr<const ConstraintStack>& stack,
                                    const DdpSettings& ddp_settings, const AlSettings& al_settings,
                                    const AlState* warm = nullptr);

}  // namespace distddp
