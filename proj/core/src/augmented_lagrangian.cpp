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

#include "distddp/augmented_lagrangian.hpp"

#include <algorithm>
#include <stdexcept>

namespace distddp {

void AlSettings::validate() const {
  if (max_outer < 1) throw std::invalid_argument("at least one outer iteration is required");
  if (!(tolerance > 0.0)) throw std::invalid_argument("constraint tolerance must be positive");
  if (!(penalty_initial > 0.0) || penalty_max < penalty_initial || !(penalty_growth >= 1.0))
    throw std::invalid_argument("penalty settings must satisfy 0 < initial <= max, growth >= 1");
}

AlState AlState::initial(int horizon, int rows, const AlSettings& settings) {
  AlState al;
  al.multipliers.assign(horizon + 1, Vector::Zero(rows));
  al.penalties.assign(horizon + 1, Vector::Constant(rows, settings.penalty_initial));
  al.tolerance = settings.tolerance;
  return al;
}

bool AlState::matches(int horizon, int rows) const {
  return static_cast<int>(multipliers.size()) == horizon + 1 &&
         static_cast<int>(penalties.size()) == horizon + 1 &&
         (multipliers.empty() || multipliers.front().size() == rows);
}

PenalizedCost::PenalizedCost(CostPtr base, std::shared_ptr<const ConstraintStack> stack, AlState al,
                             int control_dim)
    : base_(std::move(base)),
      stack_(std::move(stack)),
      al_(std::move(al)),
      control_dim_(control_dim),
      horizon_(static_cast<int>(al_.multipliers.size()) - 1) {
  if (!base_ || !stack_) throw std::invalid_argument("penalized cost needs a base cost and a stack");
  if (!al_.matches(horizon_, stack_->rows()))
    throw std::invalid_argument("multiplier layout does not match the constraint stack");
}

namespace {

// Columns of J holding a nonzero entry. Constraint rows touch only a few components of
// a stacked state, so the penalty hessian is assembled on this support only.
std::vector<Eigen::Index> support(const Matrix& J) {
  std::vector<Eigen::Index> cols;
  for (Eigen::Index c = 0; c < J.cols(); ++c)
    if ((J.col(c).array() != 0.0).any()) cols.push_back(c);
  return cols;
}

}  // namespace

// Rows outside their window read kInactiveRow and carry zero multipliers, so they add nothing.
double PenalizedCost::penalty(const Vector& s, int k) const {
  const Vector& w = al_.multipliers[k];
  const Vector& beta = al_.penalties[k];
  double total = 0.0;
  for (Eigen::Index r = 0; r < s.size(); ++r) {
    const double shifted = std::max(0.0, s(r) + w(r) / beta(r));
    total += 0.5 * beta(r) * shifted * shifted - w(r) * w(r) / (2.0 * beta(r));
  }
  return total;
}

double PenalizedCost::running(const Vector& x, const Vector& u, int k) const {
  return base_->running(x, u, k) + penalty(stack_->evaluate(x, u, k), k);
}

double PenalizedCost::terminal(const Vector& x) const {
  return base_->terminal(x) + penalty(stack_->evaluate(x, Vector(), horizon_), horizon_);
}

void PenalizedCost::accumulate(const Vector& x, const Vector& u, int k, Vector& lx, Matrix& lxx,
                               RunningDerivatives* running) const {
  const Vector& w = al_.multipliers[k];
  const Vector& beta = al_.penalties[k];
  const auto& constraints = stack_->constraints();
  Matrix cx, cu;
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    const Constraint& c = *constraints[i];
    if (!c.window.contains(k) || (c.uses_control() && u.size() == 0)) continue;
    const int first = stack_->offset(i);
    const Vector s = c.evaluate(x, u);
    bool any = false;
    for (Eigen::Index r = 0; r < s.size(); ++r)
      any = any || s(r) + w(first + r) / beta(first + r) > 0.0;
    if (!any) continue;
    c.jacobians(x, u, cx, cu);
    const auto xs = support(cx);
    const auto us = (running && c.uses_control()) ? support(cu) : std::vector<Eigen::Index>{};
    for (Eigen::Index r = 0; r < s.size(); ++r) {
      const double b = beta(first + r);
      if (s(r) + w(first + r) / b <= 0.0) continue;
      const double g = b * s(r) + w(first + r);
      for (auto a : xs) {
        lx(a) += g * cx(r, a);
        for (auto e : xs) lxx(a, e) += b * cx(r, a) * cx(r, e);
      }
      for (auto a : us) {
        running->lu(a) += g * cu(r, a);
        for (auto e : us) running->luu(a, e) += b * cu(r, a) * cu(r, e);
        for (auto e : xs) running->lux(a, e) += b * cu(r, a) * cx(r, e);
      }
    }
  }
}

void PenalizedCost::running_derivatives(const Vector& x, const Vector& u, int k,
                                        RunningDerivatives& out) const {
  base_->running_derivatives(x, u, k, out);
  if (!stack_->empty()) accumulate(x, u, k, out.lx, out.lxx, &out);
}

void PenalizedCost::terminal_derivatives(const Vector& x, TerminalDerivatives& out) const {
  base_->terminal_derivatives(x, out);
  if (!stack_->empty()) accumulate(x, Vector(), horizon_, out.lx, out.lxx, nullptr);
}

std::shared_ptr<PenalizedCost> penalized_cost(CostPtr base,
                                              std::shared_ptr<const ConstraintStack> stack,
                                              const AlState& al, int control_dim) {
  return std::make_shared<PenalizedCost>(std::move(base), std::move(stack), al, control_dim);
}

AlState update_multipliers(const AlState& al, const std::vector<Vector>& achieved,
                           const AlSettings& settings) {
  if (achieved.size() != al.multipliers.size())
    throw std::invalid_argument("constraint values do not cover every step");
  AlState next = al;
  for (std::size_t k = 0; k < achieved.size(); ++k) {
    const Vector& s = achieved[k];
    Vector& w = next.multipliers[k];
    Vector& beta = next.penalties[k];
    for (Eigen::Index r = 0; r < s.size(); ++r) {
      if (s(r) <= kInactiveRow) continue;  // row not enforced at this step
      w(r) = std::max(0.0, w(r) + beta(r) * s(r));
      if (s(r) > settings.tolerance)
        beta(r) = std::min(beta(r) * settings.penalty_growth, settings.penalty_max);
    }
  }
  ++next.outer_iteration;
  return next;
}

ConstrainedResult solve_constrained(const Trajectory& initial, const CostPtr& base,
                                    const Dynamics& dynamics,
                                    const std::shared_ptr<const ConstraintStack>& stack,
                                    const DdpSettings& ddp_settings, const AlSettings& al_settings,
                                    const AlState* warm) {
  al_settings.validate();
  ConstrainedResult out;
  const int K = initial.horizon();
  if (!stack || stack->empty()) {
    out.ddp = solve(initial, *base, dynamics, ddp_settings);
    out.ddp_iterations = out.ddp.iterations;
    out.outer_iterations = 1;
    out.al = AlState::initial(K, 0, al_settings);
    return out;
  }

  out.al = (warm && warm->matches(K, stack->rows())) ? *warm
                                                     : AlState::initial(K, stack->rows(), al_settings);
  out.al.tolerance = al_settings.tolerance;
  Trajectory current = initial;
  for (int l = 0; l < al_settings.max_outer; ++l) {
    const auto cost = penalized_cost(base, stack, out.al, dynamics.control_dim());
    out.ddp = solve(current, *cost, dynamics, ddp_settings);
    out.ddp_iterations += out.ddp.iterations;
    out.outer_iterations = l + 1;
    current = out.ddp.trajectory;
    const auto values = evaluate_along(*stack, current);
    out.violation = max_violation(values);
    if (out.violation <= al_settings.tolerance) break;
    out.al = update_multipliers(out.al, values, al_settings);
  }
  return out;
}

}  // namespace distddp
