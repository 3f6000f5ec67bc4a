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

#include "distddp/ddp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "distddp/errors.hpp"

namespace distddp {

Linearization linearize(const Trajectory& nominal, const Cost& cost, const Dynamics& dynamics) {
  const int K = nominal.horizon();
  Linearization lin;
  lin.fx.resize(K);
  lin.fu.resize(K);
  lin.running.resize(K);
  lin.running_cost.resize(K);
  for (int k = 0; k < K; ++k) {
    const auto& x = nominal.states[k];
    const auto& u = nominal.controls[k];
    dynamics.jacobians(x, u, lin.fx[k], lin.fu[k]);
    cost.running_derivatives(x, u, k, lin.running[k]);
    lin.running_cost[k] = cost.running(x, u, k);
  }
  cost.terminal_derivatives(nominal.states.back(), lin.terminal);
  lin.terminal_cost = cost.terminal(nominal.states.back());
  return lin;
}

QExpansion q_expansion(const RunningDerivatives& l, const Matrix& fx, const Matrix& fu,
                       const Vector& Vx_next, const Matrix& Vxx_next) {
  QExpansion q;
  q.Qx = l.lx + fx.transpose() * Vx_next;
  q.Qu = l.lu + fu.transpose() * Vx_next;
  const Matrix Vfx = Vxx_next * fx;
  const Matrix Vfu = Vxx_next * fu;
  q.Qxx = l.lxx + fx.transpose() * Vfx;
  q.Quu = l.luu + fu.transpose() * Vfu;
  q.Qux = l.lux + fu.transpose() * Vfx;
  return q;
}

std::optional<BackwardPassResult> backward_pass(const Linearization& lin, double reg) {
  const int K = static_cast<int>(lin.fx.size());
  BackwardPassResult out;
  auto& law = out.law;
  auto& V = out.value;
  law.feedforward.resize(K);
  law.feedback.resize(K);
  V.value.resize(K + 1);
  V.gradient.resize(K + 1);
  V.hessian.resize(K + 1);

  V.value[K] = lin.terminal_cost;
  V.gradient[K] = lin.terminal.lx;
  V.hessian[K] = 0.5 * (lin.terminal.lxx + lin.terminal.lxx.transpose());

  for (int k = K - 1; k >= 0; --k) {
    const QExpansion q = q_expansion(lin.running[k], lin.fx[k], lin.fu[k], V.gradient[k + 1],
                                     V.hessian[k + 1]);
    Matrix Quu_reg = 0.5 * (q.Quu + q.Quu.transpose());
    if (reg > 0.0) Quu_reg.diagonal().array() += reg;
    Eigen::LLT<Matrix> llt(Quu_reg);
    if (llt.info() != Eigen::Success) return std::nullopt;

    Vector kff = -llt.solve(q.Qu);
    Matrix Kfb = -llt.solve(q.Qux);
    const Vector Quu_k = q.Quu * kff;

    law.expected_linear += q.Qu.dot(kff);
    law.expected_quadratic += 0.5 * kff.dot(Quu_k);

    V.value[k] = lin.running_cost[k] + V.value[k + 1] + q.Qu.dot(kff) + 0.5 * kff.dot(Quu_k);
    V.gradient[k] = q.Qx + Kfb.transpose() * Quu_k + Kfb.transpose() * q.Qu +
                    q.Qux.transpose() * kff;
    Matrix Vxx = q.Qxx + Kfb.transpose() * q.Quu * Kfb + Kfb.transpose() * q.Qux +
                 q.Qux.transpose() * Kfb;
    V.hessian[k] = 0.5 * (Vxx + Vxx.transpose());

    law.feedforward[k] = std::move(kff);
    law.feedback[k] = std::move(Kfb);
  }
  return out;
}

std::optional<BackwardPassResult> backward_pass(const Trajectory& nominal, const Cost& cost,
                                                const Dynamics& dynamics, double reg) {
  return backward_pass(linearize(nominal, cost, dynamics), reg);
}

Trajectory forward_pass(const Trajectory& nominal, const ControlLaw& law, const Dynamics& dynamics,
                        double alpha) {
  const int K = nominal.horizon();
  if (law.horizon() != K) throw std::invalid_argument("control law horizon does not match");
  Trajectory out;
  out.dt = nominal.dt;
  out.states.resize(K + 1);
  out.controls.resize(K);
  out.states[0] = nominal.states[0];
  for (int k = 0; k < K; ++k) {
    out.controls[k] = nominal.controls[k] + alpha * law.feedforward[k] +
                      law.feedback[k] * (out.states[k] - nominal.states[k]);
    out.states[k + 1] = dynamics.step(out.states[k], out.controls[k]);
    if (!out.states[k + 1].allFinite() || !out.controls[k].allFinite())
      throw DivergenceError("rollout diverged at step " + std::to_string(k + 1));
  }
  return out;
}

std::vector<double> DdpSettings::default_alphas() {
  std::vector<double> a;
  for (int i = 0; i <= 10; ++i) a.push_back(std::ldexp(1.0, -i));
  return a;
}

void DdpSettings::validate() const {
  if (max_iterations < 0) throw std::invalid_argument("max_iterations must be non-negative");
  if (!(reg_min > 0.0) || reg_max < reg_min || reg_initial < 0.0)
    throw std::invalid_argument("regularization bounds must satisfy 0 < min <= max");
  if (!(reg_increase > 1.0) || !(reg_decrease > 1.0))
    throw std::invalid_argument("regularization factors must exceed 1");
  if (alphas.empty()) throw std::invalid_argument("line search needs at least one step size");
  for (double a : alphas)
    if (!(a > 0.0 && a <= 1.0)) throw std::invalid_argument("step sizes must lie in (0, 1]");
}

namespace {

double raise(double reg, const DdpSettings& s) { return reg <= 0.0 ? s.reg_min : reg * s.reg_increase; }

double lower(double reg, const DdpSettings& s) {
  const double next = reg / s.reg_decrease;
  return next < s.reg_min ? 0.0 : next;
}

// Regularization escalation until the sweep succeeds.
BackwardPassResult robust_backward(const Linearization& lin, double& reg, const DdpSettings& s) {
  while (true) {
    if (auto r = backward_pass(lin, reg)) return std::move(*r);
    reg = raise(reg, s);
    if (reg > s.reg_max)
      throw SolverError("Quu is not positive definite even at maximum regularization");
  }
}

}  // namespace

DdpResult solve(const Trajectory& initial, const Cost& cost, const Dynamics& dynamics,
                const DdpSettings& settings) {
  settings.validate();
  initial.validate();
  if (initial.state_dim() != dynamics.state_dim() || initial.control_dim() != dynamics.control_dim())
    throw std::invalid_argument("initial trajectory does not match the dynamics dimensions");

  DdpResult result;
  result.trajectory =
      settings.warmstart
          ? rollout(dynamics, initial.states.front(), initial.controls)
          : zero_control_rollout(dynamics, initial.states.front(), initial.horizon());
  if (!all_finite(result.trajectory.states))
    throw DivergenceError("initial rollout is not finite");

  Linearization lin = linearize(result.trajectory, cost, dynamics);
  double J = total_cost(cost, result.trajectory);
  result.cost_history.push_back(J);
  double reg = settings.reg_initial;

  std::optional<BackwardPassResult> current;
  for (int it = 0; it < settings.max_iterations; ++it) {
    current = robust_backward(lin, reg, settings);
    const double predicted = current->law.expected_reduction(1.0);
    if (predicted < settings.abs_tolerance) {
      result.converged = true;
      break;
    }

    bool accepted = false;
    bool all_diverged = true;
    for (double alpha : settings.alphas) {
      Trajectory candidate;
      try {
        candidate = forward_pass(result.trajectory, current->law, dynamics, alpha);
      } catch (const DivergenceError&) {
        continue;
      }
      all_diverged = false;
      const double Jc = total_cost(cost, candidate);
      if (std::isfinite(Jc) && Jc < J) {
        const double decrease = J - Jc;
        result.trajectory = std::move(candidate);
        J = Jc;
        result.cost_history.push_back(J);
        ++result.iterations;
        accepted = true;
        reg = lower(reg, settings);
        if (decrease < settings.abs_tolerance || decrease < settings.rel_tolerance * std::abs(J))
          result.converged = true;
        break;
      }
    }

    if (!accepted) {
      // No step improved the cost: shrink the model trust region and try again.
      reg = raise(reg, settings);
      if (reg > settings.reg_max) {
        if (all_diverged) throw DivergenceError("every line-search candidate diverged");
        result.converged = true;  // no descent available at any regularization
        break;
      }
      continue;
    }
    current.reset();
    if (result.converged) break;
    lin = linearize(result.trajectory, cost, dynamics);
  }

  result.cost = J;
  result.final_regularization = reg;
  if (settings.compute_final_law) {
    if (!current) {
      lin = linearize(result.trajectory, cost, dynamics);
      double r = reg;
      current = robust_backward(lin, r, settings);
    }
    result.law = std::move(current->law);
  }
  return result;
}

}  // namespace distddp
