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

#include "distddp/cost.hpp"

#include <algorithm>
#include <stdexcept>

namespace distddp {

double total_cost(const Cost& cost, const Trajectory& trajectory) {
  double total = 0.0;
  for (int k = 0; k < trajectory.horizon(); ++k)
    total += cost.running(trajectory.states[k], trajectory.controls[k], k);
  return total + cost.terminal(trajectory.states.back());
}

// ---------------------------------------------------------------------------

QuadraticCost::QuadraticCost(Matrix Q, Matrix R, Matrix Qf, Vector goal, Vector control_reference)
    : Q_(std::move(Q)), R_(std::move(R)), Qf_(std::move(Qf)), goal_(std::move(goal)),
      control_ref_(std::move(control_reference)) {
  if (Q_.rows() != Q_.cols() || Qf_.rows() != Qf_.cols() || R_.rows() != R_.cols())
    throw std::invalid_argument("cost weight matrices must be square");
  if (Q_.rows() != goal_.size() || Qf_.rows() != goal_.size())
    throw std::invalid_argument("state weight size does not match the goal");
  if (control_ref_.size() != 0 && control_ref_.size() != R_.rows())
    throw std::invalid_argument("control reference size does not match R");
}

std::shared_ptr<QuadraticCost> QuadraticCost::diagonal(const Vector& q, const Vector& r,
                                                       const Vector& qf, const Vector& goal,
                                                       const Vector& control_reference) {
  return std::make_shared<QuadraticCost>(Matrix(q.asDiagonal()), Matrix(r.asDiagonal()),
                                         Matrix(qf.asDiagonal()), goal, control_reference);
}

double QuadraticCost::running(const Vector& x, const Vector& u, int) const {
  const auto dx = x - goal_;
  if (control_ref_.size()) return dx.dot(Q_ * dx) + (u - control_ref_).dot(R_ * (u - control_ref_));
  return dx.dot(Q_ * dx) + u.dot(R_ * u);
}

double QuadraticCost::terminal(const Vector& x) const {
  const Vector dx = x - goal_;
  return dx.dot(Qf_ * dx);
}

void QuadraticCost::running_derivatives(const Vector& x, const Vector& u, int,
                                        RunningDerivatives& out) const {
  out.lx = (Q_ + Q_.transpose()) * (x - goal_);
  out.lu = (R_ + R_.transpose()) * control_error(u);
  out.lxx = Q_ + Q_.transpose();
  out.luu = R_ + R_.transpose();
  out.lux = Matrix::Zero(u.size(), x.size());
}

void QuadraticCost::terminal_derivatives(const Vector& x, TerminalDerivatives& out) const {
  out.lx = (Qf_ + Qf_.transpose()) * (x - goal_);
  out.lxx = Qf_ + Qf_.transpose();
}

// ---------------------------------------------------------------------------

BlockSumCost::BlockSumCost(std::vector<Term> terms, int state_dim, int control_dim)
    : terms_(std::move(terms)), state_dim_(state_dim), control_dim_(control_dim) {
  for (const auto& t : terms_) {
    if (!t.cost) throw std::invalid_argument("block cost term without a cost");
    if (t.state_offset + t.state_dim > state_dim_ || t.control_offset + t.control_dim > control_dim_)
      throw std::invalid_argument("block cost term exceeds the stacked dimensions");
  }
}

double BlockSumCost::running(const Vector& x, const Vector& u, int k) const {
  double total = 0.0;
  for (const auto& t : terms_)
    total += t.weight * t.cost->running(x.segment(t.state_offset, t.state_dim),
                                        u.segment(t.control_offset, t.control_dim), k);
  return total;
}

double BlockSumCost::terminal(const Vector& x) const {
  double total = 0.0;
  for (const auto& t : terms_)
    total += t.weight * t.cost->terminal(x.segment(t.state_offset, t.state_dim));
  return total;
}

void BlockSumCost::running_derivatives(const Vector& x, const Vector& u, int k,
                                       RunningDerivatives& out) const {
  out.lx = Vector::Zero(state_dim_);
  out.lu = Vector::Zero(control_dim_);
  out.lxx = Matrix::Zero(state_dim_, state_dim_);
  out.luu = Matrix::Zero(control_dim_, control_dim_);
  out.lux = Matrix::Zero(control_dim_, state_dim_);
  RunningDerivatives part;
  for (const auto& t : terms_) {
    t.cost->running_derivatives(x.segment(t.state_offset, t.state_dim),
                                u.segment(t.control_offset, t.control_dim), k, part);
    out.lx.segment(t.state_offset, t.state_dim) += t.weight * part.lx;
    out.lu.segment(t.control_offset, t.control_dim) += t.weight * part.lu;
    out.lxx.block(t.state_offset, t.state_offset, t.state_dim, t.state_dim) += t.weight * part.lxx;
    out.luu.block(t.control_offset, t.control_offset, t.control_dim, t.control_dim) +=
        t.weight * part.luu;
    out.lux.block(t.control_offset, t.state_offset, t.control_dim, t.state_dim) +=
        t.weight * part.lux;
  }
}

void BlockSumCost::terminal_derivatives(const Vector& x, TerminalDerivatives& out) const {
  out.lx = Vector::Zero(state_dim_);
  out.lxx = Matrix::Zero(state_dim_, state_dim_);
  TerminalDerivatives part;
  for (const auto& t : terms_) {
    t.cost->terminal_derivatives(x.segment(t.state_offset, t.state_dim), part);
    out.lx.segment(t.state_offset, t.state_dim) += t.weight * part.lx;
    out.lxx.block(t.state_offset, t.state_offset, t.state_dim, t.state_dim) += t.weight * part.lxx;
  }
}

// ---------------------------------------------------------------------------

ProximalCost::ProximalCost(CostPtr base, Anchor state, Anchor control)
    : base_(std::move(base)), state_(std::move(state)), control_(std::move(control)) {
  if (!base_) throw std::invalid_argument("proximal cost needs a base cost");
}

double ProximalCost::state_term(const Vector& x, int k) const {
  double total = 0.0;
  if (!state_.target.empty()) {
    const Vector d = x - state_.target[k];
    total += 0.5 * d.dot(state_.weight.cwiseProduct(d));
  }
  if (!state_.linear.empty()) total += state_.linear[k].dot(x);
  return total;
}

double ProximalCost::control_term(const Vector& u, int k) const {
  double total = 0.0;
  if (!control_.target.empty()) {
    const Vector d = u - control_.target[k];
    total += 0.5 * d.dot(control_.weight.cwiseProduct(d));
  }
  if (!control_.linear.empty()) total += control_.linear[k].dot(u);
  return total;
}

double ProximalCost::running(const Vector& x, const Vector& u, int k) const {
  return base_->running(x, u, k) + state_term(x, k) + control_term(u, k);
}

double ProximalCost::terminal(const Vector& x) const {
  const int K = static_cast<int>(std::max(state_.target.size(), state_.linear.size())) - 1;
  return base_->terminal(x) + (K >= 0 ? state_term(x, K) : 0.0);
}

void ProximalCost::running_derivatives(const Vector& x, const Vector& u, int k,
                                       RunningDerivatives& out) const {
  base_->running_derivatives(x, u, k, out);
  if (!state_.target.empty()) {
    out.lx += state_.weight.cwiseProduct(x - state_.target[k]);
    out.lxx.diagonal() += state_.weight;
  }
  if (!state_.linear.empty()) out.lx += state_.linear[k];
  if (!control_.target.empty()) {
    out.lu += control_.weight.cwiseProduct(u - control_.target[k]);
    out.luu.diagonal() += control_.weight;
  }
  if (!control_.linear.empty()) out.lu += control_.linear[k];
}

void ProximalCost::terminal_derivatives(const Vector& x, TerminalDerivatives& out) const {
  base_->terminal_derivatives(x, out);
  const int K = static_cast<int>(std::max(state_.target.size(), state_.linear.size())) - 1;
  if (K < 0) return;
  if (!state_.target.empty()) {
    out.lx += state_.weight.cwiseProduct(x - state_.target[K]);
    out.lxx.diagonal() += state_.weight;
  }
  if (!state_.linear.empty()) out.lx += state_.linear[K];
}

}  // namespace distddp
