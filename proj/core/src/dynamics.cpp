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

#include "distddp/dynamics.hpp"

#include <stdexcept>

#include "distddp/errors.hpp"

namespace distddp {

Matrix Dynamics::jacobian_x(const Vector& x, const Vector& u) const {
  Matrix fx, fu;
  jacobians(x, u, fx, fu);
  return fx;
}

Matrix Dynamics::jacobian_u(const Vector& x, const Vector& u) const {
  Matrix fx, fu;
  jacobians(x, u, fx, fu);
  return fu;
}

Trajectory rollout(const Dynamics& dynamics, const Vector& x0, const std::vector<Vector>& controls) {
  if (x0.size() != dynamics.state_dim()) throw std::invalid_argument("initial state has wrong size");
  Trajectory t;
  t.dt = dynamics.dt();
  t.controls = controls;
  t.states.reserve(controls.size() + 1);
  t.states.push_back(x0);
  for (const auto& u : controls) {
    if (u.size() != dynamics.control_dim()) throw std::invalid_argument("control has wrong size");
    t.states.push_back(dynamics.step(t.states.back(), u));
  }
  return t;
}

Trajectory zero_control_rollout(const Dynamics& dynamics, const Vector& x0, int horizon) {
  if (horizon <= 0) throw std::invalid_argument("horizon must be positive");
  return rollout(dynamics, x0,
                 std::vector<Vector>(horizon, Vector::Zero(dynamics.control_dim())));
}

BlockDiagonalDynamics::BlockDiagonalDynamics(std::vector<DynamicsPtr> blocks)
    : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw std::invalid_argument("stacked dynamics need at least one block");
  for (const auto& b : blocks_) {
    if (!b) throw std::invalid_argument("null dynamics block");
    if (b->dt() != blocks_.front()->dt())
      throw std::invalid_argument("stacked dynamics blocks must share one time step");
    state_offsets_.push_back(state_dim_);
    control_offsets_.push_back(control_dim_);
    state_dim_ += b->state_dim();
    control_dim_ += b->control_dim();
  }
}

double BlockDiagonalDynamics::dt() const { return blocks_.front()->dt(); }

Vector BlockDiagonalDynamics::step(const Vector& x, const Vector& u) const {
  Vector next(state_dim_);
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const auto& d = *blocks_[b];
    next.segment(state_offsets_[b], d.state_dim()) =
        d.step(x.segment(state_offsets_[b], d.state_dim()),
               u.segment(control_offsets_[b], d.control_dim()));
  }
  return next;
}

void BlockDiagonalDynamics::jacobians(const Vector& x, const Vector& u, Matrix& fx,
                                      Matrix& fu) const {
  fx = Matrix::Zero(state_dim_, state_dim_);
  fu = Matrix::Zero(state_dim_, control_dim_);
  Matrix bx, bu;
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const auto& d = *blocks_[b];
    const int p = d.state_dim(), q = d.control_dim();
    d.jacobians(x.segment(state_offsets_[b], p), u.segment(control_offsets_[b], q), bx, bu);
    fx.block(state_offsets_[b], state_offsets_[b], p, p) = bx;
    fu.block(state_offsets_[b], control_offsets_[b], p, q) = bu;
  }
}

}  // namespace distddp
