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

#include "distddp/trajectory.hpp"

namespace distddp {

/// Discrete-time dynamics x_{k+1} = f(x_k, u_k) with first-order derivatives.
class Dynamics {
 public:
  virtual ~Dynamics() = default;

  [[nodiscard]] virtual int state_dim() const = 0;
  [[nodiscard]] virtual int control_dim() const = 0;
  [[nodiscard]] virtual double dt() const = 0;

  [[nodiscard]] virtual Vector step(const Vector& x, const Vector& u) const = 0;

  /// Writes df/dx (p x p) and df/du (p x q) evaluated at (x, u).
  virtual void jacobians(const Vector& x, const Vector& u, Matrix& fx, Matrix& fu) const = 0;

  [[nodiscard]] Matrix jacobian_x(const Vector& x, const Vector& u) const;
  [[nodiscard]] Matrix jacobian_u(const Vector& x, const Vector& u) const;
};

using DynamicsPtr = std::shared_ptr<const Dynamics>;

/// Rolls `controls` out from `x0`.
Trajectory rollout(const Dynamics& dynamics, const Vector& x0, const std::vector<Vector>& controls);

/// Zero controls rolled out from `x0`; the default nominal when nothing better is known.
Trajectory zero_control_rollout(const Dynamics& dynamics, const Vector& x0, int horizon);

/// Independent subsystems stacked into one: state and control are concatenations
/// of the members' vectors and both jacobians are block diagonal.
class BlockDiagonalDynamics final : public Dynamics {
 public:
  explicit BlockDiagonalDynamics(std::vector<DynamicsPtr> blocks);

  int state_dim() const override { return state_dim_; }
  int control_dim() const override { return control_dim_; }
  double dt() const override;
  Vector step(const Vector& x, const Vector& u) const override;
  void jacobians(const Vector& x, const Vector& u, Matrix& fx, Matrix& fu) const override;

  [[nodiscard]] const std::vector<DynamicsPtr>& blocks() const { return blocks_; }
  [[nodiscard]] int state_offset(int block) const { return state_offsets_[block]; }
  [[nodiscard]] int control_offset(int block) const { return control_offsets_[block]; }

 private:
  std::vector<DynamicsPtr> blocks_;
  std::vector<int> state_offsets_;
  std::vector<int> control_offsets_;
  int state_dim_ = 0;
  int control_dim_ = 0;
};

}  // namespace distddp
