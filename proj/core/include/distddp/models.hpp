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

#include "distddp/dynamics.hpp"

namespace distddp {

/// Planar car with state (x, y, theta, v) and control (acceleration, turn rate), Euler-discretized.
class DubinsCar final : public Dynamics {
 public:
  explicit DubinsCar(double dt);
  int state_dim() const override { return 4; }
  int control_dim() const override { return 2; }
  double dt() const override { return dt_; }
  Vector step(const Vector& x, const Vector& u) const override;
  void jacobians(const Vector& x, const Vector& u, Matrix& fx, Matrix& fu) const override;

 private:
  double dt_;
};

/// Kinematic unicycle with state (x, y, theta) and control (forward speed, turn rate).
class Unicycle final : public Dynamics {
 public:
  explicit Unicycle(double dt);
  int state_dim() const override { return 3; }
  int control_dim() const override { return 2; }
  double dt() const override { return dt_; }
  Vector step(const Vector& x, const Vector& u) const override;
  void jacobians(const Vector& x, const Vector& u, Matrix& fx, Matrix& fu) const override;

 private:
  double dt_;
};

/// Defaults are the widely used 0.468 kg X-frame parameter set.
struct QuadrotorParams {
  double mass = 0.468;
  Eigen::Vector3d inertia{4.856e-3, 4.856e-3, 8.801e-3};
  double arm_length = 0.225;
  double torque_coefficient = 0.03826;  // yaw torque per newton of rotor thrust (b/k)
  double gravity = 9.81;

  void validate() const;
  [[nodiscard]] double hover_thrust() const { return mass * gravity / 4.0; }
};

/// Rigid-body quadrotor. State: position (3), velocity (3), roll/pitch/yaw (3),
/// body rates (3). Control: four rotor thrusts in newtons, rotors 1 and 3 on the
/// body x axis, 2 and 4 on the body y axis.
class Quadrotor final : public Dynamics {
 public:
  Quadrotor(double dt, QuadrotorParams params = {});
  int state_dim() const override { return 12; }
  int control_dim() const override { return 4; }
  double dt() const override { return dt_; }
  Vector step(const Vector& x, const Vector& u) const override;
  void jacobians(const Vector& x, const Vector& u, Matrix& fx, Matrix& fu) const override;

  /// Continuous-time vector field; step() is x + dt * derivative(x, u).
  [[nodiscard]] Vector derivative(const Vector& x, const Vector& u) const;
  [[nodiscard]] const QuadrotorParams& params() const { return params_; }

 private:
  double dt_;
  QuadrotorParams params_;
};

}  // namespace distddp
