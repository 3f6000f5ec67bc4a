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

#include "distddp/models.hpp"

#include <cmath>
#include <stdexcept>

namespace distddp {

namespace {
void require_positive_dt(double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
}
}  // namespace

DubinsCar::DubinsCar(double dt) : dt_(dt) { require_positive_dt(dt); }

Vector DubinsCar::step(const Vector& x, const Vector& u) const {
  Vector next(4);
  next << x(0) + dt_ * x(3) * std::cos(x(2)),
          x(1) + dt_ * x(3) * std::sin(x(2)),
          x(2) + dt_ * u(1),
          x(3) + dt_ * u(0);
  return next;
}

void DubinsCar::jacobians(const Vector& x, const Vector&, Matrix& fx, Matrix& fu) const {
  const double c = std::cos(x(2)), s = std::sin(x(2));
  fx = Matrix::Identity(4, 4);
  fx(0, 2) = -dt_ * x(3) * s;
  fx(0, 3) = dt_ * c;
  fx(1, 2) = dt_ * x(3) * c;
  fx(1, 3) = dt_ * s;
  fu = Matrix::Zero(4, 2);
  fu(2, 1) = dt_;
  fu(3, 0) = dt_;
}

Unicycle::Unicycle(double dt) : dt_(dt) { require_positive_dt(dt); }

Vector Unicycle::step(const Vector& x, const Vector& u) const {
  Vector next(3);
  next << x(0) + dt_ * u(0) * std::cos(x(2)),
          x(1) + dt_ * u(0) * std::sin(x(2)),
          x(2) + dt_ * u(1);
  return next;
}

void Unicycle::jacobians(const Vector& x, const Vector& u, Matrix& fx, Matrix& fu) const {
  const double c = std::cos(x(2)), s = std::sin(x(2));
  fx = Matrix::Identity(3, 3);
  fx(0, 2) = -dt_ * u(0) * s;
  fx(1, 2) = dt_ * u(0) * c;
  fu = Matrix::Zero(3, 2);
  fu(0, 0) = dt_ * c;
  fu(1, 0) = dt_ * s;
  fu(2, 1) = dt_;
}

void QuadrotorParams::validate() const {
  if (!(mass > 0 && arm_length > 0 && torque_coefficient > 0 && gravity > 0 &&
        (inertia.array() > 0).all()))
    throw std::invalid_argument("quadrotor parameters must all be positive");
}

Quadrotor::Quadrotor(double dt, QuadrotorParams params) : dt_(dt), params_(params) {
  require_positive_dt(dt);
  params_.validate();
}

Vector Quadrotor::derivative(const Vector& x, const Vector& u) const {
  const auto& P = params_;
  const double phi = x(6), theta = x(7), psi = x(8);
  const double p = x(9), q = x(10), r = x(11);
  const double cph = std::cos(phi), sph = std::sin(phi);
  const double cth = std::cos(theta), sth = std::sin(theta), tth = std::tan(theta);
  const double cps = std::cos(psi), sps = std::sin(psi);
  const double thrust = u.sum();
  const double Ixx = P.inertia(0), Iyy = P.inertia(1), Izz = P.inertia(2), l = P.arm_length;

  Vector dx(12);
  dx.segment<3>(0) = x.segment<3>(3);
  dx(3) = thrust / P.mass * (cps * sth * cph + sps * sph);
  dx(4) = thrust / P.mass * (sps * sth * cph - cps * sph);
  dx(5) = thrust / P.mass * (cth * cph) - P.gravity;
  dx(6) = p + sph * tth * q + cph * tth * r;
  dx(7) = cph * q - sph * r;
  dx(8) = (sph * q + cph * r) / cth;
  dx(9) = ((Iyy - Izz) * q * r + l * (u(3) - u(1))) / Ixx;
  dx(10) = ((Izz - Ixx) * p * r + l * (u(2) - u(0))) / Iyy;
  dx(11) = ((Ixx - Iyy) * p * q + P.torque_coefficient * (u(0) - u(1) + u(2) - u(3))) / Izz;
  return dx;
}

Vector Quadrotor::step(const Vector& x, const Vector& u) const {
  return x + dt_ * derivative(x, u);
}

void Quadrotor::jacobians(const Vector& x, const Vector& u, Matrix& fx, Matrix& fu) const {
  const auto& P = params_;
  const double phi = x(6), theta = x(7), psi = x(8);
  const double p = x(9), q = x(10), r = x(11);
  const double cph = std::cos(phi), sph = std::sin(phi);
  const double cth = std::cos(theta), sth = std::sin(theta), tth = std::tan(theta);
  const double cps = std::cos(psi), sps = std::sin(psi);
  const double a = u.sum() / P.mass;
  const double Ixx = P.inertia(0), Iyy = P.inertia(1), Izz = P.inertia(2), l = P.arm_length;
  const double c = P.torque_coefficient;

  Matrix A = Matrix::Zero(12, 12);
  A.block<3, 3>(0, 3).setIdentity();

  A(3, 6) = a * (-cps * sth * sph + sps * cph);
  A(3, 7) = a * (cps * cth * cph);
  A(3, 8) = a * (-sps * sth * cph + cps * sph);
  A(4, 6) = a * (-sps * sth * sph - cps * cph);
  A(4, 7) = a * (sps * cth * cph);
  A(4, 8) = a * (cps * sth * cph + sps * sph);
  A(5, 6) = -a * cth * sph;
  A(5, 7) = -a * sth * cph;

  const double sec2 = 1.0 / (cth * cth);
  A(6, 6) = cph * tth * q - sph * tth * r;
  A(6, 7) = (sph * q + cph * r) * sec2;
  A(6, 9) = 1.0;
  A(6, 10) = sph * tth;
  A(6, 11) = cph * tth;
  A(7, 6) = -sph * q - cph * r;
  A(7, 10) = cph;
  A(7, 11) = -sph;
  A(8, 6) = (cph * q - sph * r) / cth;
  A(8, 7) = (sph * q + cph * r) * sth * sec2;
  A(8, 10) = sph / cth;
  A(8, 11) = cph / cth;

  A(9, 10) = (Iyy - Izz) * r / Ixx;
  A(9, 11) = (Iyy - Izz) * q / Ixx;
  A(10, 9) = (Izz - Ixx) * r / Iyy;
  A(10, 11) = (Izz - Ixx) * p / Iyy;
  A(11, 9) = (Ixx - Iyy) * q / Izz;
  A(11, 10) = (Ixx - Iyy) * p / Izz;

  Matrix B = Matrix::Zero(12, 4);
  const Eigen::Vector3d dir(cps * sth * cph + sps * sph, sps * sth * cph - cps * sph, cth * cph);
  for (int i = 0; i < 4; ++i) B.block<3, 1>(3, i) = dir / P.mass;
  B(9, 1) = -l / Ixx;
  B(9, 3) = l / Ixx;
  B(10, 0) = -l / Iyy;
  B(10, 2) = l / Iyy;
  B(11, 0) = c / Izz;
  B(11, 1) = -c / Izz;
  B(11, 2) = c / Izz;
  B(11, 3) = -c / Izz;

  fx = Matrix::Identity(12, 12) + dt_ * A;
  fu = dt_ * B;
}

}  // namespace distddp
