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

struct RunningDerivatives {
  Vector lx;
  Vector lu;
  Matrix lxx;
  Matrix luu;
  Matrix lux;  // q x p
};

struct TerminalDerivatives {
  Vector lx;
  Matrix lxx;
};

/// Stage-wise cost J = sum_k l(x_k, u_k, k) + phi(x_K).
class Cost {
 public:
  virtual ~Cost() = default;

  [[nodiscard]] virtual double running(const Vector& x, const Vector& u, int k) const = 0;
  [[nodiscard]] virtual double terminal(const Vector& x) const = 0;

  virtual void running_derivatives(const Vector& x, const Vector& u, int k,
                                   RunningDerivatives& out) const = 0;
  virtual void terminal_derivatives(const Vector& x, TerminalDerivatives& out) const = 0;
};

using CostPtr = std::shared_ptr<const Cost>;

double total_cost(const Cost& cost, const Trajectory& trajectory);

/// (x - g)' Q (x - g) + (u - u_ref)' R (u - u_ref) per stage and (x - g)' Qf (x - g) at
/// the end. An empty control reference means u_ref = 0.
class QuadraticCost final : public Cost {
 public:
  QuadraticCost(Matrix Q, Matrix R, Matrix Qf, Vector goal, Vector control_reference = Vector());
  static std::shared_ptr<QuadraticCost> diagonal(const Vector& q, const Vector& r, const Vector& qf,
                                                 const Vector& goal,
                                                 const Vector& control_reference = Vector());

  double running(const Vector& x, const Vector& u, int k) const override;
  double terminal(const Vector& x) const override;
  void running_derivatives(const Vector& x, const Vector& u, int k,
                           RunningDerivatives& out) const override;
  void terminal_derivatives(const Vector& x, TerminalDerivatives& out) const override;

  const Matrix& Q() const { return Q_; }
  const Matrix& R() const { return R_; }
  const Matrix& Qf() const { return Qf_; }
  const Vector& goal() const { return goal_; }
  const Vector& control_reference() const { return control_ref_; }

 private:
  Vector control_error(const Vector& u) const { return control_ref_.size() ? Vector(u - control_ref_) : u; }

  Matrix Q_, R_, Qf_;
  Vector goal_;
  Vector control_ref_;
};

/// Weighted sum of costs acting on disjoint state/control slices of a stacked system.
class BlockSumCost final : public Cost {
 public:
  struct Term {
    CostPtr cost;
    double weight = 1.0;
    int state_offset = 0;
    int state_dim = 0;
    int control_offset = 0;
    int control_dim = 0;
  };

  BlockSumCost(std::vector<Term> terms, int state_dim, int control_dim);

  double running(const Vector& x, const Vector& u, int k) const override;
  double terminal(const Vector& x) const override;
  void running_derivatives(const Vector& x, const Vector& u, int k,
                           RunningDerivatives& out) const override;
  void terminal_derivatives(const Vector& x, TerminalDerivatives& out) const override;

  const std::vector<Term>& terms() const { return terms_; }

 private:
  std::vector<Term> terms_;
  int state_dim_;
  int control_dim_;
};

/// Time-varying proximal terms added to a base cost:
///   1/2 |x_k - a_k|^2_W + b_k' x_k   and   1/2 |u_k - c_k|^2_S + d_k' u_k
/// with diagonal W, S. This is the consensus/safe-copy coupling used by the ADMM steps.
class ProximalCost final : public Cost {
 public:
  struct Anchor {
    std::vector<Vector> target;  // may be empty (no term)
    Vector weight;               // diagonal
    std::vector<Vector> linear;  // may be empty
  };

  ProximalCost(CostPtr base, Anchor state, Anchor control);

  double running(const Vector& x, const Vector& u, int k) const override;
  double terminal(const Vector& x) const override;
  void running_derivatives(const Vector& x, const Vector& u, int k,
                           RunningDerivatives& out) const override;
  void terminal_derivatives(const Vector& x, TerminalDerivatives& out) const override;

 private:
  double state_term(const Vector& x, int k) const;
  double control_term(const Vector& u, int k) const;

  CostPtr base_;
  Anchor state_;
  Anchor control_;
};

}  // namespace distddp
