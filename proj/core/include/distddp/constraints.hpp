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

#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "distddp/trajectory.hpp"

namespace distddp {

/// Value reported for rows outside their activation window. Keeps row indices stable.
inline constexpr double kInactiveRow = -1e9;

/// Inclusive range of timesteps on which a constraint is enforced.
struct Window {
  int start = 0;
  int end = std::numeric_limits<int>::max();
  [[nodiscard]] bool contains(int k) const { return k >= start && k <= end; }
};

/// Inequality rows s(x, u) <= 0 acting on a (possibly stacked) state/control pair.
class Constraint {
 public:
  virtual ~Constraint() = default;

  [[nodiscard]] virtual int rows() const = 0;
  [[nodiscard]] virtual bool uses_control() const = 0;
  [[nodiscard]] virtual Vector evaluate(const Vector& x, const Vector& u) const = 0;
  /// sx is rows x dim(x); su is rows x dim(u) (zero columns when uses_control() is false).
  virtual void jacobians(const Vector& x, const Vector& u, Matrix& sx, Matrix& su) const = 0;
  /// Same constraint acting on a larger stacked vector whose relevant slices begin
  /// `state_offset` / `control_offset` entries later.
  [[nodiscard]] virtual std::shared_ptr<Constraint> shifted(int state_offset,
                                                            int control_offset) const = 0;

  Window window;
};

using ConstraintPtr = std::shared_ptr<const Constraint>;

/// lower <= C v <= upper on the selected components v of the state or control.
/// Infinite bounds produce no rows.
class BoxConstraint final : public Constraint {
 public:
  enum class Target { State, Control };

  BoxConstraint(Target target, std::vector<int> indices, Vector lower, Vector upper,
                std::optional<Matrix> map = std::nullopt, Window window = {});

  int rows() const override { return static_cast<int>(row_sign_.size()); }
  bool uses_control() const override { return target_ == Target::Control; }
  Vector evaluate(const Vector& x, const Vector& u) const override;
  void jacobians(const Vector& x, const Vector& u, Matrix& sx, Matrix& su) const override;
  std::shared_ptr<Constraint> shifted(int state_offset, int control_offset) const override;

  [[nodiscard]] Target target() const { return target_; }
  [[nodiscard]] const std::vector<int>& indices() const { return indices_; }
  [[nodiscard]] const Vector& lower() const { return lower_; }
  [[nodiscard]] const Vector& upper() const { return upper_; }
  [[nodiscard]] const std::optional<Matrix>& map() const { return map_; }
  /// Checks lower <= C v <= upper (up to `tol`) for a raw selected vector v.
  [[nodiscard]] bool contains(const Vector& v, double tol = 0.0) const;

 private:
  Vector mapped(const Vector& v) const;

  Target target_;
  std::vector<int> indices_;
  Vector lower_, upper_;
  std::optional<Matrix> map_;
  std::vector<int> row_component_;
  std::vector<double> row_sign_;  // +1: C v - upper, -1: lower - C v
};

/// r + d - |p - c| <= 0 for the position p = x[offset : offset + dim].
class ObstacleConstraint final : public Constraint {
 public:
  ObstacleConstraint(int position_offset, Vector center, double radius, double clearance,
                     Window window = {});

  int rows() const override { return 1; }
  bool uses_control() const override { return false; }
  Vector evaluate(const Vector& x, const Vector& u) const override;
  void jacobians(const Vector& x, const Vector& u, Matrix& sx, Matrix& su) const override;
  std::shared_ptr<Constraint> shifted(int state_offset, int control_offset) const override;

  [[nodiscard]] int position_offset() const { return offset_; }
  [[nodiscard]] const Vector& center() const { return center_; }
  [[nodiscard]] double radius() const { return radius_; }
  [[nodiscard]] double clearance() const { return clearance_; }

 private:
  int offset_;
  Vector center_;
  double radius_, clearance_;
};

/// Distance rows between two positions inside one stacked state:
/// collision d - |p1 - p2| <= 0, connectivity |p1 - p2| - d <= 0.
class InterAgentConstraint final : public Constraint {
 public:
  enum class Kind { Collision, Connectivity };

  InterAgentConstraint(Kind kind, double threshold, int first_offset, int second_offset, int dim,
                       int neighbor = -1, Window window = {});

  int rows() const override { return 1; }
  bool uses_control() const override { return false; }
  Vector evaluate(const Vector& x, const Vector& u) const override;
  void jacobians(const Vector& x, const Vector& u, Matrix& sx, Matrix& su) const override;
  std::shared_ptr<Constraint> shifted(int state_offset, int control_offset) const override;

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] double threshold() const { return threshold_; }
  [[nodiscard]] int neighbor() const { return neighbor_; }

 private:
  Kind kind_;
  double threshold_;
  int first_, second_, dim_, neighbor_;
};

/// Ordered list of constraints with a fixed row layout at every timestep.
class ConstraintStack {
 public:
  ConstraintStack() = default;
  explicit ConstraintStack(std::vector<ConstraintPtr> constraints);

  void add(ConstraintPtr c);
  [[nodiscard]] bool empty() const { return constraints_.empty(); }
  [[nodiscard]] int rows() const { return rows_; }
  [[nodiscard]] const std::vector<ConstraintPtr>& constraints() const { return constraints_; }

  /// Rows at step k. An empty `u` marks the terminal step, where control rows are inactive.
  [[nodiscard]] Vector evaluate(const Vector& x, const Vector& u, int k) const;
  /// Jacobians at step k; inactive rows are zero. `control_dim` sizes su when u is empty.
  void jacobians(const Vector& x, const Vector& u, int k, int control_dim, Matrix& sx,
                 Matrix& su) const;
  /// First row of constraint i in the stacked layout.
  [[nodiscard]] int offset(std::size_t i) const { return offsets_[i]; }

 private:
  std::vector<ConstraintPtr> constraints_;
  std::vector<int> offsets_;
  int rows_ = 0;
};

/// Row values at every step of a trajectory (K+1 entries, the last without controls).
std::vector<Vector> evaluate_along(const ConstraintStack& stack, const Trajectory& trajectory);

/// max_k |max(0, s_k)|_2.
double max_violation(const std::vector<Vector>& values);

// ---------------------------------------------------------------------------
// Linearized forms for the per-timestep projection problems.

/// normal' (p_first - p_second) >= offset, where first/second index position blocks
/// of an augmented state and second = -1 stands for the origin (a fixed point folded
/// into the offset).
struct HalfSpace {
  Vector normal;
  double offset = 0.0;
  int first = 0;
  int second = -1;
  int k = 0;

  [[nodiscard]] double residual(const Vector& p_first, const Vector& p_second) const;
};

/// Collision rows become n'(p_i - p_j) >= d_col and connectivity rows
/// n'(p_i - p_j) <= d_con (stored as (-n)'(p_i - p_j) >= -d_con), with n the unit
/// vector from the reference p_j to the reference p_i.
HalfSpace linearize_interagent(InterAgentConstraint::Kind kind, double threshold,
                               const Vector& ref_i, const Vector& ref_j, int first, int second,
                               int k);

/// n' p >= r + d + n' c with n pointing from the center to the reference.
HalfSpace linearize_obstacle(const Vector& center, double radius, double clearance,
                             const Vector& reference, int block, int k);

/// Polytope inscribed in the ball |p_first - p_second| <= d: 8 faces in 2D, 26 in 3D.
std::vector<HalfSpace> connectivity_polytope(double threshold, int dim, int first, int second,
                                             int k);

/// Unit face normals used by connectivity_polytope and the inradius of the unit-circumradius polytope.
const std::vector<Vector>& polytope_directions(int dim);
double polytope_inradius_ratio(int dim);

}  // namespace distddp
