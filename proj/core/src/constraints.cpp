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

#include "distddp/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace distddp {

namespace {

constexpr double kDistanceFloor = 1e-9;

double safe_norm(const Vector& d) { return std::max(d.norm(), kDistanceFloor); }

}  // namespace

// ---------------------------------------------------------------------------

BoxConstraint::BoxConstraint(Target target, std::vector<int> indices, Vector lower, Vector upper,
                             std::optional<Matrix> map, Window w)
    : target_(target),
      indices_(std::move(indices)),
      lower_(std::move(lower)),
      upper_(std::move(upper)),
      map_(std::move(map)) {
  window = w;
  const auto n = static_cast<Eigen::Index>(indices_.size());
  if (lower_.size() != n || upper_.size() != n)
    throw std::invalid_argument("box bounds do not match the number of components");
  for (Eigen::Index i = 0; i < n; ++i)
    if (lower_(i) > upper_(i)) throw std::invalid_argument("box lower bound exceeds upper bound");
  if (map_) {
    if (map_->rows() != n || map_->cols() != n)
      throw std::invalid_argument("box map must be square over the selected components");
    if (std::abs(map_->determinant()) < 1e-12)
      throw std::invalid_argument("box map must be invertible");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::isfinite(upper_(i))) {
      row_component_.push_back(static_cast<int>(i));
      row_sign_.push_back(1.0);
    }
    if (std::isfinite(lower_(i))) {
      row_component_.push_back(static_cast<int>(i));
      row_sign_.push_back(-1.0);
    }
  }
}

Vector BoxConstraint::mapped(const Vector& v) const { return map_ ? Vector(*map_ * v) : v; }

bool BoxConstraint::contains(const Vector& v, double tol) const {
  const Vector m = mapped(v);
  return ((m - upper_).array() <= tol).all() && ((lower_ - m).array() <= tol).all();
}

Vector BoxConstraint::evaluate(const Vector& x, const Vector& u) const {
  const Vector& src = target_ == Target::State ? x : u;
  Vector s(rows());
  if (!map_) {
    for (int r = 0; r < rows(); ++r) {
      const int c = row_component_[r];
      const double v = src(indices_[c]);
      s(r) = row_sign_[r] > 0 ? v - upper_(c) : lower_(c) - v;
    }
    return s;
  }
  Vector v(indices_.size());
  for (std::size_t i = 0; i < indices_.size(); ++i) v(i) = src(indices_[i]);
  const Vector m = *map_ * v;
  for (int r = 0; r < rows(); ++r) {
    const int c = row_component_[r];
    s(r) = row_sign_[r] > 0 ? m(c) - upper_(c) : lower_(c) - m(c);
  }
  return s;
}

void BoxConstraint::jacobians(const Vector& x, const Vector& u, Matrix& sx, Matrix& su) const {
  sx = Matrix::Zero(rows(), x.size());
  su = Matrix::Zero(rows(), u.size());
  Matrix& J = target_ == Target::State ? sx : su;
  for (int r = 0; r < rows(); ++r) {
    const int c = row_component_[r];
    for (std::size_t i = 0; i < indices_.size(); ++i) {
      const double coeff = map_ ? (*map_)(c, static_cast<Eigen::Index>(i)) : (c == int(i) ? 1.0 : 0.0);
      J(r, indices_[i]) += row_sign_[r] * coeff;
    }
  }
}

std::shared_ptr<Constraint> BoxConstraint::shifted(int state_offset, int control_offset) const {
  auto idx = indices_;
  const int off = target_ == Target::State ? state_offset : control_offset;
  for (auto& i : idx) i += off;
  return std::make_shared<BoxConstraint>(target_, idx, lower_, upper_, map_, window);
}

// ---------------------------------------------------------------------------

ObstacleConstraint::ObstacleConstraint(int position_offset, Vector center, double radius,
                                       double clearance, Window w)
    : offset_(position_offset), center_(std::move(center)), radius_(radius), clearance_(clearance) {
  window = w;
  if (!(radius_ > 0.0)) throw std::invalid_argument("obstacle radius must be positive");
  if (clearance_ < 0.0) throw std::invalid_argument("obstacle clearance must be non-negative");
}

Vector ObstacleConstraint::evaluate(const Vector& x, const Vector&) const {
  Vector s(1);
  s(0) = radius_ + clearance_ - (x.segment(offset_, center_.size()) - center_).norm();
  return s;
}

void ObstacleConstraint::jacobians(const Vector& x, const Vector& u, Matrix& sx, Matrix& su) const {
  const Vector d = x.segment(offset_, center_.size()) - center_;
  sx = Matrix::Zero(1, x.size());
  sx.block(0, offset_, 1, d.size()) = -(d / safe_norm(d)).transpose();
  su = Matrix::Zero(1, u.size());
}

std::shared_ptr<Constraint> ObstacleConstraint::shifted(int state_offset, int) const {
  return std::make_shared<ObstacleConstraint>(offset_ + state_offset, center_, radius_, clearance_,
                                              window);
}

// ---------------------------------------------------------------------------

InterAgentConstraint::InterAgentConstraint(Kind kind, double threshold, int first_offset,
                                           int second_offset, int dim, int neighbor, Window w)
    : kind_(kind),
      threshold_(threshold),
      first_(first_offset),
      second_(second_offset),
      dim_(dim),
      neighbor_(neighbor) {
  window = w;
  if (!(threshold_ > 0.0)) throw std::invalid_argument("distance threshold must be positive");
  if (first_ == second_) throw std::invalid_argument("inter-agent rows need two distinct positions");
}

Vector InterAgentConstraint::evaluate(const Vector& x, const Vector&) const {
  const double dist = (x.segment(first_, dim_) - x.segment(second_, dim_)).norm();
  Vector s(1);
  s(0) = kind_ == Kind::Collision ? threshold_ - dist : dist - threshold_;
  return s;
}

void InterAgentConstraint::jacobians(const Vector& x, const Vector& u, Matrix& sx,
                                     Matrix& su) const {
  const Vector d = x.segment(first_, dim_) - x.segment(second_, dim_);
  const Vector n = d / safe_norm(d);
  const double sign = kind_ == Kind::Collision ? -1.0 : 1.0;
  sx = Matrix::Zero(1, x.size());
  sx.block(0, first_, 1, dim_) = sign * n.transpose();
  sx.block(0, second_, 1, dim_) = -sign * n.transpose();
  su = Matrix::Zero(1, u.size());
}

std::shared_ptr<Constraint> InterAgentConstraint::shifted(int state_offset, int) const {
  return std::make_shared<InterAgentConstraint>(kind_, threshold_, first_ + state_offset,
                                                second_ + state_offset, dim_, neighbor_, window);
}

// ---------------------------------------------------------------------------

ConstraintStack::ConstraintStack(std::vector<ConstraintPtr> constraints) {
  for (auto& c : constraints) add(std::move(c));
}

void ConstraintStack::add(ConstraintPtr c) {
  if (!c) throw std::invalid_argument("null constraint");
  if (c->window.start < 0 || c->window.end < c->window.start)
    throw std::invalid_argument("constraint activation window is empty or negative");
  offsets_.push_back(rows_);
  rows_ += c->rows();
  constraints_.push_back(std::move(c));
}

Vector ConstraintStack::evaluate(const Vector& x, const Vector& u, int k) const {
  Vector s = Vector::Constant(rows_, kInactiveRow);
  for (std::size_t i = 0; i < constraints_.size(); ++i) {
    const auto& c = *constraints_[i];
    if (!c.window.contains(k) || (c.uses_control() && u.size() == 0)) continue;
    s.segment(offsets_[i], c.rows()) = c.evaluate(x, u);
  }
  return s;
}

void ConstraintStack::jacobians(const Vector& x, const Vector& u, int k, int control_dim,
                                Matrix& sx, Matrix& su) const {
  sx = Matrix::Zero(rows_, x.size());
  su = Matrix::Zero(rows_, control_dim);
  Matrix cx, cu;
  for (std::size_t i = 0; i < constraints_.size(); ++i) {
    const auto& c = *constraints_[i];
    if (!c.window.contains(k) || (c.uses_control() && u.size() == 0)) continue;
    c.jacobians(x, u, cx, cu);
    sx.middleRows(offsets_[i], c.rows()) = cx;
    if (u.size() > 0) su.middleRows(offsets_[i], c.rows()) = cu;
  }
}

std::vector<Vector> evaluate_along(const ConstraintStack& stack, const Trajectory& trajectory) {
  std::vector<Vector> out;
  const int K = trajectory.horizon();
  out.reserve(K + 1);
  for (int k = 0; k < K; ++k)
    out.push_back(stack.evaluate(trajectory.states[k], trajectory.controls[k], k));
  out.push_back(stack.evaluate(trajectory.states[K], Vector(), K));
  return out;
}

double max_violation(const std::vector<Vector>& values) {
  double worst = 0.0;
  for (const auto& s : values) worst = std::max(worst, s.cwiseMax(0.0).norm());
  return worst;
}

// ---------------------------------------------------------------------------

double HalfSpace::residual(const Vector& p_first, const Vector& p_second) const {
  const Vector d = second < 0 ? p_first : Vector(p_first - p_second);
  return normal.dot(d) - offset;
}

HalfSpace linearize_interagent(InterAgentConstraint::Kind kind, double threshold,
                               const Vector& ref_i, const Vector& ref_j, int first, int second,
                               int k) {
  const Vector d = ref_i - ref_j;
  const double dist = d.norm();
  if (!(dist > 1e-9))
    throw std::domain_error("coincident reference positions give no separating direction");
  HalfSpace h;
  h.first = first;
  h.second = second;
  h.k = k;
  if (kind == InterAgentConstraint::Kind::Collision) {
    h.normal = d / dist;
    h.offset = threshold;
  } else {
    h.normal = -d / dist;
    h.offset = -threshold;
  }
  return h;
}

HalfSpace linearize_obstacle(const Vector& center, double radius, double clearance,
                             const Vector& reference, int block, int k) {
  const Vector d = reference - center;
  const double dist = d.norm();
  if (!(dist > 1e-9))
    throw std::domain_error("reference position coincides with the obstacle center");
  HalfSpace h;
  h.normal = d / dist;
  h.offset = radius + clearance + h.normal.dot(center);
  h.first = block;
  h.second = -1;
  h.k = k;
  return h;
}

namespace {

std::vector<Vector> make_directions(int dim) {
  std::vector<Vector> dirs;
  if (dim == 2) {
    for (int m = 0; m < 8; ++m) {
      const double a = m * M_PI / 4.0;
      Vector n(2);
      n << std::cos(a), std::sin(a);
      dirs.push_back(n);
    }
  } else if (dim == 3) {
    for (int a = -1; a <= 1; ++a)
      for (int b = -1; b <= 1; ++b)
        for (int c = -1; c <= 1; ++c) {
          if (a == 0 && b == 0 && c == 0) continue;
          Vector n(3);
          n << a, b, c;
          dirs.push_back(n.normalized());
        }
  } else {
    throw std::invalid_argument("connectivity polytopes exist for 2D and 3D positions only");
  }
  return dirs;
}

// Circumradius of {v : n_m' v <= 1}, found by enumerating candidate vertices.
double unit_circumradius(const std::vector<Vector>& dirs, int dim) {
  double worst = 0.0;
  const int m = static_cast<int>(dirs.size());
  std::vector<int> pick(dim);
  auto consider = [&](const std::vector<int>& sel) {
    Matrix A(dim, dim);
    for (int r = 0; r < dim; ++r) A.row(r) = dirs[sel[r]].transpose();
    Eigen::FullPivLU<Matrix> lu(A);
    if (lu.rank() < dim) return;
    const Vector v = lu.solve(Vector::Ones(dim));
    for (const auto& n : dirs)
      if (n.dot(v) > 1.0 + 1e-9) return;
    worst = std::max(worst, v.norm());
  };
  if (dim == 2) {
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b) consider({a, b});
  } else {
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b)
        for (int c = b + 1; c < m; ++c) consider({a, b, c});
  }
  return worst;
}

}  // namespace

const std::vector<Vector>& polytope_directions(int dim) {
  static const std::vector<Vector> d2 = make_directions(2);
  static const std::vector<Vector> d3 = make_directions(3);
  if (dim == 2) return d2;
  if (dim == 3) return d3;
  throw std::invalid_argument("connectivity polytopes exist for 2D and 3D positions only");
}

double polytope_inradius_ratio(int dim) {
  static const double r2 = 1.0 / unit_circumradius(polytope_directions(2), 2);
  static const double r3 = 1.0 / unit_circumradius(polytope_directions(3), 3);
  return dim == 2 ? r2 : r3;
}

std::vector<HalfSpace> connectivity_polytope(double threshold, int dim, int first, int second,
                                             int k) {
  const double inner = threshold * polytope_inradius_ratio(dim);
  std::vector<HalfSpace> out;
  for (const auto& n : polytope_directions(dim)) {
    HalfSpace h;
    h.normal = -n;
    h.offset = -inner;
    h.first = first;
    h.second = second;
    h.k = k;
    out.push_back(h);
  }
  return out;
}

}  // namespace distddp
