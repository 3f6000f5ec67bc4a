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

#include <vector>

#include <Eigen/Dense>

namespace distddp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// State/control sequence pair: K+1 states and K controls sampled every `dt`.
struct Trajectory {
  std::vector<Vector> states;
  std::vector<Vector> controls;
  double dt = 0.0;

  [[nodiscard]] int horizon() const { return static_cast<int>(controls.size()); }
  [[nodiscard]] int state_dim() const {
    return states.empty() ? 0 : static_cast<int>(states.front().size());
  }
  [[nodiscard]] int control_dim() const {
    return controls.empty() ? 0 : static_cast<int>(controls.front().size());
  }

  /// Throws std::invalid_argument when lengths or dimensions are inconsistent.
  void validate() const;
};

/// Stacks a trajectory of vectors column-wise into one long vector.
Vector flatten(const std::vector<Vector>& sequence);

/// Largest absolute componentwise difference between two equally shaped sequences.
double max_abs_difference(const std::vector<Vector>& a, const std::vector<Vector>& b);

/// Extracts the [offset, offset + size) slice of every entry.
std::vector<Vector> slice_sequence(const std::vector<Vector>& sequence, int offset, int size);

bool all_finite(const std::vector<Vector>& sequence);

}  // namespace distddp
