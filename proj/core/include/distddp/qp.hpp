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

#include "distddp/trajectory.hpp"

namespace distddp {

/// min 1/2 v'Hv + g'v  s.t.  A v <= b  and  lower <= v <= upper (bounds may be infinite).
/// H must be symmetric positive definite.
struct QpProblem {
  Matrix H;
  Vector g;
  Matrix A;  // rows x n, may have zero rows
  Vector b;
  Vector lower;  // empty: no bounds
  Vector upper;
};

struct QpResult {
  Vector v;
  bool feasible = true;      // false: rows conflict, v is the least-violating point
  double violation = 0.0;    // max(0, A v - b) over rows
  int iterations = 0;
};

/// Dual active-set method (Goldfarb-Idnani). Starts from the unconstrained minimizer and
/// adds the most violated row each pass, so it never needs a feasible starting point and
/// detects infeasibility directly. When the rows conflict, the general rows are relaxed by a
/// single heavily weighted slack while the bounds stay hard.
QpResult solve_qp(const QpProblem& problem, double tolerance = 1e-10);

}  // namespace distddp
