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

#include "distddp/trajectory.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "distddp/errors.hpp"

namespace distddp {

void Trajectory::validate() const {
  if (controls.empty()) throw std::invalid_argument("trajectory has an empty control sequence");
  if (states.size() != controls.size() + 1) {
    std::ostringstream os;
    os << "trajectory has " << states.size() << " states but " << controls.size() << " controls";
    throw std::invalid_argument(os.str());
  }
  const auto p = states.front().size();
  const auto q = controls.front().size();
  for (const auto& x : states)
    if (x.size() != p) throw std::invalid_argument("state dimensions differ along the trajectory");
  for (const auto& u : controls)
    if (u.size() != q) throw std::invalid_argument("control dimensions differ along the trajectory");
}

Vector flatten(const std::vector<Vector>& sequence) {
  Eigen::Index total = 0;
  for (const auto& v : sequence) total += v.size();
  Vector out(total);
  Eigen::Index at = 0;
  for (const auto& v : sequence) {
    out.segment(at, v.size()) = v;
    at += v.size();
  }
  return out;
}

double max_abs_difference(const std::vector<Vector>& a, const std::vector<Vector>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("sequence lengths differ");
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k].size() != b[k].size()) throw std::invalid_argument("sequence entry sizes differ");
    if (a[k].size() > 0) worst = std::max(worst, (a[k] - b[k]).cwiseAbs().maxCoeff());
  }
  return worst;
}

std::vector<Vector> slice_sequence(const std::vector<Vector>& sequence, int offset, int size) {
  std::vector<Vector> out;
  out.reserve(sequence.size());
  for (const auto& v : sequence) out.push_back(v.segment(offset, size));
  return out;
}

bool all_finite(const std::vector<Vector>& sequence) {
  return std::all_of(sequence.begin(), sequence.end(),
                     [](const Vector& v) { return v.allFinite(); });
}

namespace {
std::string join_problems(const std::vector<std::string>& problems) {
  std::string out = "invalid configuration";
  for (const auto& p : problems) out += "\n  - " + p;
  return out;
}
}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(join_problems(problems)), problems_(std::move(problems)) {}

}  // namespace distddp
