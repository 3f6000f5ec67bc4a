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

#include "distddp/consensus.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace distddp {

PenaltyMode parse_penalty_mode(const std::string& s) {
  if (s == "scalar") return PenaltyMode::Scalar;
  if (s == "matrix") return PenaltyMode::Matrix;
  throw std::invalid_argument("penalty mode must be 'scalar' or 'matrix', got '" + s + "'");
}

std::string to_string(PenaltyMode mode) { return mode == PenaltyMode::Scalar ? "scalar" : "matrix"; }

Vector consensus_average(const std::vector<Vector>& copies, const std::vector<Vector>& weights,
                         const std::vector<Vector>& duals, PenaltyMode mode) {
  if (copies.empty() || copies.size() != weights.size())
    throw std::invalid_argument("each copy needs a weight");
  const bool use_duals = mode == PenaltyMode::Scalar && !duals.empty();
  if (use_duals && duals.size() != copies.size()) throw std::invalid_argument("each copy needs a dual");
  Vector num = Vector::Zero(copies.front().size());
  Vector den = Vector::Zero(copies.front().size());
  for (std::size_t j = 0; j < copies.size(); ++j) {
    num += weights[j].cwiseProduct(copies[j]);
    if (use_duals) num += duals[j];
    den += weights[j];
  }
  return num.cwiseQuotient(den);
}

Vector extrapolate(const Vector& v, const Vector& previous, double gamma) {
  if (gamma == 0.0) return v;
  return v + gamma * (v - previous);
}

std::vector<Vector> extrapolate(const std::vector<Vector>& v, const std::vector<Vector>& previous,
                                double gamma) {
  if (gamma == 0.0) return v;
  std::vector<Vector> out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = extrapolate(v[k], previous[k], gamma);
  return out;
}

void dual_ascent(std::vector<Vector>& dual, const std::vector<Vector>& base, const Vector& weight,
                 const std::vector<Vector>& a, const std::vector<Vector>& b) {
  dual.resize(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) dual[k] = base[k] + weight.cwiseProduct(a[k] - b[k]);
}

NesterovSequence::NesterovSequence(double eta) : eta_(eta) {
  if (!(eta >= 0.0 && eta < 1.0)) throw std::invalid_argument("Nesterov eta must lie in [0, 1)");
}

double NesterovSequence::gamma() const {
  const double next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * alpha_ * alpha_));
  return eta_ * (alpha_ - 1.0) / next;
}

double NesterovSequence::advance() {
  const double g = gamma();
  alpha_ = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * alpha_ * alpha_));
  return g;
}

ResidualBlocks total_residuals(const std::vector<ResidualBlocks>& agents) {
  ResidualBlocks total{};
  for (const auto& a : agents)
    for (int b = 0; b < 3; ++b) {
      total[b].primal += a[b].primal * a[b].primal;
      total[b].dual += a[b].dual * a[b].dual;
    }
  for (auto& t : total) {
    t.primal = std::sqrt(t.primal);
    t.dual = std::sqrt(t.dual);
  }
  return total;
}

double weighted_difference_norm(const std::vector<Vector>& a, const std::vector<Vector>& b,
                                const Vector& weight) {
  if (a.size() != b.size()) throw std::invalid_argument("sequence lengths differ");
  double sq = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const Vector d = a[k] - b[k];
    sq += weight.size() == 0 ? d.squaredNorm() : weight.cwiseProduct(d).squaredNorm();
  }
  return std::sqrt(sq);
}

void AdaptationSettings::validate() const {
  if (every < 1) throw std::invalid_argument("adaptation period must be at least 1");
  if (!(increase > 1.0) || !(decrease > 1.0))
    throw std::invalid_argument("adaptation factors must exceed 1");
  if (!(scale_min > 0.0) || scale_max < scale_min)
    throw std::invalid_argument("adaptation bounds must satisfy 0 < min <= max");
  for (int b = 0; b < 3; ++b)
    if (!(sigma_increase[b] > 0.0) || !(sigma_decrease[b] > 0.0))
      throw std::invalid_argument("adaptation ratios must be positive");
}

std::array<double, 3> adapt_scales(const ResidualBlocks& r, std::array<double, 3> a,
                                   const AdaptationSettings& s, int blocks) {
  for (int b = 0; b < blocks; ++b) {
    if (r[b].primal > s.sigma_increase[b] * r[b].dual)
      a[b] *= s.increase;
    else if (r[b].primal < s.sigma_decrease[b] * r[b].dual)
      a[b] /= s.decrease;
    a[b] = std::clamp(a[b], s.scale_min, s.scale_max);
  }
  return a;
}

bool residuals_below(const ResidualBlocks& total, const StopSettings& stop, int blocks) {
  for (int b = 0; b < blocks; ++b)
    if (!(total[b].primal <= stop.primal[b] && total[b].dual <= stop.dual[b])) return false;
  return true;
}

Vector penalty_diagonal(const Vector& base, double scale, double floor) {
  return (scale * base).cwiseMax(floor);
}

}  // namespace distddp
