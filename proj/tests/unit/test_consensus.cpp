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

#include <gtest/gtest.h>

#include <cmath>

#include "distddp/consensus.hpp"
#include "oracles.hpp"

namespace distddp {
namespace {

Vector c4(double v) { return Vector::Constant(4, v); }

TEST(ConsensusAverage, ArithmeticMeanOfTwoCopies) {
  const Vector z = consensus_average({c4(1), c4(3)}, {c4(2), c4(2)}, {c4(0), c4(0)}, PenaltyMode::Scalar);
  EXPECT_EQ((z - c4(2)).norm(), 0.0);
  const Vector w = consensus_average({c4(0), c4(2)}, {c4(5), c4(5)}, {}, PenaltyMode::Matrix);
  EXPECT_EQ((w - c4(1)).norm(), 0.0);
}

TEST(ConsensusAverage, SingleCopyWithScaledDual) {
  const Vector z = consensus_average({c4(1)}, {c4(4)}, {c4(2)}, PenaltyMode::Scalar);
  EXPECT_DOUBLE_EQ(z(0), 1.5);
}

TEST(ConsensusAverage, WeightedMeanIgnoresDualsInMatrixMode) {
  const Vector z = consensus_average({c4(0), c4(4)}, {c4(1), c4(3)}, {c4(100), c4(-7)}, PenaltyMode::Matrix);
  EXPECT_DOUBLE_EQ(z(0), 3.0);
}

TEST(ConsensusAverage, DualSumVanishesAfterAnAverage) {
  // With uniform penalties the duals of all copies of one trajectory sum to zero after
  // any dual step taken at the dual-corrected average.
  testing::Random rng(1);
  const Vector rho = Vector::Constant(3, 2.5);
  std::vector<Vector> copies, duals;
  for (int j = 0; j < 4; ++j) copies.push_back(rng.vector(3));
  duals = {Vector::Zero(3), Vector::Zero(3), Vector::Zero(3), Vector::Zero(3)};
  for (int round = 0; round < 3; ++round) {
    const Vector z = consensus_average(copies, std::vector<Vector>(4, rho), duals, PenaltyMode::Scalar);
    Vector sum = Vector::Zero(3);
    for (int j = 0; j < 4; ++j) {
      std::vector<Vector> d{duals[j]};
      dual_ascent(d, {duals[j]}, rho, {copies[j]}, {z});
      duals[j] = d[0];
      sum += duals[j];
    }
    EXPECT_LT(sum.norm(), 1e-12);
    for (auto& c : copies) c += 0.1 * rng.vector(3);
  }
}

TEST(DualAscent, WorkedExamples) {
  std::vector<Vector> d{Vector::Zero(1)};
  dual_ascent(d, d, Vector::Constant(1, 2.0), {Vector::Constant(1, 1.5)}, {Vector::Constant(1, 1.0)});
  EXPECT_DOUBLE_EQ(d[0](0), 1.0);
  const auto before = d;
  dual_ascent(d, d, Vector::Constant(1, 2.0), {Vector::Constant(1, 0.7)}, {Vector::Constant(1, 0.7)});
  EXPECT_EQ(d[0](0), before[0](0));
  dual_ascent(d, d, Vector::Constant(1, 2.0), {Vector::Constant(1, 0.7)}, {Vector::Constant(1, 0.7)});
  EXPECT_EQ(d[0](0), before[0](0));
}

TEST(Nesterov, SecondAlphaIsGoldenRatio) {
  NesterovSequence seq(0.2);
  EXPECT_EQ(seq.alpha(), 1.0);
  EXPECT_EQ(seq.advance(), 0.0);  // gamma_1 = eta (1 - 1) / alpha_2
  EXPECT_DOUBLE_EQ(seq.alpha(), 0.5 * (1.0 + std::sqrt(5.0)));
  double prev = seq.alpha();
  for (int n = 0; n < 50; ++n) {
    const double g = seq.advance();
    EXPECT_GT(seq.alpha(), prev);
    EXPECT_GE(g, 0.0);
    EXPECT_LT(g, 0.2);
    prev = seq.alpha();
  }
}

TEST(Nesterov, ZeroEtaCollapses) {
  NesterovSequence seq(0.0);
  testing::Random rng(2);
  for (int n = 0; n < 20; ++n) {
    const double g = seq.advance();
    EXPECT_EQ(g, 0.0);
    const Vector v = rng.vector(5), prev = rng.vector(5);
    EXPECT_EQ((extrapolate(v, prev, g) - v).norm(), 0.0);
  }
  EXPECT_THROW(NesterovSequence(1.0), std::invalid_argument);
}

TEST(Adaptation, WorkedExamples) {
  AdaptationSettings s;
  ResidualBlocks r{};
  EXPECT_EQ(adapt_scales(r, {1, 1, 1}, s), (std::array<double, 3>{1, 1, 1}));
  r[0] = {1.0, 10.0};
  r[1] = {0.01, 10.0};
  r[2] = {0.0, 0.0};
  const auto a = adapt_scales(r, {1, 1, 1}, s);
  EXPECT_DOUBLE_EQ(a[0], 2.0);
  EXPECT_DOUBLE_EQ(a[1], 0.5);
  EXPECT_DOUBLE_EQ(a[2], 1.0);
}

TEST(Adaptation, ClippedToBounds) {
  AdaptationSettings s;
  ResidualBlocks r{};
  r[0] = {1.0, 0.0};
  std::array<double, 3> a{1, 1, 1};
  for (int i = 0; i < 20; ++i) a = adapt_scales(r, a, s);
  EXPECT_EQ(a[0], s.scale_max);
  r[0] = {0.0, 1.0};
  for (int i = 0; i < 40; ++i) a = adapt_scales(r, a, s);
  EXPECT_EQ(a[0], s.scale_min);
}

TEST(Residuals, TotalIsNormOfConcatenation) {
  std::vector<ResidualBlocks> agents(3);
  agents[0][0] = {3.0, 1.0};
  agents[1][0] = {4.0, 2.0};
  agents[2][0] = {0.0, 2.0};
  const auto t = total_residuals(agents);
  EXPECT_DOUBLE_EQ(t[0].primal, 5.0);
  EXPECT_DOUBLE_EQ(t[0].dual, 3.0);
  EXPECT_EQ(t[1].primal, 0.0);
}

TEST(Residuals, IdenticalIteratesGiveZero) {
  testing::Random rng(3);
  std::vector<Vector> a;
  for (int k = 0; k < 5; ++k) a.push_back(rng.vector(3));
  EXPECT_EQ(weighted_difference_norm(a, a, Vector::Constant(3, 7.0)), 0.0);
  std::vector<Vector> b = a;
  b[2](1) += 0.5;
  EXPECT_DOUBLE_EQ(weighted_difference_norm(a, b, Vector::Constant(3, 2.0)), 1.0);
}

TEST(Stop, AllSixNormsMustPass) {
  StopSettings stop;
  ResidualBlocks r{};
  EXPECT_TRUE(residuals_below(r, stop));
  r[2].dual = 1e3 + 1.0;
  EXPECT_FALSE(residuals_below(r, stop));
  EXPECT_TRUE(residuals_below(r, stop, 2));
}

TEST(PenaltyDiagonal, FloorKeepsZeroWeightsPenalized) {
  Vector base(4);
  base << 30, 30, 0, 6;
  const Vector d = penalty_diagonal(base, 8.0, 1.0);
  EXPECT_EQ(d(0), 240.0);
  EXPECT_EQ(d(2), 1.0);
}

}  // namespace
}  // namespace distddp
