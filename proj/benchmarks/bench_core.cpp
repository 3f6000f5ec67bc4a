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

#include <benchmark/benchmark.h>

#include <random>

#include "distddp/md_ddp.hpp"
#include "distddp/models.hpp"
#include "distddp/qp.hpp"
#include "distddp/scenario.hpp"

namespace {

using namespace distddp;

// Single car driving to a goal; the workload of one agent's local step.
struct CarTask {
  std::shared_ptr<DubinsCar> car = std::make_shared<DubinsCar>(0.02);
  std::shared_ptr<QuadraticCost> cost;
  Trajectory nominal;

  explicit CarTask(int horizon) {
    Vector q(4), r(2), goal(4);
    q << 30, 30, 0, 6;
    r << 0.5, 0.5;
    goal << 2, 1, 0, 0;
    cost = QuadraticCost::diagonal(q, r, 10 * q, goal);
    nominal = zero_control_rollout(*car, Vector::Zero(4), horizon);
  }
};

void BM_BackwardPass(benchmark::State& state) {
  const CarTask task(static_cast<int>(state.range(0)));
  const auto lin = linearize(task.nominal, *task.cost, *task.car);
  for (auto _ : state) benchmark::DoNotOptimize(backward_pass(lin, 1e-6));
}
BENCHMARK(BM_BackwardPass)->Arg(50)->Arg(150)->Arg(300);

void BM_DdpSolve(benchmark::State& state) {
  const CarTask task(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve(task.nominal, *task.cost, *task.car));
}
BENCHMARK(BM_DdpSolve)->Arg(50)->Arg(150)->Unit(benchmark::kMillisecond);

// Stacked backward pass: the per-iteration kernel of the centralized baseline.
void BM_StackedBackwardPass(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  const CarTask task(150);
  std::vector<DynamicsPtr> blocks(M, task.car);
  std::vector<BlockSumCost::Term> terms;
  for (int i = 0; i < M; ++i) terms.push_back({task.cost, 1.0, 4 * i, 4, 2 * i, 2});
  const BlockDiagonalDynamics dyn(blocks);
  const BlockSumCost cost(terms, 4 * M, 2 * M);
  const auto lin = linearize(zero_control_rollout(dyn, Vector::Zero(4 * M), 150), cost, dyn);
  for (auto _ : state) benchmark::DoNotOptimize(backward_pass(lin, 1e-6));
  state.SetComplexityN(M);
}
BENCHMARK(BM_StackedBackwardPass)->RangeMultiplier(2)->Range(1, 16)->Complexity()->Unit(benchmark::kMillisecond);

void BM_SolveQp(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  QpProblem qp;
  const Matrix L = Matrix::NullaryExpr(n, n, [&] { return U(rng); });
  qp.H = L * L.transpose() + Matrix::Identity(n, n);
  qp.g = Vector::NullaryExpr(n, [&] { return U(rng); });
  qp.A = Matrix::NullaryExpr(2 * n, n, [&] { return U(rng); });
  qp.b = Vector::NullaryExpr(2 * n, [&] { return U(rng) - 1.0; });
  for (auto _ : state) benchmark::DoNotOptimize(solve_qp(qp));
}
BENCHMARK(BM_SolveQp)->Arg(2)->Arg(4)->Arg(6)->Arg(12);

// One step of the safe state projection for an agent with `range(0)` neighbors.
void BM_StateProjection(benchmark::State& state) {
  const int neighbors = static_cast<int>(state.range(0));
  StateProjectionInput in;
  in.own_dim = 4;
  in.block_offsets = {0};
  int dim = 4;
  for (int j = 0; j < neighbors; ++j) {
    in.block_offsets.push_back(dim);
    dim += 4;
  }
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  in.own_state = Vector::NullaryExpr(4, [&] { return U(rng); });
  in.own_dual = Vector::Zero(4);
  in.own_weight = Vector::Constant(4, 8.0);
  in.consensus = Vector::NullaryExpr(dim, [&] { return U(rng); });
  in.consensus.head(4) = in.own_state;
  in.consensus_dual = Vector::Zero(dim);
  in.consensus_weight = Vector::Constant(dim, 8.0);
  for (int j = 1; j <= neighbors; ++j) {
    HalfSpace h;
    h.normal = Vector::NullaryExpr(2, [&] { return U(rng); }).normalized();
    h.offset = 0.3;
    h.first = 0;
    h.second = j;
    in.halfspaces.push_back(h);
  }
  for (auto _ : state) benchmark::DoNotOptimize(safe_state_projection(in));
}
BENCHMARK(BM_StateProjection)->Arg(1)->Arg(4)->Arg(8);

// Full distributed solve of a small task, a fixed number of iterations.
void BM_MdDdpSwap4(benchmark::State& state) {
  auto cfg = builtin_scenario("swap4");
  cfg.solver.admm_iterations = static_cast<int>(state.range(0));
  const auto problem = build_problem(cfg);
  const auto settings = md_settings(cfg);
  for (auto _ : state) benchmark::DoNotOptimize(MdDdp(problem, settings).run());
}
BENCHMARK(BM_MdDdpSwap4)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
