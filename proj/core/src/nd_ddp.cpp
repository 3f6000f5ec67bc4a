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

#include "distddp/nd_ddp.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>
#include <string>

#include "distddp/errors.hpp"
#include "distddp/worker_pool.hpp"

namespace distddp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct NdAgent {
  StackedProblem stack;
  Trajectory xa;  // augmented iterate
  ControlLaw law;
  std::optional<AlState> al;

  std::vector<Vector> za, wa, za_prev, wa_prev;  // globals of every member
  std::vector<Vector> z_own, w_own;
  std::vector<Vector> lam, y;
  Vector P0, M0, P, M;
  std::array<double, 3> scales{1.0, 1.0, 1.0};

  ResidualBlocks residuals{};
  double violation = 0.0;
  double step1_time = 0.0;
  double compute_time = 0.0;
};

void set_block(std::vector<Vector>& seq, int offset, const std::vector<Vector>& part) {
  for (std::size_t k = 0; k < seq.size(); ++k) seq[k].segment(offset, part[k].size()) = part[k];
}

int block_size(const std::vector<int>& offsets, int total, std::size_t b) {
  return (b + 1 < offsets.size() ? offsets[b + 1] : total) - offsets[b];
}

}  // namespace

void NdSettings::validate() const {
  if (max_iterations < 1) throw std::invalid_argument("at least one ADMM iteration is required");
  ddp.validate();
  al.validate();
  if (!(state_penalty_scale > 0 && control_penalty_scale > 0))
    throw std::invalid_argument("penalty scales must be positive");
  for (const auto& u : {uniform_state_penalty, uniform_control_penalty})
    if (u && !(*u > 0.0)) throw std::invalid_argument("uniform penalties must be positive");
  if (!(penalty_floor > 0.0)) throw std::invalid_argument("penalty floor must be positive");
  adaptation.validate();
  if (workers < 1) throw std::invalid_argument("worker count must be positive");
}

NdDdp::NdDdp(MultiAgentProblem problem, NdSettings settings)
    : problem_(std::move(problem)), settings_(std::move(settings)), network_(problem_.graph) {
  problem_.validate();
  settings_.validate();
}

SolveReport NdDdp::run() {
  const auto wall0 = Clock::now();
  const int M = problem_.size();
  const int K = problem_.horizon;
  const auto& graph = problem_.graph;
  const WorkerPool pool(WorkerPool::resolve_size(settings_.workers));
  const auto& s = settings_;

  SolveReport report;
  report.solver = "nd-ddp";
  std::vector<NdAgent> agents(M);
  std::vector<Trajectory> own(M);

  // Warmstart: every agent alone with its own cost and local constraints.
  pool.parallel_for(M, [&](int i) {
    const auto& spec = problem_.agents[i];
    auto stack = std::make_shared<ConstraintStack>(problem_.local_constraints(i, 0, 0));
    const Trajectory guess = zero_control_rollout(*spec.dynamics, spec.initial_state, K);
    DdpSettings ddp = s.ddp;
    ddp.compute_final_law = false;
    try {
      own[i] = solve_constrained(guess, spec.cost, *spec.dynamics, stack, ddp, s.al).ddp.trajectory;
    } catch (const SolverError& e) {
      throw SolverError("agent " + std::to_string(i) + " warmstart: " + e.what());
    }

    auto& a = agents[i];
    a.stack = assemble_augmented(problem_, i);
    const int pa = a.stack.state_dim, qa = a.stack.control_dim;
    a.P0.resize(pa);
    a.M0.resize(qa);
    for (std::size_t b = 0; b < a.stack.members.size(); ++b) {
      const auto& mj = problem_.agents[a.stack.members[b]];
      a.P0.segment(a.stack.state_offsets[b], mj.state_dim()) =
          s.uniform_state_penalty ? Vector::Constant(mj.state_dim(), *s.uniform_state_penalty)
                                  : penalty_diagonal(mj.cost->Q().diagonal(), s.state_penalty_scale, s.penalty_floor);
      a.M0.segment(a.stack.control_offsets[b], mj.control_dim()) =
          s.uniform_control_penalty ? Vector::Constant(mj.control_dim(), *s.uniform_control_penalty)
                                    : penalty_diagonal(mj.cost->R().diagonal(), s.control_penalty_scale, s.penalty_floor);
    }
    a.P = a.P0;
    a.M = a.M0;
  });

  {
    std::vector<std::vector<Envelope>> out(M);
    for (int i = 0; i < M; ++i) {
      auto payload = std::make_shared<Payload>();
      payload->states = own[i].states;
      payload->controls = own[i].controls;
      for (int j : graph.neighbor_of(i))
        if (j != i) out[i].push_back({j, PayloadKind::Trajectory, payload});
    }
    const auto inbox = network_.exchange(Phase::WarmstartShare, 0, out);
    for (int i = 0; i < M; ++i) {
      auto& a = agents[i];
      std::vector<Trajectory> parts(a.stack.members.size());
      parts[0] = own[i];
      for (const auto& d : inbox[i]) {
        auto& t = parts[graph.slot(i, d.sender)];
        t.states = d.payload->states;
        t.controls = d.payload->controls;
        t.dt = own[i].dt;
      }
      a.xa = a.stack.stack(parts);
      a.za = a.xa.states;
      a.wa = a.xa.controls;
      a.z_own = own[i].states;
      a.w_own = own[i].controls;
      a.lam.assign(K + 1, Vector::Zero(a.stack.state_dim));
      a.y.assign(K, Vector::Zero(a.stack.control_dim));
    }
  }

  for (int n = 1; n <= s.max_iterations; ++n) {
    const bool last = n == s.max_iterations;
    for (auto& a : agents) {
      a.za_prev = a.za;
      a.wa_prev = a.wa;
      a.compute_time = 0.0;
    }

    // Step 1: constrained solve of each augmented problem around the current globals.
    pool.parallel_for(M, [&](int i) {
      const auto t0 = Clock::now();
      auto& a = agents[i];
      auto cost = std::make_shared<ProximalCost>(a.stack.cost, ProximalCost::Anchor{a.za, a.P, a.lam},
                                                 ProximalCost::Anchor{a.wa, a.M, a.y});
      DdpSettings ddp = s.ddp;
      ddp.compute_final_law = last;
      const AlState* warm = (a.al && !s.reset_multipliers) ? &*a.al : nullptr;
      try {
        auto res = solve_constrained(a.xa, cost, *a.stack.dynamics, a.stack.constraints, ddp, s.al, warm);
        a.xa = std::move(res.ddp.trajectory);
        a.law = std::move(res.ddp.law);
        a.al = std::move(res.al);
        a.violation = res.violation;
      } catch (const SolverError& e) {
        throw SolverError("agent " + std::to_string(i) + ": " + e.what());
      }
      a.step1_time = seconds_since(t0);
      a.compute_time += a.step1_time;
    });

    // Copies travel to their owners with the penalty blocks and duals that weight them.
    {
      std::vector<std::vector<Envelope>> out(M);
      for (int i = 0; i < M; ++i) {
        const auto& a = agents[i];
        const auto& st = a.stack;
        for (std::size_t b = 1; b < st.members.size(); ++b) {
          const int so = st.state_offsets[b], co = st.control_offsets[b];
          const int p = block_size(st.state_offsets, st.state_dim, b);
          const int q = block_size(st.control_offsets, st.control_dim, b);
          auto payload = std::make_shared<Payload>();
          payload->states = slice_sequence(a.xa.states, so, p);
          payload->controls = slice_sequence(a.xa.controls, co, q);
          payload->state_duals = slice_sequence(a.lam, so, p);
          payload->control_duals = slice_sequence(a.y, co, q);
          payload->state_weight = a.P.segment(so, p);
          payload->control_weight = a.M.segment(co, q);
          out[i].push_back({st.members[b], PayloadKind::Copy, payload});
        }
      }
      const auto inbox = network_.exchange(Phase::CopiesToOwner, n, out);

      pool.parallel_for(M, [&](int i) {
        const auto t0 = Clock::now();
        auto& a = agents[i];
        const int p = block_size(a.stack.state_offsets, a.stack.state_dim, 0);
        const int q = block_size(a.stack.control_offsets, a.stack.control_dim, 0);
        for (int k = 0; k <= K; ++k) {
          std::vector<Vector> copies{a.xa.states[k].head(p)}, weights{a.P.head(p)}, duals{a.lam[k].head(p)};
          for (const auto& d : inbox[i]) {
            copies.push_back(d.payload->states[k]);
            weights.push_back(d.payload->state_weight);
            duals.push_back(d.payload->state_duals[k]);
          }
          a.z_own[k] = consensus_average(copies, weights, duals, s.mode);
          if (k == K) break;
          std::vector<Vector> ccopies{a.xa.controls[k].head(q)}, cweights{a.M.head(q)}, cduals{a.y[k].head(q)};
          for (const auto& d : inbox[i]) {
            ccopies.push_back(d.payload->controls[k]);
            cweights.push_back(d.payload->control_weight);
            cduals.push_back(d.payload->control_duals[k]);
          }
          a.w_own[k] = consensus_average(ccopies, cweights, cduals, s.mode);
        }
        a.compute_time += seconds_since(t0);
      });
    }

    {
      std::vector<std::vector<Envelope>> out(M);
      for (int i = 0; i < M; ++i) {
        auto payload = std::make_shared<Payload>();
        payload->states = agents[i].z_own;
        payload->controls = agents[i].w_own;
        for (int j : graph.neighbor_of(i))
          if (j != i) out[i].push_back({j, PayloadKind::Global, payload});
      }
      const auto inbox = network_.exchange(Phase::GlobalsToNeighbors, n, out);
      for (int i = 0; i < M; ++i) {
        auto& a = agents[i];
        set_block(a.za, 0, a.z_own);
        set_block(a.wa, 0, a.w_own);
        for (const auto& d : inbox[i]) {
          const int b = graph.slot(i, d.sender);
          set_block(a.za, a.stack.state_offsets[b], d.payload->states);
          set_block(a.wa, a.stack.control_offsets[b], d.payload->controls);
        }
      }
    }

    pool.parallel_for(M, [&](int i) {
      const auto t0 = Clock::now();
      auto& a = agents[i];
      const auto lam_base = a.lam;
      const auto y_base = a.y;
      dual_ascent(a.lam, lam_base, a.P, a.xa.states, a.za);
      dual_ascent(a.y, y_base, a.M, a.xa.controls, a.wa);
      a.residuals[0] = {weighted_difference_norm(a.xa.states, a.za),
                        weighted_difference_norm(a.za, a.za_prev, a.P)};
      a.residuals[1] = {weighted_difference_norm(a.xa.controls, a.wa),
                        weighted_difference_norm(a.wa, a.wa_prev, a.M)};
      a.residuals[2] = {};
      if (s.adaptation.enabled && n % s.adaptation.every == 0) {
        a.scales = adapt_scales(a.residuals, a.scales, s.adaptation, 2);
        a.P = a.scales[0] * a.P0;
        a.M = a.scales[1] * a.M0;
      }
      a.compute_time += seconds_since(t0);
    });

    std::vector<ResidualBlocks> blocks;
    double slowest = 0.0, slowest_step1 = 0.0;
    for (int i = 0; i < M; ++i) {
      const auto& a = agents[i];
      blocks.push_back(a.residuals);
      slowest = std::max(slowest, a.compute_time);
      slowest_step1 = std::max(slowest_step1, a.step1_time);
      report.residuals.push_back({n, i, a.residuals, a.scales, a.violation, 0});
    }
    report.critical_path_time += slowest;
    report.local_step_time += slowest_step1;
    report.total_residual_history.push_back(total_residuals(blocks));
    report.iterations = n;
  }

  for (int i = 0; i < M; ++i) {
    report.trajectories.push_back(agents[i].stack.member_trajectory(agents[i].xa, 0));
    report.laws.push_back(agents[i].stack.member_law(agents[i].law, 0));
  }
  report.wall_time = seconds_since(wall0);
  return report;
}

}  // namespace distddp
