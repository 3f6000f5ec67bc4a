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

#include "distddp/md_ddp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "distddp/errors.hpp"
#include "distddp/qp.hpp"
#include "distddp/worker_pool.hpp"

namespace distddp {

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kInf = std::numeric_limits<double>::infinity();

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

void MdSettings::validate() const {
  if (max_iterations < 1) throw std::invalid_argument("at least one ADMM iteration is required");
  ddp.validate();
  if (!(control_penalty_scale > 0 && state_penalty_scale > 0 && consensus_penalty_scale > 0))
    throw std::invalid_argument("penalty scales must be positive");
  for (const auto& u : {uniform_control_penalty, uniform_state_penalty, uniform_consensus_penalty})
    if (u && !(*u > 0.0)) throw std::invalid_argument("uniform penalties must be positive");
  if (!(penalty_floor > 0.0)) throw std::invalid_argument("penalty floor must be positive");
  if (!(nesterov_eta >= 0.0 && nesterov_eta < 1.0))
    throw std::invalid_argument("Nesterov eta must lie in [0, 1)");
  adaptation.validate();
  if (workers < 1) throw std::invalid_argument("worker count must be positive");
}

// ---------------------------------------------------------------------------

Vector safe_control_projection(const Vector& u, const Vector& xi, const Vector& T,
                               const std::vector<const BoxConstraint*>& boxes) {
  const auto q = u.size();
  const Vector target = u + xi.cwiseQuotient(T);
  Vector lower = Vector::Constant(q, -kInf), upper = Vector::Constant(q, kInf);
  std::vector<const BoxConstraint*> mapped;
  for (const auto* b : boxes) {
    if (b->map()) {
      mapped.push_back(b);
      continue;
    }
    for (std::size_t i = 0; i < b->indices().size(); ++i) {
      const int c = b->indices()[i];
      lower(c) = std::max(lower(c), b->lower()(i));
      upper(c) = std::min(upper(c), b->upper()(i));
    }
  }
  if (mapped.empty()) return target.cwiseMax(lower).cwiseMin(upper);

  QpProblem qp;
  qp.H = Matrix(T.asDiagonal());
  qp.g = -T.cwiseProduct(target);
  std::vector<Eigen::RowVectorXd> rows;
  std::vector<double> rhs;
  for (const auto* b : mapped) {
    const Matrix& C = *b->map();
    for (Eigen::Index r = 0; r < C.rows(); ++r) {
      Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(q);
      for (std::size_t i = 0; i < b->indices().size(); ++i) row(b->indices()[i]) = C(r, i);
      if (std::isfinite(b->upper()(r))) {
        rows.push_back(row);
        rhs.push_back(b->upper()(r));
      }
      if (std::isfinite(b->lower()(r))) {
        rows.push_back(-row);
        rhs.push_back(-b->lower()(r));
      }
    }
  }
  qp.A.resize(static_cast<Eigen::Index>(rows.size()), q);
  qp.b.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    qp.A.row(r) = rows[r];
    qp.b(r) = rhs[r];
  }
  qp.lower = lower;
  qp.upper = upper;
  return solve_qp(qp).v;
}

StateProjectionResult safe_state_projection(const StateProjectionInput& in) {
  const auto n = in.consensus.size();
  const int own = in.own_dim;
  Vector H = in.consensus_weight;
  H.head(own) += in.own_weight;
  Vector g = in.consensus_dual - in.consensus_weight.cwiseProduct(in.consensus);
  g.head(own) -= in.own_weight.cwiseProduct(in.own_state) + in.own_dual;

  StateProjectionResult out;
  out.state = -g.cwiseQuotient(H);

  // Variables some row touches; everything else keeps the closed-form minimizer.
  std::vector<int> local(n, -1);
  std::vector<int> touched;
  auto touch = [&](int idx) {
    if (local[idx] < 0) {
      local[idx] = static_cast<int>(touched.size());
      touched.push_back(idx);
    }
  };
  for (const auto* b : in.own_boxes)
    for (int idx : b->indices()) touch(idx);
  for (const auto& h : in.halfspaces) {
    for (int d = 0; d < in.position_dim; ++d) {
      touch(in.block_offsets[h.first] + d);
      if (h.second >= 0) touch(in.block_offsets[h.second] + d);
    }
  }
  if (touched.empty()) return out;

  const auto m = static_cast<Eigen::Index>(touched.size());
  QpProblem qp;
  qp.H = Matrix::Zero(m, m);
  qp.g.resize(m);
  qp.lower = Vector::Constant(m, -kInf);
  qp.upper = Vector::Constant(m, kInf);
  for (Eigen::Index r = 0; r < m; ++r) {
    qp.H(r, r) = H(touched[r]);
    qp.g(r) = g(touched[r]);
  }
  std::vector<Eigen::RowVectorXd> rows;
  std::vector<double> rhs;
  for (const auto* b : in.own_boxes) {
    if (b->map()) {
      const Matrix& C = *b->map();
      for (Eigen::Index r = 0; r < C.rows(); ++r) {
        Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(m);
        for (std::size_t i = 0; i < b->indices().size(); ++i) row(local[b->indices()[i]]) = C(r, i);
        if (std::isfinite(b->upper()(r))) {
          rows.push_back(row);
          rhs.push_back(b->upper()(r));
        }
        if (std::isfinite(b->lower()(r))) {
          rows.push_back(-row);
          rhs.push_back(-b->lower()(r));
        }
      }
      continue;
    }
    for (std::size_t i = 0; i < b->indices().size(); ++i) {
      const int v = local[b->indices()[i]];
      qp.lower(v) = std::max(qp.lower(v), b->lower()(i));
      qp.upper(v) = std::min(qp.upper(v), b->upper()(i));
    }
  }
  for (const auto& h : in.halfspaces) {
    // normal'(p_first - p_second) >= offset  ->  -normal' p_first + normal' p_second <= -offset
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(m);
    for (int d = 0; d < in.position_dim; ++d) {
      row(local[in.block_offsets[h.first] + d]) -= h.normal(d);
      if (h.second >= 0) row(local[in.block_offsets[h.second] + d]) += h.normal(d);
    }
    rows.push_back(row);
    rhs.push_back(-h.offset);
  }
  qp.A.resize(static_cast<Eigen::Index>(rows.size()), m);
  qp.b.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    qp.A.row(r) = rows[r];
    qp.b(r) = rhs[r];
  }
  for (Eigen::Index v = 0; v < m; ++v)
    if (qp.lower(v) > qp.upper(v)) throw ConfigError({"state boxes on one component do not intersect"});

  const QpResult res = solve_qp(qp);
  for (Eigen::Index r = 0; r < m; ++r) out.state(touched[r]) = res.v(r);
  out.feasible = res.feasible;
  out.violation = res.violation;
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct MdAgent {
  int id = 0;
  int p = 0, q = 0, pa = 0;
  std::vector<int> members;
  std::vector<int> offsets;

  Trajectory x;  // Step 1 iterate
  std::shared_ptr<const Cost> local_cost;

  std::vector<Vector> us, us_prev, us_bar;   // safe controls
  std::vector<Vector> xa, xa_prev, xa_bar;   // safe augmented states
  std::vector<Vector> za, za_prev, za_bar;   // consensus values of every member
  std::vector<Vector> z_own, z_own_prev, z_own_bar;
  std::vector<Vector> xi, xi_prev, xi_bar;
  std::vector<Vector> lam, lam_prev, lam_bar;
  std::vector<Vector> y, y_prev, y_bar;

  Vector T0, P0, M0, T, P, M;
  std::array<double, 3> scales{1.0, 1.0, 1.0};

  std::vector<std::vector<Vector>> refs;  // Step-1 states of each member
  ResidualBlocks residuals{};
  int infeasible = 0;
  double violation = 0.0;
  double step1_time = 0.0;
  double compute_time = 0.0;
};

std::vector<Vector> block_sequence(const std::vector<Vector>& seq, int offset, int size) {
  return slice_sequence(seq, offset, size);
}

void set_block(std::vector<Vector>& seq, int offset, const std::vector<Vector>& part) {
  for (std::size_t k = 0; k < seq.size(); ++k) seq[k].segment(offset, part[k].size()) = part[k];
}

}  // namespace

MdDdp::MdDdp(MultiAgentProblem problem, MdSettings settings)
    : problem_(std::move(problem)), settings_(std::move(settings)), network_(problem_.graph) {
  problem_.validate();
  settings_.validate();
}

SolveReport MdDdp::run() {
  const auto wall0 = Clock::now();
  const int M = problem_.size();
  const int K = problem_.horizon;
  const auto& graph = problem_.graph;
  const WorkerPool pool(WorkerPool::resolve_size(settings_.workers));
  const int pos_dim = problem_.agents.front().position_dim;

  DdpSettings local_ddp = settings_.ddp;
  local_ddp.compute_final_law = false;
  if (settings_.ddp_iterations_per_step > 0) local_ddp.max_iterations = settings_.ddp_iterations_per_step;

  SolveReport report;
  report.solver = "md-ddp";
  std::vector<MdAgent> agents(M);

  // Initialization: independent single-agent solves and penalty matrices.
  pool.parallel_for(M, [&](int i) {
    auto& a = agents[i];
    const auto& spec = problem_.agents[i];
    a.id = i;
    a.p = spec.state_dim();
    a.q = spec.control_dim();
    a.members = graph.neighbors(i);
    for (int j : a.members) {
      a.offsets.push_back(a.pa);
      a.pa += problem_.agents[j].state_dim();
    }
    const Trajectory guess = zero_control_rollout(*spec.dynamics, spec.initial_state, K);
    try {
      a.x = solve(guess, *spec.cost, *spec.dynamics, local_ddp).trajectory;
    } catch (const SolverError& e) {
      throw SolverError("agent " + std::to_string(i) + " initial solve: " + e.what());
    }

    const auto& s = settings_;
    a.T0 = s.uniform_control_penalty ? Vector::Constant(a.q, *s.uniform_control_penalty)
                                     : penalty_diagonal(spec.cost->R().diagonal(), s.control_penalty_scale, s.penalty_floor);
    a.P0 = s.uniform_state_penalty ? Vector::Constant(a.p, *s.uniform_state_penalty)
                                   : penalty_diagonal(spec.cost->Q().diagonal(), s.state_penalty_scale, s.penalty_floor);
    a.M0.resize(a.pa);
    for (std::size_t b = 0; b < a.members.size(); ++b) {
      const auto& mj = problem_.agents[a.members[b]];
      a.M0.segment(a.offsets[b], mj.state_dim()) =
          s.uniform_consensus_penalty
              ? Vector::Constant(mj.state_dim(), *s.uniform_consensus_penalty)
              : penalty_diagonal(mj.cost->Q().diagonal(), s.consensus_penalty_scale, s.penalty_floor);
    }
    a.T = a.T0;
    a.P = a.P0;
    a.M = a.M0;
  });

  auto share_states = [&](Phase phase, int iteration) {
    std::vector<std::vector<Envelope>> out(M);
    for (int i = 0; i < M; ++i) {
      auto payload = std::make_shared<Payload>();
      payload->states = agents[i].x.states;
      for (int j : graph.neighbor_of(i))
        if (j != i) out[i].push_back({j, PayloadKind::Trajectory, payload});
    }
    const auto inbox = network_.exchange(phase, iteration, out);
    for (int i = 0; i < M; ++i) {
      auto& a = agents[i];
      a.refs.assign(a.members.size(), {});
      a.refs[0] = a.x.states;
      for (const auto& d : inbox[i]) a.refs[graph.slot(i, d.sender)] = d.payload->states;
    }
  };

  share_states(Phase::WarmstartShare, 0);
  for (auto& a : agents) {
    a.us = a.x.controls;
    a.xa.assign(K + 1, Vector::Zero(a.pa));
    for (std::size_t b = 0; b < a.members.size(); ++b) set_block(a.xa, a.offsets[b], a.refs[b]);
    a.za = a.xa;
    a.z_own = a.x.states;
    a.xi.assign(K, Vector::Zero(a.q));
    a.lam.assign(K + 1, Vector::Zero(a.p));
    a.y.assign(K + 1, Vector::Zero(a.pa));
    a.us_bar = a.us;
    a.xa_bar = a.xa;
    a.za_bar = a.za;
    a.z_own_bar = a.z_own;
    a.xi_bar = a.xi;
    a.lam_bar = a.lam;
    a.y_bar = a.y;
  }

  NesterovSequence nesterov(settings_.nesterov_eta);
  std::vector<double> primal_history;

  for (int n = 1; n <= settings_.max_iterations; ++n) {
    for (auto& a : agents) {
      a.us_prev = a.us;
      a.xa_prev = a.xa;
      a.za_prev = a.za;
      a.z_own_prev = a.z_own;
      a.xi_prev = a.xi;
      a.lam_prev = a.lam;
      a.y_prev = a.y;
      a.infeasible = 0;
      a.compute_time = 0.0;
    }
    const double gamma = nesterov.advance();

    // Step 1: local DDP on the cost augmented with the safe-copy coupling.
    pool.parallel_for(M, [&](int i) {
      const auto t0 = Clock::now();
      auto& a = agents[i];
      const auto& spec = problem_.agents[i];
      ProximalCost::Anchor state{block_sequence(a.xa_bar, 0, a.p), a.P, a.lam_bar};
      ProximalCost::Anchor control{a.us_bar, a.T, a.xi_bar};
      auto cost = std::make_shared<ProximalCost>(spec.cost, std::move(state), std::move(control));
      try {
        a.x = solve(a.x, *cost, *spec.dynamics, local_ddp).trajectory;
      } catch (const SolverError& e) {
        throw SolverError("agent " + std::to_string(i) + ": " + e.what());
      }
      a.local_cost = cost;
      a.step1_time = seconds_since(t0);
      a.compute_time += a.step1_time;
    });

    share_states(Phase::ReferenceShare, n);

    // Step 2: per-step projections onto the linearized safe sets.
    pool.parallel_for(M, [&](int i) {
      const auto t0 = Clock::now();
      auto& a = agents[i];
      const auto& spec = problem_.agents[i];
      for (int k = 0; k < K; ++k) {
        std::vector<const BoxConstraint*> boxes;
        for (const auto& b : spec.control_boxes)
          if (b->window.contains(k)) boxes.push_back(b.get());
        a.us[k] = safe_control_projection(a.x.controls[k], a.xi_bar[k], a.T, boxes);
      }
      a.violation = 0.0;
      for (int k = 0; k <= K; ++k) {
        StateProjectionInput in;
        in.own_state = a.x.states[k];
        in.own_dual = a.lam_bar[k];
        in.own_weight = a.P;
        in.consensus = a.za_bar[k];
        in.consensus_dual = a.y_bar[k];
        in.consensus_weight = a.M;
        in.own_dim = a.p;
        in.block_offsets = a.offsets;
        in.position_dim = pos_dim;
        for (const auto& b : spec.state_boxes)
          if (b->window.contains(k)) in.own_boxes.push_back(b.get());
        const Vector own_ref = a.refs[0][k].head(pos_dim);
        for (const auto& o : spec.obstacles) {
          if (!o->window.contains(k)) continue;
          a.violation = std::max(a.violation, o->evaluate(a.x.states[k], Vector())(0));
          Vector ref = own_ref;
          if ((ref - o->center()).norm() <= 1e-9) ref = a.xa_bar[k].head(pos_dim);
          if ((ref - o->center()).norm() <= 1e-9) continue;
          in.halfspaces.push_back(linearize_obstacle(o->center(), o->radius(), o->clearance(), ref, 0, k));
        }
        for (std::size_t b = 1; b < a.members.size(); ++b) {
          const Vector other_ref = a.refs[b][k].head(pos_dim);
          const int bi = static_cast<int>(b);
          const double dist = (own_ref - other_ref).norm();
          if (problem_.collision_distance > 0.0) {
            a.violation = std::max(a.violation, problem_.collision_distance - dist);
            Vector ri = own_ref, rj = other_ref;
            if ((ri - rj).norm() <= 1e-9) {
              ri = a.xa_bar[k].head(pos_dim);
              rj = a.xa_bar[k].segment(a.offsets[b], pos_dim);
            }
            if ((ri - rj).norm() > 1e-9)
              in.halfspaces.push_back(linearize_interagent(InterAgentConstraint::Kind::Collision,
                                                           problem_.collision_distance, ri, rj, 0, bi, k));
          }
          if (problem_.connectivity_distance > 0.0) {
            a.violation = std::max(a.violation, dist - problem_.connectivity_distance);
            for (auto& h : connectivity_polytope(problem_.connectivity_distance, pos_dim, 0, bi, k))
              in.halfspaces.push_back(std::move(h));
          }
        }
        const auto res = safe_state_projection(in);
        a.xa[k] = res.state;
        if (!res.feasible) ++a.infeasible;
      }
      a.compute_time += seconds_since(t0);
    });

    // Copies travel to their owners together with the weights and duals that go with them.
    {
      std::vector<std::vector<Envelope>> out(M);
      for (int i = 0; i < M; ++i) {
        const auto& a = agents[i];
        for (std::size_t b = 1; b < a.members.size(); ++b) {
          const int p = problem_.agents[a.members[b]].state_dim();
          auto payload = std::make_shared<Payload>();
          payload->states = block_sequence(a.xa, a.offsets[b], p);
          payload->state_duals = block_sequence(a.y_bar, a.offsets[b], p);
          payload->state_weight = a.M.segment(a.offsets[b], p);
          out[i].push_back({a.members[b], PayloadKind::Copy, payload});
        }
      }
      const auto inbox = network_.exchange(Phase::CopiesToOwner, n, out);

      // Step 3: owners average the copies of their own trajectory.
      pool.parallel_for(M, [&](int i) {
        const auto t0 = Clock::now();
        auto& a = agents[i];
        for (int k = 0; k <= K; ++k) {
          std::vector<Vector> copies{a.xa[k].head(a.p)};
          std::vector<Vector> weights{a.M.head(a.p)};
          std::vector<Vector> duals{a.y_bar[k].head(a.p)};
          for (const auto& d : inbox[i]) {
            copies.push_back(d.payload->states[k]);
            weights.push_back(d.payload->state_weight);
            duals.push_back(d.payload->state_duals[k]);
          }
          a.z_own[k] = consensus_average(copies, weights, duals, settings_.mode);
        }
        a.z_own_bar = extrapolate(a.z_own, a.z_own_prev, gamma);
        a.compute_time += seconds_since(t0);
      });
    }

    {
      std::vector<std::vector<Envelope>> out(M);
      for (int i = 0; i < M; ++i) {
        auto payload = std::make_shared<Payload>();
        payload->states = agents[i].z_own;
        payload->extrapolated_states = agents[i].z_own_bar;
        for (int j : graph.neighbor_of(i))
          if (j != i) out[i].push_back({j, PayloadKind::Global, payload});
      }
      const auto inbox = network_.exchange(Phase::GlobalsToNeighbors, n, out);
      for (int i = 0; i < M; ++i) {
        auto& a = agents[i];
        set_block(a.za, 0, a.z_own);
        set_block(a.za_bar, 0, a.z_own_bar);
        for (const auto& d : inbox[i]) {
          const int b = graph.slot(i, d.sender);
          set_block(a.za, a.offsets[b], d.payload->states);
          set_block(a.za_bar, a.offsets[b], d.payload->extrapolated_states);
        }
      }
    }

    // Dual ascent, residuals, momentum and penalty adaptation; all local to each agent.
    pool.parallel_for(M, [&](int i) {
      const auto t0 = Clock::now();
      auto& a = agents[i];
      const auto own_safe = block_sequence(a.xa, 0, a.p);
      dual_ascent(a.xi, a.xi_bar, a.T, a.x.controls, a.us);
      dual_ascent(a.lam, a.lam_bar, a.P, a.x.states, own_safe);
      dual_ascent(a.y, a.y_bar, a.M, a.xa, a.za);

      a.residuals[0] = {weighted_difference_norm(a.x.controls, a.us),
                        weighted_difference_norm(a.us, a.us_prev, a.T)};
      a.residuals[1] = {weighted_difference_norm(a.x.states, own_safe),
                        weighted_difference_norm(own_safe, block_sequence(a.xa_prev, 0, a.p), a.P)};
      a.residuals[2] = {weighted_difference_norm(a.xa, a.za),
                        weighted_difference_norm(a.za, a.za_prev, a.M)};

      a.us_bar = extrapolate(a.us, a.us_prev, gamma);
      a.xa_bar = extrapolate(a.xa, a.xa_prev, gamma);
      a.xi_bar = extrapolate(a.xi, a.xi_prev, gamma);
      a.lam_bar = extrapolate(a.lam, a.lam_prev, gamma);
      a.y_bar = extrapolate(a.y, a.y_prev, gamma);
      // za_bar was assembled from the owners' extrapolated globals.

      if (settings_.adaptation.enabled && n % settings_.adaptation.every == 0) {
        a.scales = adapt_scales(a.residuals, a.scales, settings_.adaptation);
        a.T = a.scales[0] * a.T0;
        a.P = a.scales[1] * a.P0;
        a.M = a.scales[2] * a.M0;
      }
      a.compute_time += seconds_since(t0);
    });

    std::vector<ResidualBlocks> blocks;
    double slowest = 0.0, slowest_step1 = 0.0;
    for (const auto& a : agents) {
      blocks.push_back(a.residuals);
      slowest = std::max(slowest, a.compute_time);
      slowest_step1 = std::max(slowest_step1, a.step1_time);
      report.infeasible_projections += a.infeasible;
      report.residuals.push_back({n, a.id, a.residuals, a.scales, std::max(0.0, a.violation), a.infeasible});
    }
    report.critical_path_time += slowest;
    report.local_step_time += slowest_step1;
    const ResidualBlocks total = total_residuals(blocks);
    report.total_residual_history.push_back(total);
    report.iterations = n;

    if (settings_.nesterov_restart && settings_.nesterov_eta > 0.0) {
      primal_history.push_back(total[0].primal + total[1].primal + total[2].primal);
      const auto h = primal_history.size();
      if (h > 5 && primal_history[h - 1] > 10.0 * primal_history[h - 6]) {
        for (auto& a : agents) {
          a.us_bar = a.us;
          a.xa_bar = a.xa;
          a.za_bar = a.za;
          a.z_own_bar = a.z_own;
          a.xi_bar = a.xi;
          a.lam_bar = a.lam;
          a.y_bar = a.y;
        }
        nesterov.restart();
        report.notes.push_back("momentum restarted at iteration " + std::to_string(n));
      }
    }

    if (settings_.stop.enabled && residuals_below(total, settings_.stop)) {
      report.stopped_on_residuals = true;
      break;
    }
  }

  // Feedback gains of each agent's final local problem.
  report.laws.assign(M, ControlLaw{});
  for (int i = 0; i < M; ++i) {
    const auto& spec = problem_.agents[i];
    const Linearization lin = linearize(agents[i].x, *agents[i].local_cost, *spec.dynamics);
    double reg = 0.0;
    std::optional<BackwardPassResult> r;
    while (!(r = backward_pass(lin, reg))) {
      reg = reg <= 0.0 ? settings_.ddp.reg_min : reg * settings_.ddp.reg_increase;
      if (reg > settings_.ddp.reg_max)
        throw SolverError("agent " + std::to_string(i) +
                          ": final gains need more than maximum regularization");
    }
    report.laws[i] = std::move(r->law);
    agents[i].x.dt = spec.dynamics->dt();
    report.trajectories.push_back(agents[i].x);
  }
  report.wall_time = seconds_since(wall0);
  return report;
}

}  // namespace distddp
