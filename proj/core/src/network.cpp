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

#include "distddp/network.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "distddp/errors.hpp"

namespace distddp {

NeighborhoodGraph::NeighborhoodGraph(std::vector<std::vector<int>> neighbors)
    : neighbors_(std::move(neighbors)) {
  const int M = static_cast<int>(neighbors_.size());
  if (M == 0) throw std::invalid_argument("a neighborhood graph needs at least one agent");
  neighbor_of_.assign(M, {});
  for (int i = 0; i < M; ++i) {
    auto& n = neighbors_[i];
    for (int j : n)
      if (j < 0 || j >= M) throw std::invalid_argument("neighbor id out of range");
    std::set<int> uniq(n.begin(), n.end());
    uniq.erase(i);
    n.assign(1, i);
    n.insert(n.end(), uniq.begin(), uniq.end());
  }
  for (int i = 0; i < M; ++i) neighbor_of_[i].push_back(i);
  for (int j = 0; j < M; ++j)
    for (int i : neighbors_[j])
      if (i != j) neighbor_of_[i].push_back(j);
  for (auto& p : neighbor_of_) std::sort(p.begin() + 1, p.end());
  check_consistency();
}

void NeighborhoodGraph::check_consistency() const {
  const int M = size();
  for (int i = 0; i < M; ++i) {
    if (neighbors_[i].empty() || neighbors_[i].front() != i)
      throw std::logic_error("neighbor set does not start with its owner");
    for (int j = 0; j < M; ++j) {
      const bool in_n = std::find(neighbors_[j].begin(), neighbors_[j].end(), i) != neighbors_[j].end();
      const bool in_p =
          std::find(neighbor_of_[i].begin(), neighbor_of_[i].end(), j) != neighbor_of_[i].end();
      if (in_n != in_p) throw std::logic_error("neighbor and neighbor-of sets disagree");
    }
  }
}

NeighborhoodGraph NeighborhoodGraph::from_adjacency(const std::vector<std::vector<int>>& neighbors) {
  return NeighborhoodGraph(neighbors);
}

NeighborhoodGraph NeighborhoodGraph::from_positions(const std::vector<Vector>& positions,
                                                    double radius, int max_size) {
  if (!(radius > 0.0)) throw std::invalid_argument("neighborhood radius must be positive");
  const int M = static_cast<int>(positions.size());
  std::vector<std::vector<int>> adj(M);
  for (int i = 0; i < M; ++i) {
    std::vector<std::pair<double, int>> near;
    for (int j = 0; j < M; ++j) {
      const double d = (positions[i] - positions[j]).norm();
      if (j == i || d <= radius) near.emplace_back(j == i ? -1.0 : d, j);
    }
    std::sort(near.begin(), near.end());
    if (max_size > 0 && static_cast<int>(near.size()) > max_size) near.resize(max_size);
    for (const auto& [d, j] : near) adj[i].push_back(j);
  }
  return NeighborhoodGraph(std::move(adj));
}

NeighborhoodGraph NeighborhoodGraph::k_nearest(const std::vector<Vector>& positions, int size) {
  if (size < 1) throw std::invalid_argument("neighborhood size must be at least 1");
  return from_positions(positions, std::numeric_limits<double>::infinity(), size);
}

NeighborhoodGraph NeighborhoodGraph::complete(int agents) {
  std::vector<std::vector<int>> adj(agents);
  for (auto& a : adj) {
    a.resize(agents);
    std::iota(a.begin(), a.end(), 0);
  }
  return NeighborhoodGraph(std::move(adj));
}

int NeighborhoodGraph::slot(int i, int j) const {
  const auto& n = neighbors_.at(i);
  const auto it = std::find(n.begin(), n.end(), j);
  return it == n.end() ? -1 : static_cast<int>(it - n.begin());
}

bool NeighborhoodGraph::is_edge(int sender, int receiver) const {
  if (receiver < 0 || receiver >= size() || sender < 0 || sender >= size()) return false;
  const auto& n = neighbors_[receiver];
  const auto& p = neighbor_of_[receiver];
  return std::find(n.begin(), n.end(), sender) != n.end() ||
         std::find(p.begin(), p.end(), sender) != p.end();
}

std::vector<std::pair<int, int>> NeighborhoodGraph::coupled_pairs() const {
  std::set<std::pair<int, int>> pairs;
  for (int i = 0; i < size(); ++i)
    for (int j : neighbors_[i])
      if (j != i) pairs.emplace(std::min(i, j), std::max(i, j));
  return {pairs.begin(), pairs.end()};
}

// ---------------------------------------------------------------------------

std::string to_string(Phase phase) {
  switch (phase) {
    case Phase::WarmstartShare: return "warmstart_share";
    case Phase::ReferenceShare: return "reference_share";
    case Phase::CopiesToOwner: return "copies_to_owner";
    case Phase::GlobalsToNeighbors: return "globals_to_neighbors";
  }
  return "unknown";
}

std::string to_string(PayloadKind kind) {
  switch (kind) {
    case PayloadKind::Trajectory: return "trajectory";
    case PayloadKind::Copy: return "copy";
    case PayloadKind::Global: return "global";
    case PayloadKind::Dual: return "dual";
  }
  return "unknown";
}

std::size_t Payload::bytes() const {
  auto seq = [](const std::vector<Vector>& s) {
    std::size_t n = 0;
    for (const auto& v : s) n += static_cast<std::size_t>(v.size());
    return n;
  };
  const std::size_t doubles = seq(states) + seq(controls) + seq(state_duals) + seq(control_duals) +
                              seq(extrapolated_states) + seq(extrapolated_controls) +
                              static_cast<std::size_t>(state_weight.size() + control_weight.size());
  return doubles * sizeof(double);
}

Network::Network(NeighborhoodGraph graph) : graph_(std::move(graph)) {}

std::vector<int> Network::expected_senders(Phase phase, int receiver) const {
  const auto& src = phase == Phase::CopiesToOwner ? graph_.neighbor_of(receiver)
                                                  : graph_.neighbors(receiver);
  return {src.begin() + 1, src.end()};
}

std::size_t Network::expected_count(Phase phase) const {
  std::size_t n = 0;
  for (int i = 0; i < graph_.size(); ++i) n += expected_senders(phase, i).size();
  return n;
}

std::vector<std::vector<Delivery>> Network::exchange(
    Phase phase, int iteration, const std::vector<std::vector<Envelope>>& outgoing) {
  const int M = graph_.size();
  if (static_cast<int>(outgoing.size()) != M)
    throw std::invalid_argument("exchange needs one outbox per agent");

  std::vector<std::vector<Delivery>> inbox(M);
  std::vector<MessageRecord> records;
  for (int s = 0; s < M; ++s) {
    for (const auto& env : outgoing[s]) {
      if (!graph_.is_edge(s, env.receiver) || env.receiver == s) {
        std::ostringstream os;
        os << "agent " << s << " addressed agent " << env.receiver << " in phase "
           << to_string(phase) << " but they share no edge";
        throw ProtocolViolation(os.str());
      }
      const auto want = expected_senders(phase, env.receiver);
      if (std::find(want.begin(), want.end(), s) == want.end()) {
        std::ostringstream os;
        os << "agent " << env.receiver << " does not expect a message from " << s << " in phase "
           << to_string(phase);
        throw ProtocolViolation(os.str());
      }
      if (!env.payload) throw ProtocolViolation("message without payload");
      inbox[env.receiver].push_back({s, env.kind, env.payload});
      records.push_back({iteration, phase, s, env.receiver, env.kind, env.payload->bytes()});
    }
  }
  for (int r = 0; r < M; ++r) {
    auto& box = inbox[r];
    std::stable_sort(box.begin(), box.end(),
                     [](const Delivery& a, const Delivery& b) { return a.sender < b.sender; });
    const auto want = expected_senders(phase, r);
    std::vector<int> got;
    for (const auto& d : box) got.push_back(d.sender);
    if (got != want) {
      std::ostringstream os;
      os << "agent " << r << " received " << got.size() << " messages in phase " << to_string(phase)
         << " but expected " << want.size() << " (missing or duplicated sender)";
      throw ProtocolViolation(os.str());
    }
  }
  std::sort(records.begin(), records.end(), [](const MessageRecord& a, const MessageRecord& b) {
    return a.sender != b.sender ? a.sender < b.sender : a.receiver < b.receiver;
  });
  log_.insert(log_.end(), records.begin(), records.end());
  return inbox;
}

std::size_t Network::non_edge_messages() const {
  return static_cast<std::size_t>(std::count_if(log_.begin(), log_.end(), [&](const MessageRecord& m) {
    return !graph_.is_edge(m.sender, m.receiver) || m.sender == m.receiver;
  }));
}

std::size_t Network::count(int iteration, Phase phase) const {
  return static_cast<std::size_t>(std::count_if(log_.begin(), log_.end(), [&](const MessageRecord& m) {
    return m.iteration == iteration && m.phase == phase;
  }));
}

void Network::write_log_csv(std::ostream& os) const {
  os << "iteration,phase,sender,receiver,kind,bytes\n";
  for (const auto& m : log_)
    os << m.iteration << ',' << to_string(m.phase) << ',' << m.sender << ',' << m.receiver << ','
       << to_string(m.kind) << ',' << m.bytes << '\n';
}

}  // namespace distddp
