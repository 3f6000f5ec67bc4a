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

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "distddp/trajectory.hpp"

namespace distddp {

/// Fixed neighbor sets N_i (agents i constrains against, i included) and the derived
/// neighbor-of sets P_i = {j : i in N_j}. Both are stored self first, then ascending id.
class NeighborhoodGraph {
 public:
  NeighborhoodGraph() = default;

  /// Adjacency taken verbatim; self loops are added and duplicates removed.
  static NeighborhoodGraph from_adjacency(const std::vector<std::vector<int>>& neighbors);
  /// j in N_i iff |p_i - p_j| <= radius. With max_size > 0, each N_i keeps only the
  /// max_size closest members (self included), ties broken by ascending id.
  static NeighborhoodGraph from_positions(const std::vector<Vector>& positions, double radius,
                                          int max_size = 0);
  /// |N_i| = size closest agents, self included.
  static NeighborhoodGraph k_nearest(const std::vector<Vector>& positions, int size);
  static NeighborhoodGraph complete(int agents);

  [[nodiscard]] int size() const { return static_cast<int>(neighbors_.size()); }
  [[nodiscard]] const std::vector<int>& neighbors(int i) const { return neighbors_.at(i); }
  [[nodiscard]] const std::vector<int>& neighbor_of(int i) const { return neighbor_of_.at(i); }
  /// Position of j inside N_i, or -1.
  [[nodiscard]] int slot(int i, int j) const;
  /// A message from `sender` may reach `receiver` iff sender is in N_receiver or P_receiver.
  [[nodiscard]] bool is_edge(int sender, int receiver) const;
  /// Unordered pairs {i, j}, i < j, with j in N_i or i in N_j.
  [[nodiscard]] std::vector<std::pair<int, int>> coupled_pairs() const;
  [[nodiscard]] std::vector<std::vector<int>> adjacency() const { return neighbors_; }

 private:
  explicit NeighborhoodGraph(std::vector<std::vector<int>> neighbors);
  void check_consistency() const;

  std::vector<std::vector<int>> neighbors_;
  std::vector<std::vector<int>> neighbor_of_;
};

enum class Phase { WarmstartShare, ReferenceShare, CopiesToOwner, GlobalsToNeighbors };
enum class PayloadKind { Trajectory, Copy, Global, Dual };

std::string to_string(Phase phase);
std::string to_string(PayloadKind kind);

/// Immutable message body. Fields a phase does not need stay empty.
struct Payload {
  std::vector<Vector> states;
  std::vector<Vector> controls;
  std::vector<Vector> state_duals;
  std::vector<Vector> control_duals;
  std::vector<Vector> extrapolated_states;
  std::vector<Vector> extrapolated_controls;
  Vector state_weight;
  Vector control_weight;

  [[nodiscard]] std::size_t bytes() const;
};

struct Envelope {
  int receiver = -1;
  PayloadKind kind = PayloadKind::Trajectory;
  std::shared_ptr<const Payload> payload;
};

struct Delivery {
  int sender = -1;
  PayloadKind kind = PayloadKind::Trajectory;
  std::shared_ptr<const Payload> payload;
};

struct MessageRecord {
  int iteration = 0;
  Phase phase = Phase::WarmstartShare;
  int sender = -1;
  int receiver = -1;
  PayloadKind kind = PayloadKind::Trajectory;
  std::size_t bytes = 0;
};

/// Simulated synchronous network. exchange() is a full barrier: every outbox is checked
/// and copied before anything is delivered, and each inbox is sorted by sender id.
class Network {
 public:
  explicit Network(NeighborhoodGraph graph);

  [[nodiscard]] const NeighborhoodGraph& graph() const { return graph_; }

  /// outgoing[i] holds agent i's envelopes. Throws ProtocolViolation on a non-edge,
  /// a message the phase does not call for, a duplicate, or a missing message.
  std::vector<std::vector<Delivery>> exchange(Phase phase, int iteration,
                                              const std::vector<std::vector<Envelope>>& outgoing);

  /// Senders agent `receiver` must hear from in `phase`.
  [[nodiscard]] std::vector<int> expected_senders(Phase phase, int receiver) const;
  /// Closed-form message count of one exchange of `phase`.
  [[nodiscard]] std::size_t expected_count(Phase phase) const;

  [[nodiscard]] const std::vector<MessageRecord>& log() const { return log_; }
  [[nodiscard]] std::size_t non_edge_messages() const;
  [[nodiscard]] std::size_t count(int iteration, Phase phase) const;
  void write_log_csv(std::ostream& os) const;

 private:
  NeighborhoodGraph graph_;
  std::vector<MessageRecord> log_;
};

}  // namespace distddp
