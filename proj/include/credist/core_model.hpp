// Copyright 2026 The Credist Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CREDIST_CORE_MODEL_HPP_
#define CREDIST_CORE_MODEL_HPP_

// Social graph, action log and per-action propagation DAGs.
//
// External user and action ids are arbitrary 64-bit integers. Internally every
// user is a dense NodeId and every action a dense ActionIndex; both are
// assigned in ascending order of the external id, so comparing dense ids is
// the same as comparing external ids.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace credist {

using UserId = std::int64_t;
using ActionId = std::int64_t;
using Timestamp = std::int64_t;
using NodeId = std::uint32_t;
using ActionIndex = std::uint32_t;
using EdgeIndex = std::size_t;

inline constexpr EdgeIndex kNoEdge = static_cast<EdgeIndex>(-1);

// Directed, unweighted social graph in CSR form (both directions).
class SocialGraph {
 public:
  SocialGraph() = default;

  // Deduplicates edges. Throws ValidationError on a self-loop. `extra_users`
  // adds nodes that may have no edges.
  static SocialGraph from_edges(std::span<const std::pair<UserId, UserId>> edges,
                                std::span<const UserId> extra_users = {});

  std::size_t num_nodes() const { return user_ids_.size(); }
  std::size_t num_edges() const { return out_targets_.size(); }

  UserId user_id(NodeId node) const { return user_ids_[node]; }
  std::span<const UserId> user_ids() const { return user_ids_; }
  std::optional<NodeId> find(UserId user) const;
  // Throws NotFoundError.
  NodeId node(UserId user) const;

  std::span<const NodeId> out_neighbors(NodeId v) const {
    return {out_targets_.data() + out_offsets_[v],
            out_targets_.data() + out_offsets_[v + 1]};
  }
  std::span<const NodeId> in_neighbors(NodeId u) const {
    return {in_sources_.data() + in_offsets_[u],
            in_sources_.data() + in_offsets_[u + 1]};
  }
  // Edge indices of the in-edges of `u`, parallel to in_neighbors(u).
  std::span<const EdgeIndex> in_edges(NodeId u) const {
    return {in_edge_ids_.data() + in_offsets_[u],
            in_edge_ids_.data() + in_offsets_[u + 1]};
  }
  // Out-edges of v are numbered contiguously from here.
  EdgeIndex out_edge_begin(NodeId v) const { return out_offsets_[v]; }
  std::size_t out_degree(NodeId v) const {
    return out_offsets_[v + 1] - out_offsets_[v];
  }
  std::size_t in_degree(NodeId u) const {
    return in_offsets_[u + 1] - in_offsets_[u];
  }

  // Edges are numbered by (source, target) order.
  EdgeIndex edge_index(NodeId v, NodeId u) const;
  bool has_edge(NodeId v, NodeId u) const { return edge_index(v, u) != kNoEdge; }
  NodeId edge_source(EdgeIndex e) const;
  NodeId edge_target(EdgeIndex e) const { return out_targets_[e]; }

 private:
  std::vector<UserId> user_ids_;
  std::vector<std::size_t> out_offsets_{0};
  std::vector<NodeId> out_targets_;
  std::vector<std::size_t> in_offsets_{0};
  std::vector<NodeId> in_sources_;
  std::vector<EdgeIndex> in_edge_ids_;
};

struct LogEntry {
  NodeId user;
  ActionIndex action;
  Timestamp time;

  friend bool operator==(const LogEntry&, const LogEntry&) = default;
};

struct RawLogEntry {
  UserId user;
  ActionId action;
  Timestamp time;
};

// Action log sorted by (action, time, user).
class ActionLog {
 public:
  ActionLog() = default;

  // `action_ids` must be strictly ascending and `entries` sorted by
  // (action, time, user); violations throw ContractViolation. A repeated
  // (user, action) pair throws ValidationError.
  ActionLog(std::vector<ActionId> action_ids, std::vector<LogEntry> entries,
            std::size_t num_nodes);

  std::span<const LogEntry> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::size_t num_actions() const { return action_ids_.size(); }
  std::size_t num_nodes() const { return performed_.size(); }

  ActionId action_id(ActionIndex a) const { return action_ids_[a]; }
  std::span<const ActionId> action_ids() const { return action_ids_; }
  std::optional<ActionIndex> find_action(ActionId action) const;

  // Performers of `a` in chronological order.
  std::span<const LogEntry> performers(ActionIndex a) const {
    return {entries_.data() + offsets_[a], entries_.data() + offsets_[a + 1]};
  }
  std::size_t propagation_size(ActionIndex a) const {
    return offsets_[a + 1] - offsets_[a];
  }
  // A_u: number of actions performed by `u`.
  std::uint32_t actions_performed(NodeId u) const { return performed_[u]; }

  // Log restricted to the listed actions (external ids; unknown ids ignored).
  ActionLog subset(std::span<const ActionId> actions) const;

 private:
  std::vector<ActionId> action_ids_;
  std::vector<LogEntry> entries_;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::uint32_t> performed_;
};

// Sorts and validates raw tuples against `graph`.
ActionLog make_action_log(std::vector<RawLogEntry> raw, const SocialGraph& graph);

// Propagation graph G(a). Local indices follow chronological order, so they
// are already a topological order.
struct PropagationDag {
  ActionIndex action = 0;
  std::vector<NodeId> nodes;
  std::vector<Timestamp> times;
  // Local indices of N_in(u, a), ascending.
  std::vector<std::vector<std::uint32_t>> parents;

  std::size_t size() const { return nodes.size(); }
  std::size_t in_degree(std::uint32_t local) const {
    return parents[local].size();
  }
  std::optional<std::uint32_t> local_index(NodeId node) const;
};

// Reusable scratch space for building many DAGs over the same graph.
class DagBuilder {
 public:
  explicit DagBuilder(const SocialGraph& graph);

  PropagationDag build(const ActionLog& log, ActionIndex a);

 private:
  const SocialGraph& graph_;
  std::vector<std::int32_t> local_of_;
};

// Throws NotFoundError for an unknown action.
PropagationDag build_propagation_dag(const ActionLog& log,
                                     const SocialGraph& graph, ActionId action);

std::vector<NodeId> extract_initiators(const PropagationDag& dag);

struct TrainTestSplit {
  std::vector<ActionId> train;  // ascending
  std::vector<ActionId> test;   // ascending
};

// Ranks actions by descending propagation size (ties: ascending action id)
// and moves every fifth rank to the test set.
TrainTestSplit split_train_test(const ActionLog& log);

// Mean propagation delays and user influenceability.
class TemporalParams {
 public:
  TemporalParams() = default;
  TemporalParams(std::vector<double> tau_by_edge, std::vector<double> infl,
                 double global_tau)
      : tau_(std::move(tau_by_edge)), infl_(std::move(infl)),
        global_tau_(global_tau) {}

  // Absent when the edge was never observed in a propagation.
  std::optional<double> tau(EdgeIndex e) const {
    if (e >= tau_.size() || tau_[e] <= 0.0) return std::nullopt;
    return tau_[e];
  }
  double tau_or_global(EdgeIndex e) const {
    return tau(e).value_or(global_tau_);
  }
  double infl(NodeId u) const { return u < infl_.size() ? infl_[u] : 0.0; }
  double global_tau() const { return global_tau_; }
  std::span<const double> tau_by_edge() const { return tau_; }

 private:
  std::vector<double> tau_;  // 0 = undefined
  std::vector<double> infl_;
  double global_tau_ = 0.0;
};

// Two passes: mean delay per edge, then the fraction of each user's actions
// that happened within tau of some parent.
TemporalParams learn_time_params(const ActionLog& log, const SocialGraph& graph);

// File formats: whitespace separated decimal fields, one record per line.
// Blank lines and lines starting with '#' are skipped.
SocialGraph load_social_graph(const std::filesystem::path& path);
ActionLog load_action_log(const std::filesystem::path& path,
                          const SocialGraph& graph);
std::vector<std::int64_t> load_id_list(const std::filesystem::path& path);

void write_social_graph(const std::filesystem::path& path,
                        const SocialGraph& graph);
void write_action_log(const std::filesystem::path& path, const ActionLog& log,
                      const SocialGraph& graph);
void write_id_list(const std::filesystem::path& path,
                   std::span<const std::int64_t> ids);

}  // namespace credist

#endif  // CREDIST_CORE_MODEL_HPP_
