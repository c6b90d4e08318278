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

#include "credist/core_model.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <tuple>

#include "credist/errors.hpp"
#include "text_io.hpp"

namespace credist {

SocialGraph SocialGraph::from_edges(
    std::span<const std::pair<UserId, UserId>> edges,
    std::span<const UserId> extra_users) {
  SocialGraph g;
  g.user_ids_.reserve(edges.size() * 2 + extra_users.size());
  for (const auto& [src, dst] : edges) {
    if (src == dst) {
      throw ValidationError("self-loop on user " + std::to_string(src));
    }
    g.user_ids_.push_back(src);
    g.user_ids_.push_back(dst);
  }
  g.user_ids_.insert(g.user_ids_.end(), extra_users.begin(), extra_users.end());
  std::sort(g.user_ids_.begin(), g.user_ids_.end());
  g.user_ids_.erase(std::unique(g.user_ids_.begin(), g.user_ids_.end()),
                    g.user_ids_.end());
  g.user_ids_.shrink_to_fit();

  std::vector<std::pair<NodeId, NodeId>> dense;
  dense.reserve(edges.size());
  for (const auto& [src, dst] : edges) {
    dense.emplace_back(*g.find(src), *g.find(dst));
  }
  std::sort(dense.begin(), dense.end());
  dense.erase(std::unique(dense.begin(), dense.end()), dense.end());

  const std::size_t n = g.user_ids_.size();
  g.out_offsets_.assign(n + 1, 0);
  g.in_offsets_.assign(n + 1, 0);
  for (const auto& [v, u] : dense) {
    ++g.out_offsets_[v + 1];
    ++g.in_offsets_[u + 1];
  }
  std::partial_sum(g.out_offsets_.begin(), g.out_offsets_.end(),
                   g.out_offsets_.begin());
  std::partial_sum(g.in_offsets_.begin(), g.in_offsets_.end(),
                   g.in_offsets_.begin());
  g.out_targets_.resize(dense.size());
  g.in_sources_.resize(dense.size());
  g.in_edge_ids_.resize(dense.size());
  std::vector<std::size_t> fill(g.in_offsets_.begin(), g.in_offsets_.end() - 1);
  for (EdgeIndex e = 0; e < dense.size(); ++e) {
    const auto [v, u] = dense[e];
    g.out_targets_[e] = u;
    const std::size_t slot = fill[u]++;
    g.in_sources_[slot] = v;
    g.in_edge_ids_[slot] = e;
  }
  return g;
}

std::optional<NodeId> SocialGraph::find(UserId user) const {
  auto it = std::lower_bound(user_ids_.begin(), user_ids_.end(), user);
  if (it == user_ids_.end() || *it != user) return std::nullopt;
  return static_cast<NodeId>(it - user_ids_.begin());
}

NodeId SocialGraph::node(UserId user) const {
  if (auto n = find(user)) return *n;
  throw NotFoundError("user " + std::to_string(user) + " is not in the graph");
}

EdgeIndex SocialGraph::edge_index(NodeId v, NodeId u) const {
  if (v >= num_nodes()) return kNoEdge;
  auto first = out_targets_.begin() + static_cast<std::ptrdiff_t>(out_offsets_[v]);
  auto last = out_targets_.begin() + static_cast<std::ptrdiff_t>(out_offsets_[v + 1]);
  auto it = std::lower_bound(first, last, u);
  if (it == last || *it != u) return kNoEdge;
  return static_cast<EdgeIndex>(it - out_targets_.begin());
}

NodeId SocialGraph::edge_source(EdgeIndex e) const {
  auto it = std::upper_bound(out_offsets_.begin(), out_offsets_.end(), e);
  return static_cast<NodeId>(it - out_offsets_.begin() - 1);
}

ActionLog::ActionLog(std::vector<ActionId> action_ids,
                     std::vector<LogEntry> entries, std::size_t num_nodes)
    : action_ids_(std::move(action_ids)), entries_(std::move(entries)) {
  if (!std::is_sorted(action_ids_.begin(), action_ids_.end()) ||
      std::adjacent_find(action_ids_.begin(), action_ids_.end()) !=
          action_ids_.end()) {
    throw ContractViolation("action ids must be strictly ascending");
  }
  const auto key = [](const LogEntry& e) {
    return std::tie(e.action, e.time, e.user);
  };
  if (!std::is_sorted(entries_.begin(), entries_.end(),
                      [&](const LogEntry& a, const LogEntry& b) {
                        return key(a) < key(b);
                      })) {
    throw ContractViolation("action log must be sorted by (action, time, user)");
  }
  performed_.assign(num_nodes, 0);
  offsets_.assign(action_ids_.size() + 1, 0);
  for (const LogEntry& e : entries_) {
    if (e.action >= action_ids_.size()) {
      throw ContractViolation("log entry refers to an unknown action index");
    }
    if (e.user >= num_nodes) {
      throw ContractViolation("log entry refers to an unknown node");
    }
    ++offsets_[e.action + 1];
    ++performed_[e.user];
  }
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());

  std::vector<ActionIndex> last_seen(num_nodes, static_cast<ActionIndex>(-1));
  for (const LogEntry& e : entries_) {
    if (last_seen[e.user] == e.action) {
      throw ValidationError("user performs action " +
                            std::to_string(action_ids_[e.action]) +
                            " more than once");
    }
    last_seen[e.user] = e.action;
  }
}

std::optional<ActionIndex> ActionLog::find_action(ActionId action) const {
  auto it = std::lower_bound(action_ids_.begin(), action_ids_.end(), action);
  if (it == action_ids_.end() || *it != action) return std::nullopt;
  return static_cast<ActionIndex>(it - action_ids_.begin());
}

ActionLog ActionLog::subset(std::span<const ActionId> actions) const {
  std::vector<ActionIndex> keep;
  keep.reserve(actions.size());
  for (ActionId id : actions) {
    if (auto a = find_action(id)) keep.push_back(*a);
  }
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());

  std::vector<ActionId> ids;
  std::vector<LogEntry> entries;
  ids.reserve(keep.size());
  for (ActionIndex a : keep) {
    const auto fresh = static_cast<ActionIndex>(ids.size());
    ids.push_back(action_ids_[a]);
    for (LogEntry e : performers(a)) {
      e.action = fresh;
      entries.push_back(e);
    }
  }
  return ActionLog(std::move(ids), std::move(entries), num_nodes());
}

ActionLog make_action_log(std::vector<RawLogEntry> raw,
                          const SocialGraph& graph) {
  std::vector<ActionId> ids;
  ids.reserve(raw.size());
  for (const RawLogEntry& r : raw) ids.push_back(r.action);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

  std::vector<LogEntry> entries;
  entries.reserve(raw.size());
  for (const RawLogEntry& r : raw) {
    auto node = graph.find(r.user);
    if (!node) {
      throw ValidationError("log user " + std::to_string(r.user) +
                            " is not in the social graph");
    }
    auto a = std::lower_bound(ids.begin(), ids.end(), r.action) - ids.begin();
    entries.push_back({*node, static_cast<ActionIndex>(a), r.time});
  }
  std::sort(entries.begin(), entries.end(),
            [](const LogEntry& a, const LogEntry& b) {
              return std::tie(a.action, a.time, a.user) <
                     std::tie(b.action, b.time, b.user);
            });
  return ActionLog(std::move(ids), std::move(entries), graph.num_nodes());
}

std::optional<std::uint32_t> PropagationDag::local_index(NodeId node) const {
  for (std::uint32_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i] == node) return i;
  }
  return std::nullopt;
}

DagBuilder::DagBuilder(const SocialGraph& graph)
    : graph_(graph), local_of_(graph.num_nodes(), -1) {}

PropagationDag DagBuilder::build(const ActionLog& log, ActionIndex a) {
  const auto performers = log.performers(a);
  PropagationDag dag;
  dag.action = a;
  dag.nodes.reserve(performers.size());
  dag.times.reserve(performers.size());
  dag.parents.resize(performers.size());
  for (std::uint32_t i = 0; i < performers.size(); ++i) {
    dag.nodes.push_back(performers[i].user);
    dag.times.push_back(performers[i].time);
    local_of_[performers[i].user] = static_cast<std::int32_t>(i);
  }
  for (std::uint32_t i = 0; i < performers.size(); ++i) {
    const NodeId u = dag.nodes[i];
    auto& parents = dag.parents[i];
    if (graph_.in_degree(u) <= i) {
      for (NodeId v : graph_.in_neighbors(u)) {
        const std::int32_t j = local_of_[v];
        if (j >= 0 && dag.times[static_cast<std::size_t>(j)] < dag.times[i]) {
          parents.push_back(static_cast<std::uint32_t>(j));
        }
      }
      std::sort(parents.begin(), parents.end());
    } else {
      for (std::uint32_t j = 0; j < i && dag.times[j] < dag.times[i]; ++j) {
        if (graph_.has_edge(dag.nodes[j], u)) parents.push_back(j);
      }
    }
  }
  for (NodeId u : dag.nodes) local_of_[u] = -1;
  return dag;
}

PropagationDag build_propagation_dag(const ActionLog& log,
                                     const SocialGraph& graph,
                                     ActionId action) {
  auto a = log.find_action(action);
  if (!a) {
    throw NotFoundError("action " + std::to_string(action) +
                        " is not in the log");
  }
  DagBuilder builder(graph);
  return builder.build(log, *a);
}

std::vector<NodeId> extract_initiators(const PropagationDag& dag) {
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < dag.size(); ++i) {
    if (dag.parents[i].empty()) out.push_back(dag.nodes[i]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

TrainTestSplit split_train_test(const ActionLog& log) {
  std::vector<ActionIndex> ranked(log.num_actions());
  std::iota(ranked.begin(), ranked.end(), 0);
  std::stable_sort(ranked.begin(), ranked.end(),
                   [&](ActionIndex a, ActionIndex b) {
                     return log.propagation_size(a) > log.propagation_size(b);
                   });
  TrainTestSplit split;
  for (std::size_t rank = 1; rank <= ranked.size(); ++rank) {
    const ActionId id = log.action_id(ranked[rank - 1]);
    (rank % 5 == 0 ? split.test : split.train).push_back(id);
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

TemporalParams learn_time_params(const ActionLog& log,
                                 const SocialGraph& graph) {
  std::vector<double> delay_sum(graph.num_edges(), 0.0);
  std::vector<std::uint32_t> delay_count(graph.num_edges(), 0);
  double global_sum = 0.0;
  std::size_t global_count = 0;

  DagBuilder builder(graph);
  for (ActionIndex a = 0; a < log.num_actions(); ++a) {
    const PropagationDag dag = builder.build(log, a);
    for (std::size_t i = 0; i < dag.size(); ++i) {
      for (std::uint32_t j : dag.parents[i]) {
        const EdgeIndex e = graph.edge_index(dag.nodes[j], dag.nodes[i]);
        const auto delay = static_cast<double>(dag.times[i] - dag.times[j]);
        delay_sum[e] += delay;
        ++delay_count[e];
        global_sum += delay;
        ++global_count;
      }
    }
  }
  std::vector<double> tau(graph.num_edges(), 0.0);
  for (EdgeIndex e = 0; e < tau.size(); ++e) {
    if (delay_count[e] > 0) tau[e] = delay_sum[e] / delay_count[e];
  }
  const double global_tau =
      global_count > 0 ? global_sum / static_cast<double>(global_count) : 0.0;

  std::vector<std::uint32_t> influenced(graph.num_nodes(), 0);
  for (ActionIndex a = 0; a < log.num_actions(); ++a) {
    const PropagationDag dag = builder.build(log, a);
    for (std::size_t i = 0; i < dag.size(); ++i) {
      const bool within = std::any_of(
          dag.parents[i].begin(), dag.parents[i].end(), [&](std::uint32_t j) {
            const EdgeIndex e = graph.edge_index(dag.nodes[j], dag.nodes[i]);
            return static_cast<double>(dag.times[i] - dag.times[j]) <= tau[e];
          });
      if (within) ++influenced[dag.nodes[i]];
    }
  }
  std::vector<double> infl(graph.num_nodes(), 0.0);
  for (NodeId u = 0; u < infl.size(); ++u) {
    if (log.actions_performed(u) > 0) {
      infl[u] = static_cast<double>(influenced[u]) / log.actions_performed(u);
    }
  }
  return TemporalParams(std::move(tau), std::move(infl), global_tau);
}

SocialGraph load_social_graph(const std::filesystem::path& path) {
  std::vector<std::pair<UserId, UserId>> edges;
  detail::for_each_record(path, 2, [&](std::size_t line, const auto& fields) {
    const auto src = detail::field_as<UserId>(path, line, fields[0]);
    const auto dst = detail::field_as<UserId>(path, line, fields[1]);
    if (src == dst) {
      throw ValidationError(path.string() + ":" + std::to_string(line) +
                            ": self-loop on user " + std::to_string(src));
    }
    edges.emplace_back(src, dst);
  });
  return SocialGraph::from_edges(edges);
}

ActionLog load_action_log(const std::filesystem::path& path,
                          const SocialGraph& graph) {
  std::vector<RawLogEntry> raw;
  detail::for_each_record(path, 3, [&](std::size_t line, const auto& fields) {
    raw.push_back({detail::field_as<UserId>(path, line, fields[0]),
                   detail::field_as<ActionId>(path, line, fields[1]),
                   detail::field_as<Timestamp>(path, line, fields[2])});
  });
  return make_action_log(std::move(raw), graph);
}

std::vector<std::int64_t> load_id_list(const std::filesystem::path& path) {
  std::vector<std::int64_t> ids;
  detail::for_each_record(path, 1, [&](std::size_t line, const auto& fields) {
    ids.push_back(detail::field_as<std::int64_t>(path, line, fields[0]));
  });
  return ids;
}

void write_social_graph(const std::filesystem::path& path,
                        const SocialGraph& graph) {
  auto out = detail::open_output(path);
  for (NodeId v = 0; v < graph.num_nodes(); ++v) {
    for (NodeId u : graph.out_neighbors(v)) {
      out << graph.user_id(v) << '\t' << graph.user_id(u) << '\n';
    }
  }
}

void write_action_log(const std::filesystem::path& path, const ActionLog& log,
                      const SocialGraph& graph) {
  auto out = detail::open_output(path);
  for (const LogEntry& e : log.entries()) {
    out << graph.user_id(e.user) << '\t' << log.action_id(e.action) << '\t'
        << e.time << '\n';
  }
}

void write_id_list(const std::filesystem::path& path,
                   std::span<const std::int64_t> ids) {
  auto out = detail::open_output(path);
  for (std::int64_t id : ids) out << id << '\n';
}

}  // namespace credist
