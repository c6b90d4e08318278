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

#ifndef CREDIST_CREDIT_ENGINE_HPP_
#define CREDIST_CREDIT_ENGINE_HPP_

// Direct and total influence credits.
//
// A total credit Gamma_{v,u}(a) aggregates the direct credits along every
// v -> u path of the propagation DAG of action a. The log scan materializes
// all of them (above a truncation threshold) into a CreditStore; the
// *_oracle functions recompute single values from scratch and exist for
// verification.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "credist/core_model.hpp"

namespace credist {

enum class CreditPolicyKind { kUniform, kTimeDecay };

// How a user splits credit for an action among its DAG parents. Uniform gives
// 1/d_in(u,a) to every parent; time decay gives
// infl(u)/d_in(u,a) * exp(-(t(u,a) - t(v,a)) / tau_{v,u}).
class DirectCreditPolicy {
 public:
  static DirectCreditPolicy uniform() { return DirectCreditPolicy(); }
  // `params` and `graph` must outlive the policy.
  static DirectCreditPolicy time_decay(const TemporalParams& params,
                                       const SocialGraph& graph);

  CreditPolicyKind kind() const { return kind_; }

  // Credit from local node `child` to its parent `parent` in `dag`. The caller
  // guarantees the edge exists.
  double operator()(const PropagationDag& dag, std::uint32_t parent,
                    std::uint32_t child) const;

 private:
  DirectCreditPolicy() = default;

  CreditPolicyKind kind_ = CreditPolicyKind::kUniform;
  const TemporalParams* params_ = nullptr;
  const SocialGraph* graph_ = nullptr;
};

// Throws ContractViolation unless (v, u) is an edge of `dag`.
double direct_credit(const DirectCreditPolicy& policy, const PropagationDag& dag,
                     NodeId v, NodeId u);

struct TruncationThreshold {
  double lambda = 0.001;
};

struct Credit {
  std::uint32_t local;  // index of the other endpoint inside the action
  double value;

  friend bool operator==(const Credit&, const Credit&) = default;
};

// UC: sparse residual credits Gamma^{V-S}_{v,u}(a).
//
// Storage is organised by slot, one slot per (action, performer) pair. Each
// slot keeps the credits it receives from descendants and the credits it
// gives to ancestors, both sorted by local index, so a row UC[x][.][a] and a
// column UC[.][x][a] are each one contiguous list.
class CreditStore {
 public:
  using Slot = std::size_t;

  CreditStore() = default;

  std::size_t num_nodes() const { return performed_.size(); }
  std::size_t num_actions() const { return action_ids_.size(); }
  std::size_t num_slots() const { return members_.size(); }
  ActionId action_id(ActionIndex a) const { return action_ids_[a]; }

  // A_u over the scanned log.
  std::uint32_t actions_performed(NodeId u) const { return performed_[u]; }
  // Slots of `u`, ascending by action.
  std::span<const Slot> slots_of(NodeId u) const { return node_slots_[u]; }

  std::size_t action_size(ActionIndex a) const {
    return action_begin_[a + 1] - action_begin_[a];
  }
  Slot slot(ActionIndex a, std::uint32_t local) const {
    return action_begin_[a] + local;
  }
  std::optional<Slot> find_slot(NodeId u, ActionIndex a) const;
  NodeId member(Slot s) const { return members_[s]; }
  ActionIndex action_of(Slot s) const { return slot_action_[s]; }
  std::uint32_t local_of(Slot s) const {
    return static_cast<std::uint32_t>(s - action_begin_[slot_action_[s]]);
  }

  // Row UC[x][.][a]: credit x receives from each descendant.
  std::span<const Credit> descendants(Slot s) const { return descendants_[s]; }
  // Column UC[.][u][a]: credit u gives to each ancestor.
  std::span<const Credit> ancestors(Slot s) const { return ancestors_[s]; }

  // UC[v][u][a]; 0 when absent.
  double credit(NodeId v, NodeId u, ActionIndex a) const;
  // Number of stored (v, u, a) triples.
  std::size_t num_entries() const;

  bool removed(NodeId u) const { return removed_[u] != 0; }

  // Copy restricted to the given actions. A_u keeps the full-log counts so
  // normalisation is unchanged.
  CreditStore subset(std::span<const ActionIndex> actions) const;

  // Low-level mutation used by the seed selector.
  std::vector<Credit>& mutable_descendants(Slot s) { return descendants_[s]; }
  std::vector<Credit>& mutable_ancestors(Slot s) { return ancestors_[s]; }
  void mark_removed(NodeId u) { removed_[u] = 1; }

 private:
  friend CreditStore scan(const ActionLog&, const SocialGraph&,
                          const DirectCreditPolicy&, TruncationThreshold);

  std::vector<ActionId> action_ids_;
  std::vector<std::size_t> action_begin_{0};
  std::vector<NodeId> members_;
  std::vector<ActionIndex> slot_action_;
  std::vector<std::vector<Credit>> descendants_;
  std::vector<std::vector<Credit>> ancestors_;
  std::vector<std::uint32_t> performed_;
  std::vector<std::vector<Slot>> node_slots_;
  std::vector<std::uint8_t> removed_;
};

// SC: Gamma_{S,x}(a) for the current seed set, one value per slot.
class SetCreditStore {
 public:
  SetCreditStore() = default;
  explicit SetCreditStore(const CreditStore& uc) : values_(uc.num_slots(), 0.0) {}

  double get(CreditStore::Slot s) const { return values_[s]; }
  void set(CreditStore::Slot s, double v) { values_[s] = v; }
  // Gamma_{S,x}(a); 0 when x did not perform a.
  double get(const CreditStore& uc, NodeId x, ActionIndex a) const;
  std::size_t num_nonzero() const;

 private:
  std::vector<double> values_;
};

// Single chronological pass over the log. A credit increment is stored only
// when it is positive and at least lambda. Throws ContractViolation when the
// log does not match the graph.
CreditStore scan(const ActionLog& log, const SocialGraph& graph,
                 const DirectCreditPolicy& policy, TruncationThreshold lambda);

// Exact Gamma_{v,u}(a) by dynamic programming over `dag`, no truncation.
double total_credit_node_oracle(const PropagationDag& dag,
                                const DirectCreditPolicy& policy, NodeId v,
                                NodeId u);

// Exact Gamma^W_{S,u}(a). Paths are restricted to performers in `within`
// (all performers when absent); direct credits always use the full DAG.
double total_credit_set_oracle(const PropagationDag& dag,
                               const DirectCreditPolicy& policy,
                               std::span<const NodeId> seeds, NodeId u,
                               std::optional<std::span<const NodeId>> within =
                                   std::nullopt);

// Exact sigma_cd(S) = sum_u (1/A_u) sum_a Gamma_{S,u}(a).
double sigma_cd_oracle(const ActionLog& log, const SocialGraph& graph,
                       const DirectCreditPolicy& policy,
                       std::span<const NodeId> seeds);

// `v<TAB>u<TAB>action<TAB>credit` with external ids, ordered by action, then
// ancestor, then descendant in chronological order.
void write_credit_store(const std::filesystem::path& path,
                        const CreditStore& store, const SocialGraph& graph);

}  // namespace credist

#endif  // CREDIST_CREDIT_ENGINE_HPP_
