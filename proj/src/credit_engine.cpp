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

#include "credist/credit_engine.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "credist/errors.hpp"
#include "text_io.hpp"

namespace credist {

DirectCreditPolicy DirectCreditPolicy::time_decay(const TemporalParams& params,
                                                  const SocialGraph& graph) {
  DirectCreditPolicy p;
  p.kind_ = CreditPolicyKind::kTimeDecay;
  p.params_ = &params;
  p.graph_ = &graph;
  return p;
}

double DirectCreditPolicy::operator()(const PropagationDag& dag,
                                      std::uint32_t parent,
                                      std::uint32_t child) const {
  const auto in_degree = static_cast<double>(dag.in_degree(child));
  if (kind_ == CreditPolicyKind::kUniform) return 1.0 / in_degree;

  const NodeId u = dag.nodes[child];
  const double infl = params_->infl(u);
  if (infl <= 0.0) return 0.0;
  const EdgeIndex e = graph_->edge_index(dag.nodes[parent], u);
  const double tau = params_->tau_or_global(e);
  if (tau <= 0.0) return 0.0;
  const auto delay = static_cast<double>(dag.times[child] - dag.times[parent]);
  return infl / in_degree * std::exp(-delay / tau);
}

double direct_credit(const DirectCreditPolicy& policy, const PropagationDag& dag,
                     NodeId v, NodeId u) {
  const auto lv = dag.local_index(v);
  const auto lu = dag.local_index(u);
  if (!lv || !lu ||
      !std::binary_search(dag.parents[*lu].begin(), dag.parents[*lu].end(),
                          *lv)) {
    throw ContractViolation("direct_credit: not an edge of the propagation DAG");
  }
  return policy(dag, *lv, *lu);
}

std::optional<CreditStore::Slot> CreditStore::find_slot(NodeId u,
                                                        ActionIndex a) const {
  const auto& slots = node_slots_[u];
  auto it = std::lower_bound(
      slots.begin(), slots.end(), a,
      [&](Slot s, ActionIndex action) { return slot_action_[s] < action; });
  if (it == slots.end() || slot_action_[*it] != a) return std::nullopt;
  return *it;
}

namespace {

const Credit* find_credit(std::span<const Credit> list, std::uint32_t local) {
  auto it = std::lower_bound(
      list.begin(), list.end(), local,
      [](const Credit& c, std::uint32_t l) { return c.local < l; });
  if (it == list.end() || it->local != local) return nullptr;
  return &*it;
}

}  // namespace

double CreditStore::credit(NodeId v, NodeId u, ActionIndex a) const {
  const auto sv = find_slot(v, a);
  const auto su = find_slot(u, a);
  if (!sv || !su) return 0.0;
  const Credit* c = find_credit(descendants_[*sv], local_of(*su));
  return c != nullptr ? c->value : 0.0;
}

std::size_t CreditStore::num_entries() const {
  std::size_t n = 0;
  for (const auto& list : descendants_) n += list.size();
  return n;
}

CreditStore CreditStore::subset(std::span<const ActionIndex> actions) const {
  std::vector<ActionIndex> keep(actions.begin(), actions.end());
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());

  CreditStore out;
  out.performed_ = performed_;
  out.removed_ = removed_;
  out.node_slots_.resize(num_nodes());
  for (ActionIndex a : keep) {
    const auto fresh = static_cast<ActionIndex>(out.action_ids_.size());
    out.action_ids_.push_back(action_ids_[a]);
    for (Slot s = action_begin_[a]; s < action_begin_[a + 1]; ++s) {
      out.node_slots_[members_[s]].push_back(out.members_.size());
      out.members_.push_back(members_[s]);
      out.slot_action_.push_back(fresh);
      out.descendants_.push_back(descendants_[s]);
      out.ancestors_.push_back(ancestors_[s]);
    }
    out.action_begin_.push_back(out.members_.size());
  }
  return out;
}

double SetCreditStore::get(const CreditStore& uc, NodeId x,
                           ActionIndex a) const {
  const auto s = uc.find_slot(x, a);
  return s ? values_[*s] : 0.0;
}

std::size_t SetCreditStore::num_nonzero() const {
  return static_cast<std::size_t>(
      std::count_if(values_.begin(), values_.end(),
                    [](double v) { return v != 0.0; }));
}

CreditStore scan(const ActionLog& log, const SocialGraph& graph,
                 const DirectCreditPolicy& policy, TruncationThreshold lambda) {
  if (log.num_nodes() != graph.num_nodes()) {
    throw ContractViolation("scan: action log was built for a different graph");
  }
  if (!(lambda.lambda >= 0.0)) {
    throw ContractViolation("scan: truncation threshold must be >= 0");
  }
  const auto entries = log.entries();
  if (!std::is_sorted(entries.begin(), entries.end(),
                      [](const LogEntry& a, const LogEntry& b) {
                        return std::tie(a.action, a.time) <
                               std::tie(b.action, b.time);
                      })) {
    throw ContractViolation("scan: action log is not sorted by (action, time)");
  }

  CreditStore store;
  const std::size_t n = graph.num_nodes();
  store.action_ids_.assign(log.action_ids().begin(), log.action_ids().end());
  store.performed_.assign(n, 0);
  store.removed_.assign(n, 0);
  store.node_slots_.resize(n);
  store.members_.reserve(log.size());
  store.slot_action_.reserve(log.size());
  store.descendants_.resize(log.size());
  store.ancestors_.resize(log.size());
  store.action_begin_.reserve(log.num_actions() + 1);

  DagBuilder builder(graph);
  std::vector<double> acc;
  std::vector<std::uint32_t> touched;
  for (ActionIndex a = 0; a < log.num_actions(); ++a) {
    const PropagationDag dag = builder.build(log, a);
    const std::size_t base = store.members_.size();
    for (std::uint32_t i = 0; i < dag.size(); ++i) {
      store.node_slots_[dag.nodes[i]].push_back(base + i);
      store.members_.push_back(dag.nodes[i]);
      store.slot_action_.push_back(a);
      ++store.performed_[dag.nodes[i]];
    }
    store.action_begin_.push_back(store.members_.size());

    acc.assign(dag.size(), 0.0);
    for (std::uint32_t i = 0; i < dag.size(); ++i) {
      touched.clear();
      const auto add = [&](std::uint32_t w, double inc) {
        if (acc[w] == 0.0) touched.push_back(w);
        acc[w] += inc;
      };
      for (std::uint32_t v : dag.parents[i]) {
        const double gamma = policy(dag, v, i);
        if (gamma <= 0.0) continue;
        if (gamma >= lambda.lambda) add(v, gamma);
        for (const Credit& c : store.ancestors_[base + v]) {
          const double inc = c.value * gamma;
          if (inc > 0.0 && inc >= lambda.lambda) add(c.local, inc);
        }
      }
      std::sort(touched.begin(), touched.end());
      auto& column = store.ancestors_[base + i];
      column.reserve(touched.size());
      for (std::uint32_t w : touched) {
        column.push_back({w, acc[w]});
        store.descendants_[base + w].push_back({i, acc[w]});
        acc[w] = 0.0;
      }
    }
  }
  return store;
}

namespace {

// Gamma^W_{S,i} for every local node i, in topological order.
std::vector<double> set_credits(const PropagationDag& dag,
                                const DirectCreditPolicy& policy,
                                const std::vector<char>& is_seed,
                                const std::vector<char>& inside) {
  std::vector<double> g(dag.size(), 0.0);
  for (std::uint32_t i = 0; i < dag.size(); ++i) {
    if (!inside[i]) continue;
    if (is_seed[i]) {
      g[i] = 1.0;
      continue;
    }
    double sum = 0.0;
    for (std::uint32_t j : dag.parents[i]) {
      if (g[j] != 0.0) sum += g[j] * policy(dag, j, i);
    }
    g[i] = sum;
  }
  return g;
}

std::vector<char> membership(const PropagationDag& dag,
                             std::span<const NodeId> nodes) {
  std::vector<char> in(dag.size(), 0);
  for (std::uint32_t i = 0; i < dag.size(); ++i) {
    in[i] = std::find(nodes.begin(), nodes.end(), dag.nodes[i]) != nodes.end();
  }
  return in;
}

}  // namespace

double total_credit_node_oracle(const PropagationDag& dag,
                                const DirectCreditPolicy& policy, NodeId v,
                                NodeId u) {
  const auto lv = dag.local_index(v);
  const auto lu = dag.local_index(u);
  if (!lv || !lu) {
    throw ContractViolation("total_credit_node_oracle: node did not perform");
  }
  std::vector<double> g(dag.size(), 0.0);
  g[*lv] = 1.0;
  for (std::uint32_t i = *lv + 1; i <= *lu; ++i) {
    for (std::uint32_t j : dag.parents[i]) {
      if (g[j] != 0.0) g[i] += g[j] * policy(dag, j, i);
    }
  }
  return g[*lu];
}

double total_credit_set_oracle(const PropagationDag& dag,
                               const DirectCreditPolicy& policy,
                               std::span<const NodeId> seeds, NodeId u,
                               std::optional<std::span<const NodeId>> within) {
  const auto lu = dag.local_index(u);
  if (!lu) return 0.0;
  const std::vector<char> inside =
      within ? membership(dag, *within) : std::vector<char>(dag.size(), 1);
  return set_credits(dag, policy, membership(dag, seeds), inside)[*lu];
}

double sigma_cd_oracle(const ActionLog& log, const SocialGraph& graph,
                       const DirectCreditPolicy& policy,
                       std::span<const NodeId> seeds) {
  if (seeds.empty()) return 0.0;
  DagBuilder builder(graph);
  std::vector<double> kappa_sum(graph.num_nodes(), 0.0);
  for (ActionIndex a = 0; a < log.num_actions(); ++a) {
    const PropagationDag dag = builder.build(log, a);
    const auto g = set_credits(dag, policy, membership(dag, seeds),
                               std::vector<char>(dag.size(), 1));
    for (std::uint32_t i = 0; i < dag.size(); ++i) kappa_sum[dag.nodes[i]] += g[i];
  }
  double sigma = 0.0;
  for (NodeId u = 0; u < graph.num_nodes(); ++u) {
    if (log.actions_performed(u) > 0) {
      sigma += kappa_sum[u] / log.actions_performed(u);
    }
  }
  return sigma;
}

void write_credit_store(const std::filesystem::path& path,
                        const CreditStore& store, const SocialGraph& graph) {
  auto out = detail::open_output(path);
  for (ActionIndex a = 0; a < store.num_actions(); ++a) {
    for (std::uint32_t i = 0; i < store.action_size(a); ++i) {
      const auto s = store.slot(a, i);
      for (const Credit& c : store.descendants(s)) {
        out << graph.user_id(store.member(s)) << '\t'
            << graph.user_id(store.member(store.slot(a, c.local))) << '\t'
            << store.action_id(a) << '\t' << detail::format_double(c.value)
            << '\n';
      }
    }
  }
}

}  // namespace credist
