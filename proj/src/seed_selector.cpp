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

#include "credist/seed_selector.hpp"

#include <algorithm>
#include <queue>
#include <string>

#include "credist/errors.hpp"
#include "credist/parallel.hpp"
#include "text_io.hpp"

namespace credist {

double compute_mg(NodeId x, const CreditStore& uc, const SetCreditStore& sc) {
  if (uc.removed(x)) {
    throw ContractViolation("compute_mg: user is already a seed");
  }
  const std::uint32_t a_x = uc.actions_performed(x);
  if (a_x == 0) return 0.0;
  double mg = 0.0;
  for (CreditStore::Slot s : uc.slots_of(x)) {
    const ActionIndex a = uc.action_of(s);
    double mg_a = 1.0 / a_x;
    for (const Credit& c : uc.descendants(s)) {
      mg_a += c.value / uc.actions_performed(uc.member(uc.slot(a, c.local)));
    }
    mg += mg_a * (1.0 - sc.get(s));
  }
  return mg;
}

namespace {

void subtract(std::vector<Credit>& list, std::uint32_t local, double delta) {
  auto it = std::lower_bound(
      list.begin(), list.end(), local,
      [](const Credit& c, std::uint32_t l) { return c.local < l; });
  if (it != list.end() && it->local == local) it->value -= delta;
}

void prune(std::vector<Credit>& list, std::uint32_t removed_local) {
  std::erase_if(list, [&](const Credit& c) {
    return c.local == removed_local || c.value <= kCreditEpsilon;
  });
}

}  // namespace

void update_credits(NodeId x, CreditStore& uc, SetCreditStore& sc) {
  if (uc.removed(x)) {
    throw ContractViolation("update_credits: user is already a seed");
  }
  for (CreditStore::Slot s : uc.slots_of(x)) {
    const ActionIndex a = uc.action_of(s);
    const std::uint32_t lx = uc.local_of(s);
    // Snapshot of row UC[x][.][a] and column UC[.][x][a].
    const std::vector<Credit> row = std::move(uc.mutable_descendants(s));
    const std::vector<Credit> column = std::move(uc.mutable_ancestors(s));
    uc.mutable_descendants(s).clear();
    uc.mutable_ancestors(s).clear();

    const double sc_x = sc.get(s);
    for (const Credit& to_u : row) {
      const CreditStore::Slot su = uc.slot(a, to_u.local);
      auto& u_ancestors = uc.mutable_ancestors(su);
      for (const Credit& to_v : column) {
        const double delta = to_v.value * to_u.value;
        subtract(uc.mutable_descendants(uc.slot(a, to_v.local)), to_u.local,
                 delta);
        subtract(u_ancestors, to_v.local, delta);
      }
      sc.set(su, std::min(1.0, sc.get(su) + to_u.value * (1.0 - sc_x)));
      prune(u_ancestors, lx);
    }
    for (const Credit& to_v : column) {
      prune(uc.mutable_descendants(uc.slot(a, to_v.local)), lx);
    }
    sc.set(s, 1.0);
  }
  uc.mark_removed(x);
}

std::vector<NodeId> seed_candidates(const CreditStore& uc) {
  std::vector<NodeId> out;
  for (NodeId u = 0; u < uc.num_nodes(); ++u) {
    if (uc.actions_performed(u) > 0 && !uc.removed(u)) out.push_back(u);
  }
  return out;
}

namespace {

struct QueueEntry {
  NodeId node;
  double mg;
  std::size_t it;
};

// Max-heap on mg; equal gains pop the smaller id first.
struct QueueOrder {
  bool operator()(const QueueEntry& a, const QueueEntry& b) const {
    if (a.mg != b.mg) return a.mg < b.mg;
    return a.node > b.node;
  }
};

}  // namespace

SeedSelection select_seeds(CreditStore& uc, std::size_t k, unsigned threads) {
  const std::vector<NodeId> candidates = seed_candidates(uc);
  if (k > candidates.size()) {
    throw ValidationError("k = " + std::to_string(k) + " exceeds the " +
                          std::to_string(candidates.size()) +
                          " candidate users (short by " +
                          std::to_string(k - candidates.size()) + ")");
  }
  SeedSelection selection;
  if (k == 0) return selection;

  SetCreditStore sc(uc);
  std::vector<double> initial(candidates.size());
  parallel_for(candidates.size(), threads, [&](std::size_t i) {
    initial[i] = compute_mg(candidates[i], uc, sc);
  });
  std::vector<QueueEntry> heap;
  heap.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    heap.push_back({candidates[i], initial[i], 0});
  }
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, QueueOrder> queue(
      QueueOrder{}, std::move(heap));

  while (selection.seeds.size() < k) {
    QueueEntry top = queue.top();
    queue.pop();
    if (top.it == selection.seeds.size()) {
      selection.seeds.push_back(top.node);
      selection.gains.push_back(top.mg);
      selection.sigma += top.mg;
      update_credits(top.node, uc, sc);
    } else {
      top.mg = compute_mg(top.node, uc, sc);
      top.it = selection.seeds.size();
      queue.push(top);
    }
  }
  return selection;
}

double estimate_spread(const CreditStore& uc, std::span<const NodeId> seeds) {
  std::vector<ActionIndex> actions;
  for (NodeId x : seeds) {
    for (CreditStore::Slot s : uc.slots_of(x)) actions.push_back(uc.action_of(s));
  }
  CreditStore local = uc.subset(actions);
  SetCreditStore sc(local);
  double sigma = 0.0;
  for (NodeId x : seeds) {
    if (local.removed(x)) continue;  // repeated seed
    sigma += compute_mg(x, local, sc);
    update_credits(x, local, sc);
  }
  return sigma;
}

void write_seed_file(const std::filesystem::path& path,
                     const SeedSelection& selection, const SocialGraph& graph) {
  auto out = detail::open_output(path);
  double cumulative = 0.0;
  for (std::size_t i = 0; i < selection.seeds.size(); ++i) {
    cumulative += selection.gains[i];
    out << (i + 1) << '\t' << graph.user_id(selection.seeds[i]) << '\t'
        << detail::format_double(selection.gains[i]) << '\t'
        << detail::format_double(cumulative) << '\n';
  }
}

std::vector<UserId> load_seed_users(const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  std::vector<UserId> users;
  std::string line;
  std::vector<std::string_view> fields;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    detail::split_fields(line, fields);
    if (fields.empty() || fields.front().front() == '#') continue;
    std::string_view user_field;
    if (fields.size() == 1) {
      user_field = fields[0];
    } else if (fields.size() == 4) {
      user_field = fields[1];
    } else {
      throw ParseError(path.string(), line_no,
                       "expected a seed row (4 fields) or a single user id");
    }
    users.push_back(detail::field_as<UserId>(path, line_no, user_field));
  }
  return users;
}

}  // namespace credist
