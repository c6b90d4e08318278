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

// Reference implementations used by the tests. They work on raw user ids and
// log tuples only and never call into the library, so agreement with the
// library is meaningful.

#ifndef CREDIST_TESTS_SUPPORT_ORACLES_HPP_
#define CREDIST_TESTS_SUPPORT_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

namespace oracle {

using Id = std::int64_t;
using Edge = std::pair<Id, Id>;

struct Tuple {
  Id user;
  Id action;
  std::int64_t time;
};

struct Instance {
  std::vector<Id> users;
  std::vector<Edge> edges;
  std::vector<Tuple> log;

  std::set<Id> actions() const {
    std::set<Id> out;
    for (const auto& t : log) out.insert(t.action);
    return out;
  }
  int performed(Id user) const {
    int n = 0;
    for (const auto& t : log) n += t.user == user;
    return n;
  }
};

struct Dag {
  std::map<Id, std::int64_t> time;
  std::map<Id, std::vector<Id>> parents;  // includes every performer
};

inline Dag build_dag(const Instance& inst, Id action) {
  Dag dag;
  for (const auto& t : inst.log) {
    if (t.action == action) dag.time[t.user] = t.time;
  }
  for (const auto& [user, time] : dag.time) dag.parents[user];
  for (const auto& [v, u] : inst.edges) {
    auto tv = dag.time.find(v);
    auto tu = dag.time.find(u);
    if (tv != dag.time.end() && tu != dag.time.end() && tv->second < tu->second) {
      dag.parents[u].push_back(v);
    }
  }
  return dag;
}

struct Params {
  std::map<Edge, double> tau;
  std::map<Id, double> infl;
  double global_tau = 0.0;
};

inline Params learn_params(const Instance& inst) {
  Params p;
  std::map<Edge, std::pair<double, int>> acc;
  double total = 0.0;
  int count = 0;
  for (Id a : inst.actions()) {
    const Dag dag = build_dag(inst, a);
    for (const auto& [u, ps] : dag.parents) {
      for (Id v : ps) {
        const double d = static_cast<double>(dag.time.at(u) - dag.time.at(v));
        acc[{v, u}].first += d;
        acc[{v, u}].second += 1;
        total += d;
        ++count;
      }
    }
  }
  for (const auto& [e, sc] : acc) p.tau[e] = sc.first / sc.second;
  p.global_tau = count > 0 ? total / count : 0.0;
  std::map<Id, std::pair<int, int>> hits;
  for (Id a : inst.actions()) {
    const Dag dag = build_dag(inst, a);
    for (const auto& [u, ps] : dag.parents) {
      bool qualifies = false;
      for (Id v : ps) {
        const double d = static_cast<double>(dag.time.at(u) - dag.time.at(v));
        if (d <= p.tau.at({v, u})) qualifies = true;
      }
      hits[u].first += qualifies;
      hits[u].second += 1;
    }
  }
  for (const auto& [u, hc] : hits) {
    p.infl[u] = static_cast<double>(hc.first) / hc.second;
  }
  return p;
}

// gamma(dag, v, u) for an existing DAG edge v -> u.
using Gamma = std::function<double(const Dag&, Id, Id)>;

inline Gamma uniform_gamma() {
  return [](const Dag& dag, Id, Id u) {
    return 1.0 / static_cast<double>(dag.parents.at(u).size());
  };
}

inline Gamma decay_gamma(const Params& p) {
  return [p](const Dag& dag, Id v, Id u) {
    auto it = p.tau.find({v, u});
    const double tau = it != p.tau.end() ? it->second : p.global_tau;
    auto inf = p.infl.find(u);
    const double infl = inf != p.infl.end() ? inf->second : 0.0;
    if (tau <= 0.0 || infl <= 0.0) return 0.0;
    const double dt = static_cast<double>(dag.time.at(u) - dag.time.at(v));
    return infl / static_cast<double>(dag.parents.at(u).size()) *
           std::exp(-dt / tau);
  };
}

// Credit of `u` towards the set `seeds`, summed over every path that starts at
// a seed, reaches `u`, stays inside `within` (when given) and meets no other
// seed on the way. Enumerates paths explicitly by depth-first search.
inline double set_credit(const Dag& dag, const Gamma& gamma,
                         const std::set<Id>& seeds, Id u,
                         const std::optional<std::set<Id>>& within = {}) {
  if (!dag.time.count(u)) return 0.0;
  const auto inside = [&](Id x) { return !within || within->count(x) > 0; };
  if (!inside(u)) return 0.0;
  if (seeds.count(u)) return 1.0;
  std::map<Id, std::vector<Id>> children;
  for (const auto& [c, ps] : dag.parents) {
    for (Id p : ps) children[p].push_back(c);
  }
  double total = 0.0;
  std::function<void(Id, double)> walk = [&](Id x, double product) {
    for (Id c : children[x]) {
      if (!inside(c) || seeds.count(c)) continue;
      const double w = product * gamma(dag, x, c);
      if (c == u) total += w;
      walk(c, w);
    }
  };
  for (Id s : seeds) {
    if (dag.time.count(s) && inside(s)) walk(s, 1.0);
  }
  return total;
}

inline double node_credit(const Dag& dag, const Gamma& gamma, Id v, Id u,
                          const std::optional<std::set<Id>>& within = {}) {
  return set_credit(dag, gamma, {v}, u, within);
}

// Spread of `seeds`: sum over users of the average credit they give to the
// set across the actions they performed.
inline double sigma(const Instance& inst, const Gamma& gamma,
                    const std::set<Id>& seeds) {
  if (seeds.empty()) return 0.0;
  std::map<Id, double> credit;
  for (Id a : inst.actions()) {
    const Dag dag = build_dag(inst, a);
    for (const auto& [u, t] : dag.time) {
      credit[u] += set_credit(dag, gamma, seeds, u);
    }
  }
  double s = 0.0;
  for (const auto& [u, c] : credit) s += c / inst.performed(u);
  return s;
}

// Direct transcription of the chronological scan with per-increment
// truncation. Returns credit[(v, u, action)].
inline std::map<std::tuple<Id, Id, Id>, double> truncated_scan(
    const Instance& inst, const Gamma& gamma, double lambda) {
  std::map<std::tuple<Id, Id, Id>, double> out;
  for (Id a : inst.actions()) {
    const Dag dag = build_dag(inst, a);
    std::vector<std::pair<std::int64_t, Id>> order;
    for (const auto& [u, t] : dag.time) order.push_back({t, u});
    std::sort(order.begin(), order.end());
    std::map<Id, int> rank;
    for (std::size_t i = 0; i < order.size(); ++i) rank[order[i].second] = i;
    std::map<Id, std::map<int, double>> column;  // u -> rank(w) -> credit
    for (const auto& [t, u] : order) {
      std::vector<Id> ps = dag.parents.at(u);
      std::sort(ps.begin(), ps.end(),
                [&](Id x, Id y) { return rank[x] < rank[y]; });
      std::map<int, double> acc;
      for (Id v : ps) {
        const double g = gamma(dag, v, u);
        if (g <= 0.0) continue;
        if (g >= lambda) acc[rank[v]] += g;
        for (const auto& [w, c] : column[v]) {
          const double inc = c * g;
          if (inc > 0.0 && inc >= lambda) acc[w] += inc;
        }
      }
      column[u] = acc;
      for (const auto& [w, c] : acc) out[{order[w].second, u, a}] = c;
    }
  }
  return out;
}

inline std::set<Id> reachable(const std::vector<Edge>& edges,
                              const std::set<Id>& seeds) {
  std::map<Id, std::vector<Id>> out;
  for (const auto& [v, u] : edges) out[v].push_back(u);
  std::set<Id> seen(seeds.begin(), seeds.end());
  std::queue<Id> q;
  for (Id s : seeds) q.push(s);
  while (!q.empty()) {
    Id x = q.front();
    q.pop();
    for (Id y : out[x]) {
      if (seen.insert(y).second) q.push(y);
    }
  }
  return seen;
}

// Best value of `f` over every k-subset of `pool`.
inline double exhaustive_max(const std::vector<Id>& pool, std::size_t k,
                             const std::function<double(const std::set<Id>&)>& f) {
  double best = 0.0;
  std::set<Id> current;
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    if (current.size() == k) {
      best = std::max(best, f(current));
      return;
    }
    for (std::size_t i = from; i < pool.size(); ++i) {
      current.insert(pool[i]);
      rec(i + 1);
      current.erase(pool[i]);
    }
  };
  rec(0);
  return best;
}

// Greedy on the oracle spread, ties to the smaller id.
inline std::vector<Id> naive_greedy(const std::vector<Id>& pool, std::size_t k,
                                    const std::function<double(const std::set<Id>&)>& f) {
  std::set<Id> chosen;
  std::vector<Id> order;
  double base = 0.0;
  for (std::size_t round = 0; round < k; ++round) {
    std::optional<Id> best;
    double best_gain = 0.0;
    for (Id x : pool) {
      if (chosen.count(x)) continue;
      std::set<Id> with = chosen;
      with.insert(x);
      const double gain = f(with) - base;
      if (!best || gain > best_gain) {
        best = x;
        best_gain = gain;
      }
    }
    chosen.insert(*best);
    order.push_back(*best);
    base += best_gain;
  }
  return order;
}

}  // namespace oracle

#endif  // CREDIST_TESTS_SUPPORT_ORACLES_HPP_
