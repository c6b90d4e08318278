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

#include "credist/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <random>
#include <string>

#include "credist/errors.hpp"
#include "credist/parallel.hpp"
#include "random_hash.hpp"
#include "text_io.hpp"

namespace credist {

EdgeProbGraph::EdgeProbGraph(const SocialGraph& graph, std::vector<double> probs)
    : graph_(&graph), probs_(std::move(probs)) {
  if (probs_.size() != graph.num_edges()) {
    throw ValidationError("edge probability count does not match the graph");
  }
  for (double p : probs_) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ValidationError("edge probability outside [0, 1]: " +
                            std::to_string(p));
    }
  }
}

double EdgeProbGraph::max_incoming_weight() const {
  double best = 0.0;
  for (NodeId u = 0; u < graph_->num_nodes(); ++u) {
    double sum = 0.0;
    for (EdgeIndex e : graph_->in_edges(u)) sum += probs_[e];
    best = std::max(best, sum);
  }
  return best;
}

EdgeProbGraph assign_wc(const SocialGraph& graph) {
  std::vector<double> probs(graph.num_edges());
  for (NodeId u = 0; u < graph.num_nodes(); ++u) {
    const double p = 1.0 / static_cast<double>(graph.in_degree(u));
    for (EdgeIndex e : graph.in_edges(u)) probs[e] = p;
  }
  return EdgeProbGraph(graph, std::move(probs));
}

EdgeProbGraph assign_tv(const SocialGraph& graph, std::uint64_t rng_seed) {
  static constexpr double kLevels[] = {0.1, 0.01, 0.001};
  std::mt19937_64 rng(rng_seed);
  std::uniform_int_distribution<int> pick(0, 2);
  std::vector<double> probs(graph.num_edges());
  for (double& p : probs) p = kLevels[pick(rng)];
  return EdgeProbGraph(graph, std::move(probs));
}

EdgeProbGraph assign_un(const SocialGraph& graph, double p) {
  return EdgeProbGraph(graph, std::vector<double>(graph.num_edges(), p));
}

double perturb_value(double p, double delta) {
  return std::clamp(p * (1.0 + delta), 0.0, 1.0);
}

EdgeProbGraph perturb_pt(const EdgeProbGraph& g, std::uint64_t rng_seed) {
  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> delta(-0.2, 0.2);
  std::vector<double> probs(g.probs().begin(), g.probs().end());
  for (double& p : probs) p = perturb_value(p, delta(rng));
  return EdgeProbGraph(g.graph(), std::move(probs));
}

EdgeProbGraph learn_lt_weights(const ActionLog& log, const SocialGraph& graph) {
  std::vector<double> count(graph.num_edges(), 0.0);
  DagBuilder builder(graph);
  for (ActionIndex a = 0; a < log.num_actions(); ++a) {
    const PropagationDag dag = builder.build(log, a);
    for (std::size_t i = 0; i < dag.size(); ++i) {
      for (std::uint32_t j : dag.parents[i]) {
        count[graph.edge_index(dag.nodes[j], dag.nodes[i])] += 1.0;
      }
    }
  }
  for (NodeId u = 0; u < graph.num_nodes(); ++u) {
    double total = 0.0;
    for (EdgeIndex e : graph.in_edges(u)) total += count[e];
    const double norm = std::max(total, 1.0);
    for (EdgeIndex e : graph.in_edges(u)) count[e] /= norm;
  }
  return EdgeProbGraph(graph, std::move(count));
}

EdgeProbGraph load_edge_probs(const std::filesystem::path& path,
                              const SocialGraph& graph) {
  std::vector<double> probs(graph.num_edges(), 0.0);
  detail::for_each_record(path, 3, [&](std::size_t line, const auto& fields) {
    const auto src = graph.find(detail::field_as<UserId>(path, line, fields[0]));
    const auto dst = graph.find(detail::field_as<UserId>(path, line, fields[1]));
    const EdgeIndex e = (src && dst) ? graph.edge_index(*src, *dst) : kNoEdge;
    if (e == kNoEdge) {
      throw ValidationError(path.string() + ":" + std::to_string(line) +
                            ": edge is not in the social graph");
    }
    probs[e] = detail::field_as<double>(path, line, fields[2]);
  });
  return EdgeProbGraph(graph, std::move(probs));
}

void write_edge_probs(const std::filesystem::path& path, const EdgeProbGraph& g) {
  auto out = detail::open_output(path);
  const SocialGraph& graph = g.graph();
  for (NodeId v = 0; v < graph.num_nodes(); ++v) {
    for (NodeId u : graph.out_neighbors(v)) {
      out << graph.user_id(v) << '\t' << graph.user_id(u) << '\t'
          << detail::format_double(g.prob(graph.edge_index(v, u))) << '\n';
    }
  }
}

namespace {

// Per-worker buffers for repeated trials.
class TrialRunner {
 public:
  explicit TrialRunner(const EdgeProbGraph& g)
      : g_(g), active_(g.graph().num_nodes(), 0),
        weight_(g.graph().num_nodes(), 0.0),
        step_mark_(g.graph().num_nodes(), 0) {}

  std::size_t run(std::span<const NodeId> seeds, CascadeModel model,
                  std::uint64_t rng_seed, std::uint64_t trial) {
    const std::uint64_t stream = detail::stream_key(rng_seed, trial);
    const SocialGraph& graph = g_.graph();
    frontier_.clear();
    activated_.clear();
    weighted_.clear();
    for (NodeId s : seeds) {
      if (!active_[s]) {
        active_[s] = 1;
        frontier_.push_back(s);
        activated_.push_back(s);
      }
    }
    std::sort(frontier_.begin(), frontier_.end());
    // Activations found while processing one step become visible next step.
    while (!frontier_.empty()) {
      ++step_;
      next_.clear();
      touched_.clear();
      for (NodeId v : frontier_) {
        const auto targets = graph.out_neighbors(v);
        const EdgeIndex first = graph.out_edge_begin(v);
        for (std::size_t i = 0; i < targets.size(); ++i) {
          const NodeId u = targets[i];
          const double p = g_.prob(first + i);
          if (active_[u] || p <= 0.0) continue;
          if (model == CascadeModel::kIC) {
            if (detail::unit_draw(stream, first + i) < p) {
              active_[u] = 1;
              next_.push_back(u);
            }
          } else {
            if (weight_[u] == 0.0) weighted_.push_back(u);
            weight_[u] += p;
            if (step_mark_[u] != step_) {
              step_mark_[u] = step_;
              touched_.push_back(u);
            }
          }
        }
      }
      if (model == CascadeModel::kLT) {
        // theta in (0, 1]
        for (NodeId u : touched_) {
          const double theta = 1.0 - detail::unit_draw(stream, u);
          if (weight_[u] + 1e-12 >= theta) {
            active_[u] = 1;
            next_.push_back(u);
          }
        }
      }
      std::sort(next_.begin(), next_.end());
      activated_.insert(activated_.end(), next_.begin(), next_.end());
      frontier_.swap(next_);
    }
    const std::size_t count = activated_.size();
    for (NodeId u : activated_) active_[u] = 0;
    for (NodeId u : weighted_) weight_[u] = 0.0;
    return count;
  }

 private:
  const EdgeProbGraph& g_;
  std::vector<std::uint8_t> active_;
  std::vector<double> weight_;
  std::vector<std::uint64_t> step_mark_;
  std::uint64_t step_ = 0;
  std::vector<NodeId> frontier_, next_, touched_, activated_, weighted_;
};

}  // namespace

std::size_t simulate_trial(const EdgeProbGraph& g, std::span<const NodeId> seeds,
                           CascadeModel model, std::uint64_t rng_seed,
                           std::uint64_t trial) {
  TrialRunner runner(g);
  return runner.run(seeds, model, rng_seed, trial);
}

double mc_spread(const EdgeProbGraph& g, std::span<const NodeId> seeds,
                 const CascadeConfig& cfg) {
  if (cfg.trials == 0) throw ContractViolation("mc_spread: trials must be >= 1");
  if (seeds.empty()) return 0.0;
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, cfg.threads),
                                                  cfg.trials));
  std::vector<std::uint64_t> totals(workers, 0);
  const std::size_t block = (cfg.trials + workers - 1) / workers;
  parallel_for(workers, workers, [&](std::size_t w) {
    TrialRunner runner(g);
    const std::size_t end = std::min(cfg.trials, (w + 1) * block);
    for (std::size_t t = w * block; t < end; ++t) {
      totals[w] += runner.run(seeds, cfg.model, cfg.rng_seed, t);
    }
  });
  const auto total = std::accumulate(totals.begin(), totals.end(),
                                     std::uint64_t{0});
  return static_cast<double>(total) / static_cast<double>(cfg.trials);
}

namespace {

struct CelfEntry {
  NodeId node;
  double mg;
  std::size_t it;
};

struct CelfOrder {
  bool operator()(const CelfEntry& a, const CelfEntry& b) const {
    if (a.mg != b.mg) return a.mg < b.mg;
    return a.node > b.node;
  }
};

std::vector<NodeId> top_k(const std::vector<double>& score, std::size_t k) {
  std::vector<NodeId> order(score.size());
  std::iota(order.begin(), order.end(), 0);
  k = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k),
                    order.end(), [&](NodeId a, NodeId b) {
                      if (score[a] != score[b]) return score[a] > score[b];
                      return a < b;
                    });
  order.resize(k);
  return order;
}

}  // namespace

SeedSelection greedy_mc(const EdgeProbGraph& g, std::size_t k,
                        const CascadeConfig& cfg) {
  const std::size_t n = g.graph().num_nodes();
  if (k > n) {
    throw ValidationError("k = " + std::to_string(k) + " exceeds the " +
                          std::to_string(n) + " nodes of the graph");
  }
  SeedSelection selection;
  if (k == 0) return selection;

  std::priority_queue<CelfEntry, std::vector<CelfEntry>, CelfOrder> queue;
  std::vector<NodeId> probe(1);
  for (NodeId w = 0; w < n; ++w) {
    probe[0] = w;
    queue.push({w, mc_spread(g, probe, cfg), 0});
  }
  while (selection.seeds.size() < k) {
    CelfEntry top = queue.top();
    queue.pop();
    if (top.it == selection.seeds.size()) {
      selection.seeds.push_back(top.node);
      selection.gains.push_back(top.mg);
      selection.sigma += top.mg;
    } else {
      probe = selection.seeds;
      probe.push_back(top.node);
      top.mg = mc_spread(g, probe, cfg) - selection.sigma;
      top.it = selection.seeds.size();
      queue.push(top);
    }
  }
  return selection;
}

std::vector<NodeId> high_degree(const SocialGraph& graph, std::size_t k) {
  std::vector<double> degree(graph.num_nodes());
  for (NodeId v = 0; v < graph.num_nodes(); ++v) {
    degree[v] = static_cast<double>(graph.out_degree(v));
  }
  return top_k(degree, k);
}

std::vector<double> pagerank_scores(const SocialGraph& graph, double damping,
                                    int iters) {
  const std::size_t n = graph.num_nodes();
  if (n == 0) return {};
  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<double> rank(n, inv_n), next(n);
  for (int it = 0; it < iters; ++it) {
    double dangling = 0.0;
    for (NodeId v = 0; v < n; ++v) {
      if (graph.out_degree(v) == 0) dangling += rank[v];
    }
    const double base = (1.0 - damping) * inv_n + damping * dangling * inv_n;
    std::fill(next.begin(), next.end(), base);
    for (NodeId v = 0; v < n; ++v) {
      const std::size_t d = graph.out_degree(v);
      if (d == 0) continue;
      const double share = damping * rank[v] / static_cast<double>(d);
      for (NodeId u : graph.out_neighbors(v)) next[u] += share;
    }
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) change += std::abs(next[i] - rank[i]);
    rank.swap(next);
    if (change < 1e-10) break;
  }
  return rank;
}

std::vector<NodeId> pagerank(const SocialGraph& graph, std::size_t k,
                             double damping, int iters) {
  return top_k(pagerank_scores(graph, damping, iters), k);
}

}  // namespace credist
