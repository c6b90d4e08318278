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

#ifndef CREDIST_BASELINES_HPP_
#define CREDIST_BASELINES_HPP_

// Probabilistic propagation baselines: Independent Cascade and Linear
// Threshold with Monte-Carlo spread estimation, the usual edge probability
// assignments, greedy (CELF) seed selection over MC spread, and the degree
// and PageRank heuristics.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "credist/core_model.hpp"
#include "credist/seed_selection.hpp"

namespace credist {

// Social graph with one probability (IC) or weight (LT) per edge, indexed by
// EdgeIndex. The graph must outlive this object.
class EdgeProbGraph {
 public:
  // Throws ValidationError when a value is outside [0, 1] or the sizes differ.
  EdgeProbGraph(const SocialGraph& graph, std::vector<double> probs);

  const SocialGraph& graph() const { return *graph_; }
  double prob(EdgeIndex e) const { return probs_[e]; }
  std::span<const double> probs() const { return probs_; }

  // Largest total incoming weight over all nodes.
  double max_incoming_weight() const;

 private:
  const SocialGraph* graph_;
  std::vector<double> probs_;
};

enum class CascadeModel { kIC, kLT };

struct CascadeConfig {
  CascadeModel model = CascadeModel::kIC;
  std::size_t trials = 10000;
  std::uint64_t rng_seed = 1;
  unsigned threads = 1;
};

// Weighted cascade: p(v,u) = 1 / in-degree(u).
EdgeProbGraph assign_wc(const SocialGraph& graph);
// Trivalency: each edge independently one of {0.1, 0.01, 0.001}.
EdgeProbGraph assign_tv(const SocialGraph& graph, std::uint64_t rng_seed);
EdgeProbGraph assign_un(const SocialGraph& graph, double p = 0.01);

// p * (1 + delta) clamped to [0, 1].
double perturb_value(double p, double delta);
// Multiplies each probability by (1 + delta), delta ~ U[-0.2, 0.2] per edge.
EdgeProbGraph perturb_pt(const EdgeProbGraph& g, std::uint64_t rng_seed);

// p(v,u) = A_{v2u} / N_u with A_{v2u} the number of actions that propagated
// along (v,u) and N_u = max(sum_v A_{v2u}, 1).
EdgeProbGraph learn_lt_weights(const ActionLog& log, const SocialGraph& graph);

// `src<TAB>dst<TAB>p` lines. Graph edges absent from the file get 0.
EdgeProbGraph load_edge_probs(const std::filesystem::path& path,
                              const SocialGraph& graph);
void write_edge_probs(const std::filesystem::path& path, const EdgeProbGraph& g);

// Final active-set size of one trial. Every random draw is a pure function of
// (rng_seed, trial, edge or node), so a trial is one fixed possible world.
std::size_t simulate_trial(const EdgeProbGraph& g, std::span<const NodeId> seeds,
                           CascadeModel model, std::uint64_t rng_seed,
                           std::uint64_t trial);

// Mean final active-set size over cfg.trials trials.
double mc_spread(const EdgeProbGraph& g, std::span<const NodeId> seeds,
                 const CascadeConfig& cfg);

// CELF greedy over MC spread. Ties go to the smaller user id. Throws
// ValidationError when k exceeds the number of nodes.
SeedSelection greedy_mc(const EdgeProbGraph& g, std::size_t k,
                        const CascadeConfig& cfg);

// Top-k by out-degree.
std::vector<NodeId> high_degree(const SocialGraph& graph, std::size_t k);

// Power iteration, out-edges as votes, dangling mass spread uniformly. Stops
// after `iters` rounds or when the L1 change drops below 1e-10.
std::vector<double> pagerank_scores(const SocialGraph& graph,
                                    double damping = 0.85, int iters = 100);
std::vector<NodeId> pagerank(const SocialGraph& graph, std::size_t k,
                             double damping = 0.85, int iters = 100);

}  // namespace credist

#endif  // CREDIST_BASELINES_HPP_
