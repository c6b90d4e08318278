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

#include "credist/evaluation.hpp"

#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <unordered_set>

#include "credist/errors.hpp"
#include "credist/parallel.hpp"
#include "credist/seed_selector.hpp"
#include "text_io.hpp"

namespace credist {

double predict_spread(const SpreadModel& model, std::span<const NodeId> seeds) {
  if (const auto* cd = std::get_if<CdModel>(&model)) {
    return estimate_spread(*cd->store, seeds);
  }
  const auto& mc = std::get<McModel>(model);
  return mc_spread(*mc.graph, seeds, mc.cfg);
}

std::vector<SpreadPrediction> predict_test_spreads(const SpreadModel& model,
                                                   const ActionLog& test_log,
                                                   const SocialGraph& graph,
                                                   unsigned threads) {
  std::vector<SpreadPrediction> preds(test_log.num_actions());
  for (ActionIndex a = 0; a < test_log.num_actions(); ++a) {
    preds[a].action = test_log.action_id(a);
    preds[a].actual = test_log.propagation_size(a);
  }
  {
    DagBuilder builder(graph);
    for (ActionIndex a = 0; a < test_log.num_actions(); ++a) {
      preds[a].seed_set = extract_initiators(builder.build(test_log, a));
    }
  }
  // Workers split the actions; each MC estimate then runs single-threaded.
  SpreadModel inner = model;
  if (auto* mc = std::get_if<McModel>(&inner)) mc->cfg.threads = 1;
  parallel_for(preds.size(), threads, [&](std::size_t i) {
    preds[i].predicted = predict_spread(inner, preds[i].seed_set);
  });
  return preds;
}

BinnedRmse rmse_binned(std::span<const SpreadPrediction> preds,
                       std::int64_t bin_width) {
  if (preds.empty()) throw ValidationError("rmse_binned: no predictions");
  if (bin_width <= 0) throw ValidationError("rmse_binned: bin width must be > 0");
  std::map<std::int64_t, std::pair<std::size_t, double>> acc;
  for (const SpreadPrediction& p : preds) {
    const auto bin = static_cast<std::int64_t>(p.actual) / bin_width;
    const double err = p.predicted - static_cast<double>(p.actual);
    auto& [count, sq] = acc[bin];
    ++count;
    sq += err * err;
  }
  BinnedRmse out;
  out.bin_width = bin_width;
  for (const auto& [bin, stats] : acc) {
    out.bins.push_back({bin * bin_width, stats.first,
                        std::sqrt(stats.second / static_cast<double>(stats.first))});
  }
  return out;
}

double global_rmse(std::span<const SpreadPrediction> preds) {
  if (preds.empty()) throw ValidationError("global_rmse: no predictions");
  double sq = 0.0;
  for (const SpreadPrediction& p : preds) {
    const double err = p.predicted - static_cast<double>(p.actual);
    sq += err * err;
  }
  return std::sqrt(sq / static_cast<double>(preds.size()));
}

std::vector<CdfPoint> error_cdf(std::span<const SpreadPrediction> preds) {
  std::vector<double> errors;
  errors.reserve(preds.size());
  for (const SpreadPrediction& p : preds) {
    errors.push_back(std::abs(p.predicted - static_cast<double>(p.actual)));
  }
  std::sort(errors.begin(), errors.end());
  std::vector<CdfPoint> cdf;
  const auto n = static_cast<double>(errors.size());
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (i + 1 < errors.size() && errors[i + 1] == errors[i]) continue;
    cdf.push_back({errors[i], static_cast<double>(i + 1) / n});
  }
  return cdf;
}

double cdf_at(std::span<const CdfPoint> cdf, double error) {
  auto it = std::upper_bound(
      cdf.begin(), cdf.end(), error,
      [](double e, const CdfPoint& p) { return e < p.error; });
  return it == cdf.begin() ? 0.0 : std::prev(it)->fraction;
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> rank(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = (static_cast<double>(i + j) / 2.0) + 1.0;
    for (std::size_t t = i; t <= j; ++t) rank[order[t]] = r;
    i = j + 1;
  }
  return rank;
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ValidationError("spearman: need two equally sized samples (n >= 2)");
  }
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

namespace {

std::uint64_t pair_key(std::size_t v, std::size_t u) {
  return (static_cast<std::uint64_t>(v) << 32) | static_cast<std::uint64_t>(u);
}

}  // namespace

SyntheticData gen_synthetic(const SyntheticParams& params) {
  const std::size_t n = params.nodes;
  if (n == 0) throw ValidationError("gen_synthetic: nodes must be positive");
  if (n > (std::size_t{1} << 31)) {
    throw ValidationError("gen_synthetic: too many nodes");
  }
  if (params.edges > n * (n - 1)) {
    throw ValidationError("gen_synthetic: " + std::to_string(params.edges) +
                          " edges do not fit in a simple digraph on " +
                          std::to_string(n) + " nodes");
  }
  if (params.step <= 0) throw ValidationError("gen_synthetic: step must be > 0");
  if (params.probs == SyntheticProbs::kUniform &&
      !(params.edge_prob >= 0.0 && params.edge_prob <= 1.0)) {
    throw ValidationError("gen_synthetic: edge probability outside [0, 1]");
  }

  std::mt19937_64 rng(params.rng_seed);
  std::vector<std::pair<UserId, UserId>> edges;
  edges.reserve(params.edges);
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(params.edges * 2);
  std::vector<std::size_t> endpoints;  // each edge adds both ends
  endpoints.reserve(params.edges * 2);
  const auto add_edge = [&](std::size_t v, std::size_t u) {
    if (v == u || !seen.insert(pair_key(v, u)).second) return false;
    edges.emplace_back(static_cast<UserId>(v), static_cast<UserId>(u));
    endpoints.push_back(v);
    endpoints.push_back(u);
    return true;
  };
  // Degree-proportional choice among [0, limit), smoothed by +1 per node.
  const auto attach_target = [&](std::size_t limit) {
    std::uniform_int_distribution<std::size_t> pick(0, limit + endpoints.size() - 1);
    std::size_t r = pick(rng);
    while (r >= limit && endpoints[r - limit] >= limit) r = pick(rng);
    return r < limit ? r : endpoints[r - limit];
  };

  const std::size_t per_node = std::max<std::size_t>(1, params.edges / n);
  std::bernoulli_distribution coin(0.5);
  for (std::size_t i = 1; i < n && edges.size() < params.edges; ++i) {
    const std::size_t want = std::min(per_node, i);
    std::size_t made = 0;
    for (std::size_t attempt = 0; made < want && attempt < 8 * want; ++attempt) {
      const std::size_t j = attach_target(i);
      if (coin(rng) ? add_edge(i, j) : add_edge(j, i)) ++made;
      if (edges.size() >= params.edges) break;
    }
  }
  std::uniform_int_distribution<std::size_t> any_node(0, n - 1);
  for (std::size_t attempt = 0;
       edges.size() < params.edges && attempt < 20 * params.edges + 100;
       ++attempt) {
    add_edge(any_node(rng), attach_target(n));
  }
  if (edges.size() < params.edges) {
    // Dense request: fill from the remaining pairs.
    std::vector<std::pair<std::size_t, std::size_t>> missing;
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t u = 0; u < n; ++u) {
        if (v != u && !seen.count(pair_key(v, u))) missing.emplace_back(v, u);
      }
    }
    std::shuffle(missing.begin(), missing.end(), rng);
    for (std::size_t i = 0; edges.size() < params.edges; ++i) {
      add_edge(missing[i].first, missing[i].second);
    }
  }

  std::vector<UserId> all_users(n);
  std::iota(all_users.begin(), all_users.end(), UserId{0});
  SyntheticData data;
  data.graph = SocialGraph::from_edges(edges, all_users);
  const SocialGraph& graph = data.graph;

  data.edge_probs.assign(graph.num_edges(), params.edge_prob);
  if (params.probs == SyntheticProbs::kWeightedCascade) {
    for (NodeId u = 0; u < graph.num_nodes(); ++u) {
      for (EdgeIndex e : graph.in_edges(u)) {
        data.edge_probs[e] = 1.0 / static_cast<double>(graph.in_degree(u));
      }
    }
  }

  // Only users with at least one edge are seeded.
  std::vector<NodeId> seedable;
  for (NodeId u = 0; u < graph.num_nodes(); ++u) {
    if (graph.out_degree(u) + graph.in_degree(u) > 0) seedable.push_back(u);
  }
  if (params.actions > 0 && seedable.empty()) {
    throw ValidationError("gen_synthetic: no connected users to seed actions");
  }

  std::vector<std::vector<NodeId>> seed_sets(params.actions);
  for (auto& seeds : seed_sets) {
    const std::size_t want = std::min(params.seeds_per_action, seedable.size());
    std::uniform_int_distribution<std::size_t> pick(0, seedable.size() - 1);
    while (seeds.size() < want) {
      const NodeId s = seedable[pick(rng)];
      if (std::find(seeds.begin(), seeds.end(), s) == seeds.end()) {
        seeds.push_back(s);
      }
    }
  }
  const EdgeProbGraph model(graph, data.edge_probs);
  data.log = cascade_log(model, seed_sets, params.step, rng());
  return data;
}

ActionLog cascade_log(const EdgeProbGraph& model,
                      std::span<const std::vector<NodeId>> seed_sets,
                      Timestamp step, std::uint64_t rng_seed) {
  if (step <= 0) throw ValidationError("cascade_log: step must be > 0");
  const SocialGraph& graph = model.graph();
  std::mt19937_64 rng(rng_seed);
  std::vector<RawLogEntry> raw;
  std::vector<std::uint8_t> active(graph.num_nodes(), 0);
  std::vector<NodeId> frontier, next, activated;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<Timestamp> jitter(0, step - 1);
  for (std::size_t a = 0; a < seed_sets.size(); ++a) {
    frontier.clear();
    activated.clear();
    for (NodeId s : seed_sets[a]) {
      if (s >= graph.num_nodes()) {
        throw ValidationError("cascade_log: seed outside the graph");
      }
      if (!active[s]) {
        active[s] = 1;
        frontier.push_back(s);
      }
    }
    std::sort(frontier.begin(), frontier.end());
    for (Timestamp depth = 0; !frontier.empty(); ++depth) {
      next.clear();
      for (NodeId v : frontier) {
        raw.push_back({graph.user_id(v), static_cast<ActionId>(a),
                       depth * step + jitter(rng)});
        activated.push_back(v);
        const auto targets = graph.out_neighbors(v);
        const EdgeIndex first = graph.out_edge_begin(v);
        for (std::size_t i = 0; i < targets.size(); ++i) {
          const NodeId u = targets[i];
          if (!active[u] && unit(rng) < model.prob(first + i)) {
            active[u] = 1;
            next.push_back(u);
          }
        }
      }
      std::sort(next.begin(), next.end());
      frontier.swap(next);
    }
    for (NodeId v : activated) active[v] = 0;
  }
  return make_action_log(std::move(raw), graph);
}

void write_predictions(const std::filesystem::path& path,
                       std::span<const SpreadPrediction> preds) {
  auto out = detail::open_output(path);
  out << "action\tseeds\tpredicted\tactual\n";
  for (const SpreadPrediction& p : preds) {
    out << p.action << '\t' << p.seed_set.size() << '\t'
        << detail::format_double(p.predicted) << '\t' << p.actual << '\n';
  }
}

void write_rmse_table(const std::filesystem::path& path, const BinnedRmse& rmse,
                      char separator) {
  auto out = detail::open_output(path);
  out << "bin" << separator << "count" << separator << "rmse\n";
  for (const RmseBin& b : rmse.bins) {
    out << b.lower << separator << b.count << separator
        << detail::format_double(b.rmse) << '\n';
  }
}

void write_cdf_table(const std::filesystem::path& path,
                     std::span<const CdfPoint> cdf, char separator) {
  auto out = detail::open_output(path);
  out << "error" << separator << "fraction\n";
  for (const CdfPoint& p : cdf) {
    out << detail::format_double(p.error) << separator
        << detail::format_double(p.fraction) << '\n';
  }
}

}  // namespace credist
