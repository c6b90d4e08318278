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

#ifndef CREDIST_EVALUATION_HPP_
#define CREDIST_EVALUATION_HPP_

// Spread-prediction accuracy against held-out propagations, seed set
// comparison, and a synthetic data generator.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <variant>
#include <vector>

#include "credist/baselines.hpp"
#include "credist/core_model.hpp"
#include "credist/credit_engine.hpp"

namespace credist {

// Predicted vs. actual spread of the initiators of one test action.
struct SpreadPrediction {
  ActionId action = 0;
  std::vector<NodeId> seed_set;
  double predicted = 0.0;
  std::size_t actual = 0;  // |V(a)|
};

struct CdModel {
  const CreditStore* store;
};

// IC or LT, chosen by cfg.model.
struct McModel {
  const EdgeProbGraph* graph;
  CascadeConfig cfg;
};

using SpreadModel = std::variant<CdModel, McModel>;

double predict_spread(const SpreadModel& model, std::span<const NodeId> seeds);

// One prediction per action of `test_log`, seeded with that action's
// initiators. Model artifacts must come from training actions only.
std::vector<SpreadPrediction> predict_test_spreads(const SpreadModel& model,
                                                   const ActionLog& test_log,
                                                   const SocialGraph& graph,
                                                   unsigned threads = 1);

struct RmseBin {
  std::int64_t lower = 0;  // bin covers [lower, lower + width)
  std::size_t count = 0;
  double rmse = 0.0;
};

struct BinnedRmse {
  std::int64_t bin_width = 0;
  std::vector<RmseBin> bins;  // ascending, empty bins omitted
};

// Throws ValidationError on empty input or a non-positive width.
BinnedRmse rmse_binned(std::span<const SpreadPrediction> preds,
                       std::int64_t bin_width);
double global_rmse(std::span<const SpreadPrediction> preds);

struct CdfPoint {
  double error;
  double fraction;  // share of predictions with |error| <= error
};

// One point per distinct absolute error, ascending.
std::vector<CdfPoint> error_cdf(std::span<const SpreadPrediction> preds);
// Step-function lookup; 0 below the smallest error.
double cdf_at(std::span<const CdfPoint> cdf, double error);

template <typename Id>
std::size_t seed_intersection(std::span<const Id> a, std::span<const Id> b) {
  std::vector<Id> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  x.erase(std::unique(x.begin(), x.end()), x.end());
  std::sort(y.begin(), y.end());
  y.erase(std::unique(y.begin(), y.end()), y.end());
  std::vector<Id> common;
  std::set_intersection(x.begin(), x.end(), y.begin(), y.end(),
                        std::back_inserter(common));
  return common.size();
}

// Rank correlation with average ranks for ties.
double spearman(std::span<const double> x, std::span<const double> y);

enum class SyntheticProbs { kUniform, kWeightedCascade };

struct SyntheticParams {
  std::size_t nodes = 1000;
  std::size_t edges = 5000;
  std::size_t actions = 100;
  std::size_t seeds_per_action = 1;
  SyntheticProbs probs = SyntheticProbs::kUniform;
  double edge_prob = 0.1;   // used with kUniform
  Timestamp step = 100;     // time between BFS levels
  std::uint64_t rng_seed = 1;
};

struct SyntheticData {
  SocialGraph graph;
  ActionLog log;
  std::vector<double> edge_probs;  // the IC model that generated the log
};

// Preferential-attachment digraph plus one IC possible world per action,
// timestamped by BFS depth * step + jitter in [0, step). Throws
// ValidationError for infeasible sizes.
SyntheticData gen_synthetic(const SyntheticParams& params);

// One sampled IC world per seed set. Action a (numbered from 0) starts at
// seed_sets[a]; a node reached at BFS depth d acts at d * step plus a jitter
// in [0, step).
ActionLog cascade_log(const EdgeProbGraph& model,
                      std::span<const std::vector<NodeId>> seed_sets,
                      Timestamp step, std::uint64_t rng_seed);

void write_predictions(const std::filesystem::path& path,
                       std::span<const SpreadPrediction> preds);
void write_rmse_table(const std::filesystem::path& path, const BinnedRmse& rmse,
                      char separator);
void write_cdf_table(const std::filesystem::path& path,
                     std::span<const CdfPoint> cdf, char separator);

}  // namespace credist

#endif  // CREDIST_EVALUATION_HPP_
