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

#ifndef CREDIST_SEED_SELECTION_HPP_
#define CREDIST_SEED_SELECTION_HPP_

#include <filesystem>
#include <numeric>
#include <vector>

#include "credist/core_model.hpp"

namespace credist {

// Result of a greedy run: seeds in pick order with their marginal gains.
struct SeedSelection {
  std::vector<NodeId> seeds;
  std::vector<double> gains;
  double sigma = 0.0;
};

// Sum of the marginal gains, i.e. the spread of the whole seed set.
inline double sigma_of_selection(const SeedSelection& selection) {
  return std::accumulate(selection.gains.begin(), selection.gains.end(), 0.0);
}

// `rank<TAB>user<TAB>marginal_gain<TAB>cumulative_sigma`, ranks from 1.
void write_seed_file(const std::filesystem::path& path,
                     const SeedSelection& selection, const SocialGraph& graph);
// Reads the user column of a seed file (or a plain one-id-per-line list).
std::vector<UserId> load_seed_users(const std::filesystem::path& path);

}  // namespace credist

#endif  // CREDIST_SEED_SELECTION_HPP_
