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

#ifndef CREDIST_SEED_SELECTOR_HPP_
#define CREDIST_SEED_SELECTOR_HPP_

// Lazy-forward greedy seed selection over a CreditStore.
//
// The marginal gain of x given the current seeds S is
//   sum_a (1 - Gamma_{S,x}(a)) * sum_u Gamma^{V-S}_{x,u}(a) / A_u,
// where the u = x term is 1/A_x for every action x performed. Adding x to S
// removes x from the residual graph: every v -> u credit routed through x is
// subtracted, and the seed-set credit of each descendant grows by its residual
// credit to x scaled by (1 - Gamma_{S,x}(a)).

#include <cstddef>
#include <span>

#include "credist/credit_engine.hpp"
#include "credist/seed_selection.hpp"

namespace credist {

// Credits at or below this are treated as zero after subtraction.
inline constexpr double kCreditEpsilon = 1e-12;

// Throws ContractViolation if x is already a seed.
double compute_mg(NodeId x, const CreditStore& uc, const SetCreditStore& sc);

// Moves x from the residual graph into the seed set.
void update_credits(NodeId x, CreditStore& uc, SetCreditStore& sc);

// Users eligible as seeds: performed at least one action, not yet removed.
std::vector<NodeId> seed_candidates(const CreditStore& uc);

// CELF greedy. Consumes `uc` (it ends up as the residual store for the
// returned seeds). Ties go to the smaller user id. `threads` bounds the
// workers used for the initial gains. Throws ValidationError when fewer than
// k candidates exist.
SeedSelection select_seeds(CreditStore& uc, std::size_t k, unsigned threads = 1);

// Spread of a fixed seed set as estimated from the store (telescoped gains).
// Works on a copy of the actions the seeds performed; `uc` is untouched.
double estimate_spread(const CreditStore& uc, std::span<const NodeId> seeds);

}  // namespace credist

#endif  // CREDIST_SEED_SELECTOR_HPP_
