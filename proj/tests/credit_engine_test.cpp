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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "credist/credit_engine.hpp"
#include "credist/errors.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

namespace credist {
namespace {

using namespace fixture;
constexpr double kExact = 1e-12;

struct SixNode : ::testing::Test {
  fixture::Built b = fixture::build(six_node());
  PropagationDag dag = build_propagation_dag(b.log, b.graph, kAction);
  DirectCreditPolicy uniform = DirectCreditPolicy::uniform();
  NodeId n(oracle::Id user) const { return b.graph.node(user); }
  std::vector<NodeId> ns(std::set<oracle::Id> users) const {
    return fixture::nodes(b.graph, users);
  }
};

TEST_F(SixNode, UniformDirectCredit) {
  for (oracle::Id p : {kV, kT, kW, kZ}) {
    EXPECT_NEAR(direct_credit(uniform, dag, n(p), n(kU)), 0.25, kExact);
  }
  EXPECT_NEAR(direct_credit(uniform, dag, n(kV), n(kW)), 1.0, kExact);
  EXPECT_THROW(direct_credit(uniform, dag, n(kS), n(kU)), ContractViolation);
}

TEST(DirectCreditTest, TimeDecayOneTau) {
  oracle::Instance inst;
  inst.users = {1, 2, 3};
  inst.edges = {{1, 3}, {2, 3}};
  inst.log = {{1, 9, 0}, {2, 9, 5}, {3, 9, 10}};
  const auto b = fixture::build(inst);
  std::vector<double> tau(b.graph.num_edges(), 0.0);
  tau[b.graph.edge_index(b.graph.node(1), b.graph.node(3))] = 10.0;
  std::vector<double> infl(b.graph.num_nodes(), 0.0);
  infl[b.graph.node(3)] = 1.0;
  const TemporalParams params(tau, infl, 10.0);
  const auto policy = DirectCreditPolicy::time_decay(params, b.graph);
  const auto dag = build_propagation_dag(b.log, b.graph, 9);
  EXPECT_NEAR(direct_credit(policy, dag, b.graph.node(1), b.graph.node(3)),
              0.5 * std::exp(-1.0), kExact);
  EXPECT_NEAR(direct_credit(policy, dag, b.graph.node(1), b.graph.node(3)),
              0.18394, 1e-5);
  // The second edge was never observed and falls back to the global delay.
  EXPECT_NEAR(direct_credit(policy, dag, b.graph.node(2), b.graph.node(3)),
              0.5 * std::exp(-0.5), kExact);
}

TEST_F(SixNode, ScanWithoutTruncation) {
  const auto uc = scan(b.log, b.graph, uniform, TruncationThreshold{0.0});
  EXPECT_NEAR(uc.credit(n(kV), n(kU), 0), 0.75, kExact);
  EXPECT_NEAR(uc.credit(n(kV), n(kT), 0), 0.5, kExact);
  EXPECT_NEAR(uc.credit(n(kV), n(kW), 0), 1.0, kExact);
  EXPECT_NEAR(uc.credit(n(kV), n(kZ), 0), 0.5, kExact);
  EXPECT_NEAR(uc.credit(n(kS), n(kU), 0), 0.25, kExact);
  EXPECT_EQ(uc.credit(n(kU), n(kV), 0), 0.0);
  for (oracle::Id u : {kS, kV, kT, kW, kZ, kU}) {
    EXPECT_EQ(uc.actions_performed(n(u)), 1u);
  }
}

TEST_F(SixNode, ScanWithTruncation) {
  const auto uc = scan(b.log, b.graph, uniform, TruncationThreshold{0.3});
  // Every increment into u is 0.25 or smaller, so u keeps no credit at all.
  for (oracle::Id v : {kS, kV, kT, kW, kZ}) {
    EXPECT_EQ(uc.credit(n(v), n(kU), 0), 0.0);
  }
  EXPECT_NEAR(uc.credit(n(kV), n(kT), 0), 0.5, kExact);
  EXPECT_NEAR(uc.credit(n(kV), n(kZ), 0), 0.5, kExact);
  EXPECT_NEAR(uc.credit(n(kV), n(kW), 0), 1.0, kExact);
  const auto exact = scan(b.log, b.graph, uniform, TruncationThreshold{0.0});
  EXPECT_NEAR(exact.credit(n(kV), n(kU), 0) - uc.credit(n(kV), n(kU), 0), 0.75,
              kExact);
  EXPECT_EQ(uc.actions_performed(n(kU)), 1u);
}

TEST(ScanTest, EmptyLog) {
  const auto g = SocialGraph::from_edges(
      std::vector<std::pair<UserId, UserId>>{{1, 2}});
  const ActionLog log({}, {}, g.num_nodes());
  const auto uc = scan(log, g, DirectCreditPolicy::uniform(), {});
  EXPECT_EQ(uc.num_entries(), 0u);
  EXPECT_EQ(uc.num_slots(), 0u);
}

TEST(ScanTest, RejectsNegativeThresholdAndForeignLog) {
  const auto b = fixture::build(six_node());
  EXPECT_THROW(scan(b.log, b.graph, DirectCreditPolicy::uniform(),
                    TruncationThreshold{-1.0}),
               ContractViolation);
  const auto other = SocialGraph::from_edges(
      std::vector<std::pair<UserId, UserId>>{{1, 2}});
  EXPECT_THROW(scan(b.log, other, DirectCreditPolicy::uniform(), {}),
               ContractViolation);
}

TEST_F(SixNode, NodeOracle) {
  EXPECT_NEAR(total_credit_node_oracle(dag, uniform, n(kV), n(kU)), 0.75, kExact);
  EXPECT_NEAR(total_credit_node_oracle(dag, uniform, n(kV), n(kV)), 1.0, kExact);
  EXPECT_EQ(total_credit_node_oracle(dag, uniform, n(kU), n(kV)), 0.0);
}

TEST_F(SixNode, SetOracle) {
  const auto vz = ns({kV, kZ});
  EXPECT_NEAR(total_credit_set_oracle(dag, uniform, vz, n(kU)), 0.875, kExact);
  const auto v = ns({kV});
  const auto w1 = ns({kS, kV, kW, kU});
  EXPECT_NEAR(total_credit_set_oracle(dag, uniform, v, n(kU),
                                      std::span<const NodeId>(w1)),
              0.5, kExact);
  const auto w2 = ns({kS, kV, kU});
  EXPECT_NEAR(total_credit_set_oracle(dag, uniform, v, n(kU),
                                      std::span<const NodeId>(w2)),
              0.25, kExact);
}

TEST_F(SixNode, SetCreditDecomposesOverSeeds) {
  const auto no_z = ns({kS, kV, kT, kW, kU});
  const auto no_v = ns({kS, kT, kW, kZ, kU});
  const auto v = ns({kV}), z = ns({kZ});
  const double part_v = total_credit_set_oracle(dag, uniform, v, n(kU),
                                                std::span<const NodeId>(no_z));
  const double part_z = total_credit_set_oracle(dag, uniform, z, n(kU),
                                                std::span<const NodeId>(no_v));
  EXPECT_NEAR(part_v, 0.625, kExact);
  EXPECT_NEAR(part_z, 0.25, kExact);
  EXPECT_NEAR(part_v + part_z, 0.875, kExact);
}

TEST_F(SixNode, SpreadOracle) {
  EXPECT_NEAR(sigma_cd_oracle(b.log, b.graph, uniform, ns({kV})), 3.75, kExact);
  EXPECT_NEAR(sigma_cd_oracle(b.log, b.graph, uniform, ns({kS})), 2.25, kExact);
  EXPECT_EQ(sigma_cd_oracle(b.log, b.graph, uniform, {}), 0.0);
}

TEST_F(SixNode, WriteCreditStore) {
  TempDir dir;
  const auto uc = scan(b.log, b.graph, uniform, TruncationThreshold{0.3});
  write_credit_store(dir.path() / "c.tsv", uc, b.graph);
  const std::string text = slurp(dir.path() / "c.tsv");
  EXPECT_NE(text.find("2\t3\t100\t0.5\n"), std::string::npos);
  EXPECT_EQ(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')),
            uc.num_entries());
}

struct RandomCase {
  oracle::Instance inst;
  fixture::Built b;
  TemporalParams params;
  oracle::Params oparams;
};

RandomCase random_case(int seed) {
  std::mt19937_64 rng(seed);
  RandomCase c;
  c.inst = random_instance(rng);
  c.b = fixture::build(c.inst);
  c.params = learn_time_params(c.b.log, c.b.graph);
  c.oparams = oracle::learn_params(c.inst);
  return c;
}

class CreditProperty : public ::testing::TestWithParam<int> {};

TEST_P(CreditProperty, ScanMatchesPathEnumeration) {
  const auto c = random_case(2000 + GetParam());
  const auto& [inst, b, params, oparams] = c;
  const std::pair<DirectCreditPolicy, oracle::Gamma> policies[] = {
      {DirectCreditPolicy::uniform(), oracle::uniform_gamma()},
      {DirectCreditPolicy::time_decay(params, b.graph),
       oracle::decay_gamma(oparams)}};
  for (const auto& [policy, gamma] : policies) {
    const auto uc = scan(b.log, b.graph, policy, TruncationThreshold{0.0});
    DagBuilder builder(b.graph);
    for (ActionIndex a = 0; a < b.log.num_actions(); ++a) {
      const auto dag = builder.build(b.log, a);
      const auto odag = oracle::build_dag(inst, b.log.action_id(a));
      for (NodeId v : dag.nodes) {
        for (NodeId u : dag.nodes) {
          if (u == v) continue;
          const double want = oracle::node_credit(odag, gamma, b.graph.user_id(v),
                                                  b.graph.user_id(u));
          EXPECT_NEAR(uc.credit(v, u, a), want, 1e-9);
          EXPECT_NEAR(total_credit_node_oracle(dag, policy, v, u), want, 1e-9);
        }
        // Direct credits given by one node sum to at most one.
        const auto local = *dag.local_index(v);
        double sum = 0.0;
        for (auto p : dag.parents[local]) sum += policy(dag, p, local);
        EXPECT_LE(sum, 1.0 + 1e-12);
        if (policy.kind() == CreditPolicyKind::kUniform &&
            !dag.parents[local].empty()) {
          EXPECT_NEAR(sum, 1.0, 1e-12);
        }
        std::size_t ancestors = 0;
        double column = 0.0;
        for (const Credit& cr : uc.ancestors(uc.slot(a, local))) {
          EXPECT_GT(cr.value, 0.0);
          EXPECT_LE(cr.value, 1.0 + 1e-12);
          column += cr.value;
          ++ancestors;
        }
        EXPECT_LE(column, static_cast<double>(ancestors) + 1e-12);
      }
    }
  }
}

TEST_P(CreditProperty, TruncationMatchesReferenceAndIsConservative) {
  const auto c = random_case(3000 + GetParam());
  const auto& [inst, b, params, oparams] = c;
  const auto policy = DirectCreditPolicy::time_decay(params, b.graph);
  const auto gamma = oracle::decay_gamma(oparams);
  const auto exact = scan(b.log, b.graph, policy, TruncationThreshold{0.0});
  std::optional<CreditStore> coarser;
  for (double lambda : {0.3, 0.1, 0.03, 0.01, 0.0}) {
    const auto uc = scan(b.log, b.graph, policy, TruncationThreshold{lambda});
    const auto want = oracle::truncated_scan(inst, gamma, lambda);
    EXPECT_EQ(uc.num_entries(), want.size()) << "lambda " << lambda;
    for (const auto& [key, value] : want) {
      const auto& [v, u, a] = key;
      const auto ai = *b.log.find_action(a);
      EXPECT_NEAR(uc.credit(b.graph.node(v), b.graph.node(u), ai), value, 1e-9);
    }
    for (ActionIndex a = 0; a < b.log.num_actions(); ++a) {
      for (std::uint32_t i = 0; i < uc.action_size(a); ++i) {
        const auto s = uc.slot(a, i);
        for (const Credit& cr : uc.ancestors(s)) {
          const NodeId v = uc.member(uc.slot(a, cr.local));
          EXPECT_LE(cr.value, exact.credit(v, uc.member(s), a) + 1e-12);
        }
        if (coarser) {
          for (const Credit& cr : coarser->ancestors(s)) {
            const NodeId v = uc.member(uc.slot(a, cr.local));
            EXPECT_GE(uc.credit(v, uc.member(s), a) + 1e-12, cr.value);
          }
        }
      }
    }
    coarser = uc;
  }
}

TEST_P(CreditProperty, SetCreditIdentities) {
  const auto c = random_case(4000 + GetParam());
  const auto& [inst, b, params, oparams] = c;
  std::mt19937_64 rng(GetParam());
  const auto policy = DirectCreditPolicy::uniform();
  DagBuilder builder(b.graph);
  for (ActionIndex a = 0; a < b.log.num_actions(); ++a) {
    const auto dag = builder.build(b.log, a);
    const auto odag = oracle::build_dag(inst, b.log.action_id(a));
    std::vector<NodeId> seeds;
    std::bernoulli_distribution coin(0.35);
    for (NodeId x : dag.nodes) {
      if (coin(rng)) seeds.push_back(x);
    }
    std::set<oracle::Id> oseeds = fixture::users(b.graph, seeds);
    for (NodeId u : dag.nodes) {
      const double whole = total_credit_set_oracle(dag, policy, seeds, u);
      EXPECT_NEAR(whole,
                  oracle::set_credit(odag, oracle::uniform_gamma(), oseeds,
                                     b.graph.user_id(u)),
                  1e-9);
      EXPECT_GE(whole, 0.0);
      EXPECT_LE(whole, 1.0 + 1e-12);
      // Split over seeds, each restricted to the graph without the others.
      double parts = 0.0;
      for (NodeId v : seeds) {
        std::vector<NodeId> within;
        for (NodeId x : dag.nodes) {
          if (x == v || std::find(seeds.begin(), seeds.end(), x) == seeds.end()) {
            within.push_back(x);
          }
        }
        const NodeId one[] = {v};
        parts += total_credit_set_oracle(dag, policy, one, u,
                                         std::span<const NodeId>(within));
      }
      if (std::find(seeds.begin(), seeds.end(), u) == seeds.end()) {
        EXPECT_NEAR(whole, parts, 1e-9);
      }
      // Adding a seed never lowers the credit.
      for (NodeId x : dag.nodes) {
        if (std::find(seeds.begin(), seeds.end(), x) != seeds.end()) continue;
        auto more = seeds;
        more.push_back(x);
        EXPECT_GE(total_credit_set_oracle(dag, policy, more, u) + 1e-12, whole);
      }
    }
  }
}

TEST_P(CreditProperty, SpreadOracleMatchesReference) {
  const auto c = random_case(5000 + GetParam());
  const auto& [inst, b, params, oparams] = c;
  std::mt19937_64 rng(GetParam());
  std::bernoulli_distribution coin(0.3);
  std::set<oracle::Id> seeds;
  for (oracle::Id u : inst.users) {
    if (coin(rng)) seeds.insert(u);
  }
  EXPECT_NEAR(sigma_cd_oracle(b.log, b.graph, DirectCreditPolicy::uniform(),
                              fixture::nodes(b.graph, seeds)),
              oracle::sigma(inst, oracle::uniform_gamma(), seeds), 1e-9);
  EXPECT_NEAR(
      sigma_cd_oracle(b.log, b.graph,
                      DirectCreditPolicy::time_decay(params, b.graph),
                      fixture::nodes(b.graph, seeds)),
      oracle::sigma(inst, oracle::decay_gamma(oparams), seeds), 1e-9);
}

INSTANTIATE_TEST_SUITE_P(Random, CreditProperty, ::testing::Range(0, 60));

}  // namespace
}  // namespace credist
