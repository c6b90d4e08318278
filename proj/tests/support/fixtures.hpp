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

#ifndef CREDIST_TESTS_SUPPORT_FIXTURES_HPP_
#define CREDIST_TESTS_SUPPORT_FIXTURES_HPP_

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "credist/core_model.hpp"
#include "oracles.hpp"

namespace fixture {

using oracle::Id;

// Six users s, v, t, w, z, u acting at times 0, 1, 2, 3, 3, 4 in one action.
inline constexpr Id kS = 1, kV = 2, kT = 3, kW = 4, kZ = 5, kU = 6;
inline constexpr Id kAction = 100;

inline oracle::Instance six_node() {
  oracle::Instance inst;
  inst.users = {kS, kV, kT, kW, kZ, kU};
  inst.edges = {{kS, kT}, {kV, kT}, {kV, kW}, {kV, kU},
                {kT, kU}, {kT, kZ}, {kW, kU}, {kZ, kU}};
  inst.log = {{kU, kAction, 4}, {kS, kAction, 0}, {kZ, kAction, 3},
              {kV, kAction, 1}, {kT, kAction, 2}, {kW, kAction, 3}};
  return inst;
}

struct Built {
  credist::SocialGraph graph;
  credist::ActionLog log;
};

inline Built build(const oracle::Instance& inst) {
  Built b;
  b.graph = credist::SocialGraph::from_edges(inst.edges, inst.users);
  std::vector<credist::RawLogEntry> raw;
  for (const auto& t : inst.log) raw.push_back({t.user, t.action, t.time});
  b.log = credist::make_action_log(std::move(raw), b.graph);
  return b;
}

inline std::vector<credist::NodeId> nodes(const credist::SocialGraph& g,
                                          const std::set<Id>& users) {
  std::vector<credist::NodeId> out;
  for (Id u : users) out.push_back(g.node(u));
  return out;
}

inline std::set<Id> users(const credist::SocialGraph& g,
                          const std::vector<credist::NodeId>& ns) {
  std::set<Id> out;
  for (auto n : ns) out.insert(g.user_id(n));
  return out;
}

// Random instance with at most `max_nodes` users and `max_actions` actions.
// Timestamps come from a small range so equal times occur regularly.
inline oracle::Instance random_instance(std::mt19937_64& rng,
                                        int max_nodes = 12,
                                        int max_actions = 20) {
  std::uniform_int_distribution<int> n_dist(2, max_nodes);
  std::uniform_int_distribution<int> a_dist(1, max_actions);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  oracle::Instance inst;
  const int n = n_dist(rng);
  const double density = 0.15 + 0.6 * unit(rng);
  for (int i = 0; i < n; ++i) inst.users.push_back(10 + 3 * i);
  for (Id v : inst.users) {
    for (Id u : inst.users) {
      if (v != u && unit(rng) < density) inst.edges.push_back({v, u});
    }
  }
  const int actions = a_dist(rng);
  for (int a = 0; a < actions; ++a) {
    const double join = 0.3 + 0.6 * unit(rng);
    std::uniform_int_distribution<int> t_dist(0, n);
    bool any = false;
    for (Id u : inst.users) {
      if (unit(rng) < join) {
        inst.log.push_back({u, 500 + a, t_dist(rng)});
        any = true;
      }
    }
    if (!any) inst.log.push_back({inst.users[0], 500 + a, 0});
  }
  return inst;
}

struct CoverInstance {
  oracle::Instance inst;
  std::set<Id> cover;
};

// Undirected graph with a known vertex cover in which every node has an
// incident edge. Each undirected edge {x, y} yields two actions: x before y
// and y before x. Social edges go both ways.
inline CoverInstance vertex_cover_instance(std::mt19937_64& rng, int n, int k) {
  CoverInstance out;
  std::vector<Id> ids;
  for (int i = 0; i < n; ++i) ids.push_back(1 + i);
  std::vector<Id> shuffled = ids;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  out.cover.insert(shuffled.begin(), shuffled.begin() + k);
  std::vector<Id> cover(out.cover.begin(), out.cover.end());
  std::uniform_int_distribution<std::size_t> pick(0, cover.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::set<std::pair<Id, Id>> undirected;
  const auto add = [&](Id x, Id y) {
    if (x != y) undirected.insert({std::min(x, y), std::max(x, y)});
  };
  for (Id x : ids) {
    if (!out.cover.count(x)) add(x, cover[pick(rng)]);
  }
  for (Id c : cover) {
    for (Id x : ids) {
      if (unit(rng) < 0.3) add(c, x);
    }
  }
  // A cover node may still be isolated when k is the whole graph minus one.
  for (Id c : cover) {
    bool touched = false;
    for (const auto& [x, y] : undirected) touched |= x == c || y == c;
    if (!touched) add(c, c == ids[0] ? ids[1] : ids[0]);
  }
  out.inst.users = ids;
  Id action = 1;
  for (const auto& [x, y] : undirected) {
    out.inst.edges.push_back({x, y});
    out.inst.edges.push_back({y, x});
    out.inst.log.push_back({x, action, 0});
    out.inst.log.push_back({y, action, 1});
    ++action;
    out.inst.log.push_back({y, action, 0});
    out.inst.log.push_back({x, action, 1});
    ++action;
  }
  return out;
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("credist_test_" + std::to_string(rd()) + "_" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path write(const std::string& name,
                              const std::string& text) const {
    const auto p = path_ / name;
    std::ofstream(p, std::ios::binary) << text;
    return p;
  }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace fixture

#endif  // CREDIST_TESTS_SUPPORT_FIXTURES_HPP_
