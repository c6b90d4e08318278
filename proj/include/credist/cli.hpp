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

#ifndef CREDIST_CLI_HPP_
#define CREDIST_CLI_HPP_

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace credist::cli {

// Everything a subcommand may read. Defaults are the documented ones.
struct RunConfig {
  std::string command;
  std::string graph_path;
  std::string log_path;
  std::string train_actions_path;
  std::string seeds_path;
  std::string probs_path;
  std::vector<std::string> compare_paths;
  std::string model = "cd";
  std::string assign = "wc";
  std::string credit_policy = "time-decay";
  std::string synthetic_probs = "uniform";
  double lambda = 0.001;
  std::size_t k = 50;
  std::size_t trials = 10000;
  std::uint64_t rng_seed = 1;
  unsigned threads = 1;
  std::int64_t bin_width = 100;
  bool perturb = false;
  bool dump_credits = false;
  std::size_t nodes = 1000;
  std::size_t edges = 5000;
  std::size_t actions = 100;
  std::size_t seeds_per_action = 1;
  double edge_prob = 0.1;
  std::int64_t step = 100;
  std::string output_dir = ".";
};

// Exit status: 0 success, 1 I/O or validation failure, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);
int run(int argc, char** argv);

}  // namespace credist::cli

#endif  // CREDIST_CLI_HPP_
