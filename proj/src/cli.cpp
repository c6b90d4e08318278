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

#include "credist/cli.hpp"

#include <sys/resource.h>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"
#include "credist/baselines.hpp"
#include "credist/core_model.hpp"
#include "credist/credit_engine.hpp"
#include "credist/errors.hpp"
#include "credist/evaluation.hpp"
#include "credist/seed_selector.hpp"
#include "text_io.hpp"

namespace credist::cli {
namespace {

namespace fs = std::filesystem;

long peak_rss_kb() {
  rusage usage{};
  getrusage(RUSAGE_SELF, &usage);
  return usage.ru_maxrss;
}

fs::path prepare_output_dir(const RunConfig& cfg) {
  fs::path dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir.string());
  return dir;
}

struct Inputs {
  SocialGraph graph;
  ActionLog log;
};

Inputs load_inputs(const RunConfig& cfg, bool need_log) {
  if (cfg.graph_path.empty()) throw Error("--graph is required");
  Inputs in;
  in.graph = load_social_graph(cfg.graph_path);
  if (need_log) {
    if (cfg.log_path.empty()) throw Error("--log is required");
    in.log = load_action_log(cfg.log_path, in.graph);
  }
  return in;
}

// Training part of the log: --train-actions when given, else all of it.
ActionLog training_log(const RunConfig& cfg, const ActionLog& log) {
  if (cfg.train_actions_path.empty()) return log;
  const auto ids = load_id_list(cfg.train_actions_path);
  return log.subset(ids);
}

std::vector<NodeId> to_nodes(const SocialGraph& graph,
                             const std::vector<UserId>& users) {
  std::vector<NodeId> nodes;
  nodes.reserve(users.size());
  for (UserId u : users) nodes.push_back(graph.node(u));
  return nodes;
}

CascadeModel cascade_model(const std::string& name) {
  return name == "lt" ? CascadeModel::kLT : CascadeModel::kIC;
}

CascadeConfig cascade_config(const RunConfig& cfg) {
  CascadeConfig c;
  c.model = cascade_model(cfg.model);
  c.trials = cfg.trials;
  c.rng_seed = cfg.rng_seed;
  c.threads = cfg.threads;
  return c;
}

// Edge probabilities for the IC/LT baselines. LT defaults to weights learned
// from the (training) log unless another assignment is requested explicitly.
EdgeProbGraph edge_probabilities(const RunConfig& cfg, const SocialGraph& graph,
                                 const ActionLog* train, bool assign_given) {
  std::optional<EdgeProbGraph> g;
  const std::string scheme =
      (cfg.model == "lt" && !assign_given) ? "learned" : cfg.assign;
  if (scheme == "wc") {
    g = assign_wc(graph);
  } else if (scheme == "tv") {
    g = assign_tv(graph, cfg.rng_seed);
  } else if (scheme == "un") {
    g = assign_un(graph);
  } else if (scheme == "file") {
    if (cfg.probs_path.empty()) throw Error("--assign file needs --probs");
    g = load_edge_probs(cfg.probs_path, graph);
  } else {
    if (train == nullptr) throw Error("--assign learned needs --log");
    g = learn_lt_weights(*train, graph);
  }
  if (cfg.perturb) g = perturb_pt(*g, cfg.rng_seed);
  return std::move(*g);
}

DirectCreditPolicy credit_policy(const RunConfig& cfg,
                                 const TemporalParams& params,
                                 const SocialGraph& graph) {
  return cfg.credit_policy == "uniform"
             ? DirectCreditPolicy::uniform()
             : DirectCreditPolicy::time_decay(params, graph);
}

void cmd_ingest(const RunConfig& cfg, std::ostream& out) {
  const Inputs in = load_inputs(cfg, true);
  const fs::path dir = prepare_output_dir(cfg);
  write_social_graph(dir / "graph.tsv", in.graph);
  write_action_log(dir / "log.tsv", in.log, in.graph);
  std::size_t initiators = 0;
  DagBuilder builder(in.graph);
  for (ActionIndex a = 0; a < in.log.num_actions(); ++a) {
    initiators += extract_initiators(builder.build(in.log, a)).size();
  }
  std::ofstream summary(dir / "summary.tsv", std::ios::binary);
  summary << "nodes\t" << in.graph.num_nodes() << "\nedges\t"
          << in.graph.num_edges() << "\ntuples\t" << in.log.size()
          << "\nactions\t" << in.log.num_actions() << "\ninitiators\t"
          << initiators << '\n';
  out << "ingested " << in.log.size() << " tuples over "
      << in.log.num_actions() << " actions\n";
}

void cmd_split(const RunConfig& cfg, std::ostream& out) {
  const Inputs in = load_inputs(cfg, true);
  const fs::path dir = prepare_output_dir(cfg);
  const TrainTestSplit split = split_train_test(in.log);
  write_id_list(dir / "train_actions.txt", split.train);
  write_id_list(dir / "test_actions.txt", split.test);
  write_action_log(dir / "train_log.tsv", in.log.subset(split.train), in.graph);
  write_action_log(dir / "test_log.tsv", in.log.subset(split.test), in.graph);
  out << "train " << split.train.size() << " actions, test "
      << split.test.size() << " actions\n";
}

void cmd_learn(const RunConfig& cfg, std::ostream& out) {
  const Inputs in = load_inputs(cfg, true);
  const ActionLog train = training_log(cfg, in.log);
  const fs::path dir = prepare_output_dir(cfg);
  const TemporalParams params = learn_time_params(train, in.graph);
  {
    std::ofstream tau(dir / "tau.tsv", std::ios::binary);
    for (EdgeIndex e = 0; e < in.graph.num_edges(); ++e) {
      if (auto t = params.tau(e)) {
        tau << in.graph.user_id(in.graph.edge_source(e)) << '\t'
            << in.graph.user_id(in.graph.edge_target(e)) << '\t'
            << detail::format_double(*t) << '\n';
      }
    }
    std::ofstream infl(dir / "infl.tsv", std::ios::binary);
    for (NodeId u = 0; u < in.graph.num_nodes(); ++u) {
      if (train.actions_performed(u) > 0) {
        infl << in.graph.user_id(u) << '\t'
             << detail::format_double(params.infl(u)) << '\n';
      }
    }
  }
  write_edge_probs(dir / "lt_weights.tsv", learn_lt_weights(train, in.graph));
  if (cfg.dump_credits) {
    const CreditStore store = scan(train, in.graph,
                                   credit_policy(cfg, params, in.graph),
                                   TruncationThreshold{cfg.lambda});
    write_credit_store(dir / "credits.tsv", store, in.graph);
    out << "credit entries " << store.num_entries() << '\n';
  }
  out << "global tau " << params.global_tau() << '\n';
}

void cmd_select(const RunConfig& cfg, bool assign_given, std::ostream& out) {
  const bool needs_log = cfg.model == "cd" || cfg.model == "lt" ||
                         cfg.assign == "learned";
  const Inputs in = load_inputs(cfg, needs_log || !cfg.log_path.empty());
  const ActionLog train = training_log(cfg, in.log);
  SeedSelection selection;
  if (cfg.model == "cd") {
    const TemporalParams params = cfg.credit_policy == "uniform"
                                      ? TemporalParams()
                                      : learn_time_params(train, in.graph);
    CreditStore store = scan(train, in.graph,
                             credit_policy(cfg, params, in.graph),
                             TruncationThreshold{cfg.lambda});
    out << "credit entries " << store.num_entries() << '\n';
    selection = select_seeds(store, cfg.k, cfg.threads);
  } else if (cfg.model == "ic" || cfg.model == "lt") {
    const EdgeProbGraph g =
        edge_probabilities(cfg, in.graph, needs_log ? &train : nullptr,
                           assign_given);
    selection = greedy_mc(g, cfg.k, cascade_config(cfg));
  } else {
    if (cfg.k > in.graph.num_nodes()) {
      throw ValidationError("k exceeds the number of nodes");
    }
    selection.seeds = cfg.model == "high-degree" ? high_degree(in.graph, cfg.k)
                                                 : pagerank(in.graph, cfg.k);
    selection.gains.assign(selection.seeds.size(), 0.0);
  }
  const fs::path dir = prepare_output_dir(cfg);
  write_seed_file(dir / "seeds.tsv", selection, in.graph);
  out << "selected " << selection.seeds.size() << " seeds, sigma "
      << selection.sigma << '\n';
}

void cmd_simulate(const RunConfig& cfg, bool assign_given, std::ostream& out) {
  if (cfg.seeds_path.empty()) throw Error("--seeds is required");
  const bool needs_log = (cfg.model == "lt" && !assign_given) ||
                         cfg.assign == "learned";
  const Inputs in = load_inputs(cfg, needs_log);
  const ActionLog train = needs_log ? training_log(cfg, in.log) : ActionLog();
  const EdgeProbGraph g = edge_probabilities(
      cfg, in.graph, needs_log ? &train : nullptr, assign_given);
  const auto seeds = to_nodes(in.graph, load_seed_users(cfg.seeds_path));
  const double spread = mc_spread(g, seeds, cascade_config(cfg));
  const fs::path dir = prepare_output_dir(cfg);
  std::ofstream file(dir / "spread.tsv", std::ios::binary);
  file << "model\tseeds\ttrials\tspread\n"
       << cfg.model << '\t' << seeds.size() << '\t' << cfg.trials << '\t'
       << detail::format_double(spread) << '\n';
  out << "spread " << spread << '\n';
}

void cmd_evaluate(const RunConfig& cfg, bool assign_given, std::ostream& out) {
  const fs::path dir = prepare_output_dir(cfg);
  if (!cfg.compare_paths.empty()) {
    const auto a = load_seed_users(cfg.compare_paths.at(0));
    const auto b = load_seed_users(cfg.compare_paths.at(1));
    const std::size_t common =
        seed_intersection<UserId>(std::span<const UserId>(a),
                                  std::span<const UserId>(b));
    std::ofstream file(dir / "intersection.tsv", std::ios::binary);
    file << "size_a\tsize_b\tintersection\n"
         << a.size() << '\t' << b.size() << '\t' << common << '\n';
    out << "intersection " << common << '\n';
    return;
  }
  const Inputs in = load_inputs(cfg, true);
  const TrainTestSplit split = split_train_test(in.log);
  const ActionLog train = in.log.subset(split.train);
  const ActionLog test = in.log.subset(split.test);
  if (test.num_actions() == 0) {
    throw ValidationError("evaluate: the log has fewer than 5 actions, no test set");
  }

  std::vector<SpreadPrediction> preds;
  if (cfg.model == "cd") {
    const TemporalParams params = learn_time_params(train, in.graph);
    const CreditStore store = scan(train, in.graph,
                                   credit_policy(cfg, params, in.graph),
                                   TruncationThreshold{cfg.lambda});
    preds = predict_test_spreads(CdModel{&store}, test, in.graph, cfg.threads);
  } else {
    const EdgeProbGraph g =
        edge_probabilities(cfg, in.graph, &train, assign_given);
    preds = predict_test_spreads(McModel{&g, cascade_config(cfg)}, test,
                                 in.graph, cfg.threads);
  }
  const BinnedRmse rmse = rmse_binned(preds, cfg.bin_width);
  const auto cdf = error_cdf(preds);
  write_predictions(dir / "predictions.tsv", preds);
  write_rmse_table(dir / "rmse.tsv", rmse, '\t');
  write_rmse_table(dir / "rmse.csv", rmse, ',');
  write_cdf_table(dir / "error_cdf.csv", cdf, ',');
  out << "test actions " << preds.size() << ", global rmse "
      << global_rmse(preds) << '\n';
}

void cmd_gen_synthetic(const RunConfig& cfg, std::ostream& out) {
  SyntheticParams p;
  p.nodes = cfg.nodes;
  p.edges = cfg.edges;
  p.actions = cfg.actions;
  p.seeds_per_action = cfg.seeds_per_action;
  p.probs = cfg.synthetic_probs == "wc" ? SyntheticProbs::kWeightedCascade
                                        : SyntheticProbs::kUniform;
  p.edge_prob = cfg.edge_prob;
  p.step = cfg.step;
  p.rng_seed = cfg.rng_seed;
  const SyntheticData data = gen_synthetic(p);
  const fs::path dir = prepare_output_dir(cfg);
  write_social_graph(dir / "graph.tsv", data.graph);
  write_action_log(dir / "log.tsv", data.log, data.graph);
  out << "generated " << data.graph.num_edges() << " edges, "
      << data.log.size() << " tuples\n";
}

nlohmann::json to_json(const RunConfig& c) {
  return {{"command", c.command},       {"graph", c.graph_path},
          {"log", c.log_path},          {"train_actions", c.train_actions_path},
          {"seeds", c.seeds_path},      {"probs", c.probs_path},
          {"compare", c.compare_paths}, {"model", c.model},
          {"assign", c.assign},         {"credit_policy", c.credit_policy},
          {"lambda", c.lambda},         {"k", c.k},
          {"trials", c.trials},         {"rng_seed", c.rng_seed},
          {"threads", c.threads},       {"bin_width", c.bin_width},
          {"perturb", c.perturb},       {"output_dir", c.output_dir}};
}

void write_manifest(const RunConfig& cfg, double seconds, long rss_kb) {
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  std::ofstream manifest(fs::path(cfg.output_dir) / "manifest.jsonl",
                         std::ios::app);
  nlohmann::json line = {{"config", to_json(cfg)},
                         {"wall_seconds", seconds},
                         {"peak_rss_kb", rss_kb}};
  manifest << line.dump() << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Influence maximization from action propagation logs", "credist"};
  app.require_subcommand(1);

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--output-dir,-o", cfg.output_dir, "Directory for outputs");
    sub->add_option("--threads", cfg.threads, "Worker threads")
        ->check(CLI::PositiveNumber);
    sub->add_option("--rng-seed", cfg.rng_seed, "Seed for every random choice");
  };
  const auto add_inputs = [&](CLI::App* sub) {
    sub->add_option("--graph", cfg.graph_path, "Social graph (src dst)");
    sub->add_option("--log", cfg.log_path, "Action log (user action time)");
  };
  const auto add_credit = [&](CLI::App* sub) {
    sub->add_option("--lambda", cfg.lambda, "Credit truncation threshold")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--credit-policy", cfg.credit_policy, "Direct credit")
        ->check(CLI::IsMember({"uniform", "time-decay"}));
  };
  CLI::Option* assign_opt = nullptr;
  std::vector<CLI::Option*> assign_opts;
  const auto add_mc = [&](CLI::App* sub) {
    assign_opt = sub->add_option("--assign", cfg.assign, "Edge probabilities")
                     ->check(CLI::IsMember({"wc", "tv", "un", "file", "learned"}));
    assign_opts.push_back(assign_opt);
    sub->add_option("--probs", cfg.probs_path, "Probability file (src dst p)");
    sub->add_flag("--perturb", cfg.perturb, "Perturb probabilities by +-20%");
    sub->add_option("--trials", cfg.trials, "Monte-Carlo trials")
        ->check(CLI::PositiveNumber);
  };

  auto* ingest = app.add_subcommand("ingest", "Validate and normalise inputs");
  add_inputs(ingest);
  add_common(ingest);

  auto* split = app.add_subcommand("split", "Train/test split of the actions");
  add_inputs(split);
  add_common(split);

  auto* learn = app.add_subcommand("learn", "Learn temporal parameters and LT weights");
  add_inputs(learn);
  add_credit(learn);
  learn->add_option("--train-actions", cfg.train_actions_path);
  learn->add_flag("--dump-credits", cfg.dump_credits, "Also write credits.tsv");
  add_common(learn);

  auto* select = app.add_subcommand("select", "Select seeds");
  add_inputs(select);
  select->add_option("--model", cfg.model)
      ->check(CLI::IsMember({"cd", "ic", "lt", "high-degree", "pagerank"}));
  select->add_option("--k", cfg.k, "Number of seeds");
  select->add_option("--train-actions", cfg.train_actions_path);
  add_credit(select);
  add_mc(select);
  add_common(select);

  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo spread of a seed set");
  add_inputs(simulate);
  simulate->add_option("--model", cfg.model)
      ->check(CLI::IsMember({"ic", "lt"}));
  simulate->add_option("--seeds", cfg.seeds_path, "Seed file");
  simulate->add_option("--train-actions", cfg.train_actions_path);
  add_mc(simulate);
  add_common(simulate);

  auto* evaluate = app.add_subcommand("evaluate", "Spread prediction accuracy");
  add_inputs(evaluate);
  evaluate->add_option("--model", cfg.model)
      ->check(CLI::IsMember({"cd", "ic", "lt"}));
  evaluate->add_option("--bin-width", cfg.bin_width)->check(CLI::PositiveNumber);
  evaluate->add_option("--compare", cfg.compare_paths, "Two seed files")
      ->expected(2);
  add_credit(evaluate);
  add_mc(evaluate);
  add_common(evaluate);

  auto* gen = app.add_subcommand("gen-synthetic", "Generate a graph and log");
  gen->add_option("--nodes", cfg.nodes)->check(CLI::PositiveNumber);
  gen->add_option("--edges", cfg.edges);
  gen->add_option("--actions", cfg.actions);
  gen->add_option("--seeds-per-action", cfg.seeds_per_action)
      ->check(CLI::PositiveNumber);
  gen->add_option("--edge-prob", cfg.edge_prob)->check(CLI::Range(0.0, 1.0));
  gen->add_option("--probs-scheme", cfg.synthetic_probs)
      ->check(CLI::IsMember({"uniform", "wc"}));
  gen->add_option("--step", cfg.step)->check(CLI::PositiveNumber);
  add_common(gen);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << app.help();
    return 2;
  }

  CLI::App* chosen = app.get_subcommands().front();
  cfg.command = chosen->get_name();
  if (chosen == simulate && cfg.model == "cd") cfg.model = "ic";
  bool assign_given = false;
  for (CLI::Option* opt : assign_opts) assign_given |= opt->count() > 0;

  const auto start = std::chrono::steady_clock::now();
  try {
    if (chosen == ingest) {
      cmd_ingest(cfg, out);
    } else if (chosen == split) {
      cmd_split(cfg, out);
    } else if (chosen == learn) {
      cmd_learn(cfg, out);
    } else if (chosen == select) {
      cmd_select(cfg, assign_given, out);
    } else if (chosen == simulate) {
      cmd_simulate(cfg, assign_given, out);
    } else if (chosen == evaluate) {
      cmd_evaluate(cfg, assign_given, out);
    } else {
      cmd_gen_synthetic(cfg, out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  const long rss = peak_rss_kb();
  err << cfg.command << ": wall " << seconds << " s, peak rss " << rss / 1024
      << " MiB\n";
  write_manifest(cfg, seconds, rss);
  return 0;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace credist::cli
