// Copyright 2026 The SLR Engine Authors
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

// Command-line surface of the ranking engine: single-impression ranking,
// benchmark sweeps, lambda tuning, the Monte-Carlo verifier, planning
// workflows, and the HTTP service.

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "slr/baseline.hpp"
#include "slr/harness.hpp"
#include "slr/instance_io.hpp"
#include "slr/model.hpp"
#include "slr/planning.hpp"
#include "slr/planning_io.hpp"
#include "slr/ranker.hpp"
#include "slr/service.hpp"

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    if (!content.empty() && content.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failure: " + path);
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ',')) {
    if (token.empty()) continue;
    values.push_back(std::stod(token));
  }
  if (values.empty()) throw std::runtime_error("empty list: " + text);
  return values;
}

std::vector<std::pair<std::size_t, std::size_t>> parse_sizes(
    const std::string& text) {
  std::vector<std::pair<std::size_t, std::size_t>> sizes;
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ',')) {
    if (token.empty()) continue;
    const auto x = token.find('x');
    if (x == std::string::npos) {
      throw std::runtime_error("sizes look like MxN, got: " + token);
    }
    sizes.emplace_back(std::stoul(token.substr(0, x)),
                       std::stoul(token.substr(x + 1)));
  }
  if (sizes.empty()) throw std::runtime_error("empty size list");
  return sizes;
}

slr::TimingMode parse_timing(const std::string& mode) {
  if (mode == "wall") return slr::TimingMode::kWall;
  if (mode == "off") return slr::TimingMode::kOff;
  throw std::runtime_error("timing must be 'wall' or 'off', got: " + mode);
}

slr::Statistic parse_statistic(const std::string& text) {
  if (text == "mean") return slr::Statistic::mean();
  if (text == "median") return slr::Statistic::median();
  if (!text.empty() && text[0] == 'q') {
    return slr::Statistic::quantile(std::stod(text.substr(1)));
  }
  throw std::runtime_error("statistic must be mean, median, or q<value>");
}

// History documents: {"history": [{"impression": {...}, "plan": [ids...]}]}
// with plan ids listed in caller slot order (null or "" for an empty slot).
std::vector<std::pair<slr::Impression, slr::RankingPlan>> parse_history(
    const std::string& text) {
  const json doc = json::parse(text);
  if (!doc.is_object() || !doc.contains("history") ||
      !doc["history"].is_array()) {
    throw std::runtime_error("history document needs a 'history' array");
  }
  std::vector<std::pair<slr::Impression, slr::RankingPlan>> history;
  for (const json& node : doc["history"]) {
    slr::Impression imp = slr::parse_impression(node.at("impression").dump());
    if (!node.contains("plan") || !node["plan"].is_array()) {
      throw std::runtime_error("history entry needs a 'plan' array");
    }
    std::vector<std::int32_t> caller(imp.slot_count(),
                                     slr::RankingPlan::kEmptySlot);
    const json& plan_ids = node["plan"];
    if (plan_ids.size() != imp.slot_count()) {
      throw std::runtime_error("plan length must equal the slot count");
    }
    for (std::size_t d = 0; d < plan_ids.size(); ++d) {
      if (plan_ids[d].is_null()) continue;
      const std::string id = plan_ids[d].get<std::string>();
      if (id.empty()) continue;
      bool found = false;
      for (std::size_t j = 0; j < imp.item_count(); ++j) {
        if (imp.items[j].id == id) {
          caller[d] = static_cast<std::int32_t>(j);
          found = true;
          break;
        }
      }
      if (!found) throw std::runtime_error("plan references unknown id " + id);
    }
    slr::RankingPlan plan;
    plan.assignment.resize(imp.slot_count());
    for (std::size_t k = 0; k < imp.slot_count(); ++k) {
      plan.assignment[k] = caller[imp.slot_order[k]];
    }
    history.emplace_back(std::move(imp), std::move(plan));
  }
  return history;
}

json plan_to_document(const slr::Impression& imp, const slr::RankingPlan& plan,
                      const slr::EvalResult& eval) {
  json doc;
  json ids = json::array();
  for (std::int32_t entry : slr::to_caller_slots(imp, plan)) {
    if (entry == slr::RankingPlan::kEmptySlot) {
      ids.push_back(nullptr);
    } else {
      ids.push_back(imp.items[static_cast<std::size_t>(entry)].id);
    }
  }
  doc["items"] = std::move(ids);
  doc["provenance"] = slr::to_string(plan.provenance);
  doc["revenue"] = eval.revenue;
  doc["relevance"] = eval.relevance;
  doc["relevance_ratio"] = eval.relevance_ratio;
  return doc;
}

std::atomic<bool> g_shutdown{false};

void handle_signal(int) { g_shutdown = true; }

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"slr: low-latency sponsored-listings ranking engine"};
  app.require_subcommand(1);

  // rank
  std::string rank_input;
  std::string rank_mode = "feasible";
  std::optional<std::uint64_t> rank_seed;
  std::optional<double> rank_baseline_w;
  auto* rank = app.add_subcommand("rank", "Rank one impression from a file");
  rank->add_option("--input", rank_input, "Instance document")->required();
  rank->add_option("--mode", rank_mode, "feasible or randomized");
  rank->add_option("--seed", rank_seed, "Sampling seed (randomized mode)");
  rank->add_option("--baseline-w", rank_baseline_w,
                   "Also report the score baseline at this ad weight");

  // bench-lambda
  std::size_t bl_m = 50, bl_n = 500;
  std::string bl_lambdas = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,0.925,0.95,0.975";
  int bl_trials = 100;
  std::uint64_t bl_seed = 1;
  std::string bl_out, bl_timing = "wall";
  auto* bench_lambda =
      app.add_subcommand("bench-lambda", "Gap/runtime sweep over lambda");
  bench_lambda->add_option("--m", bl_m, "Slot count");
  bench_lambda->add_option("--n", bl_n, "Candidate count");
  bench_lambda->add_option("--lambdas", bl_lambdas, "Comma-separated lambdas");
  bench_lambda->add_option("--trials", bl_trials, "Trials per lambda");
  bench_lambda->add_option("--seed", bl_seed, "Base seed");
  bench_lambda->add_option("--out", bl_out, "CSV output file (default stdout)");
  bench_lambda->add_option("--timing", bl_timing,
                           "wall (measure) or off (deterministic zeros)");

  // bench-size
  std::string bs_sizes = "10x50,20x100,50x500,50x2000";
  double bs_lambda = 0.95;
  int bs_trials = 100;
  std::uint64_t bs_seed = 1;
  std::string bs_out, bs_timing = "wall";
  auto* bench_size =
      app.add_subcommand("bench-size", "Gap/runtime sweep over problem sizes");
  bench_size->add_option("--sizes", bs_sizes, "Comma-separated MxN pairs");
  bench_size->add_option("--lambda", bs_lambda, "Relevance parameter");
  bench_size->add_option("--trials", bs_trials, "Trials per size");
  bench_size->add_option("--seed", bs_seed, "Base seed");
  bench_size->add_option("--out", bs_out, "CSV output file (default stdout)");
  bench_size->add_option("--timing", bs_timing, "wall or off");

  // tune
  std::string tune_input, tune_statistic = "mean";
  double tune_delta = 0.01;
  int tune_steps = 2;
  auto* tune = app.add_subcommand(
      "tune", "Suggest lambda from historical impressions and plans");
  tune->add_option("--input", tune_input, "History document")->required();
  tune->add_option("--statistic", tune_statistic, "mean, median, or q<value>");
  tune->add_option("--delta", tune_delta, "Grid step");
  tune->add_option("--steps", tune_steps, "Grid steps on each side");

  // verify-theorem1
  std::size_t vt_m = 3, vt_n = 6, vt_instances = 200;
  double vt_lambda = 0.9;
  int vt_draws = 20000;
  std::uint64_t vt_seed = 1;
  auto* verify = app.add_subcommand(
      "verify-theorem1",
      "Monte-Carlo check: randomized rankings average to the exact relaxed "
      "optimum");
  verify->add_option("--m", vt_m, "Slot count");
  verify->add_option("--n", vt_n, "Candidate count");
  verify->add_option("--lambda", vt_lambda, "Relevance parameter");
  verify->add_option("--instances", vt_instances, "Binding instances to test");
  verify->add_option("--draws", vt_draws, "Draws per instance");
  verify->add_option("--seed", vt_seed, "Base seed");

  // plan-duals
  std::string pd_input, pd_out;
  int pd_iterations = 200;
  double pd_step = 1.0;
  std::uint64_t pd_seed = 0;
  auto* plan_duals = app.add_subcommand(
      "plan-duals", "Estimate global-constraint dual prices offline");
  plan_duals->add_option("--input", pd_input, "Planning model document")
      ->required();
  plan_duals->add_option("--iterations", pd_iterations, "Ascent iterations");
  plan_duals->add_option("--step", pd_step, "Step scale c in c/sqrt(t)");
  plan_duals->add_option("--seed", pd_seed, "Reserved; ascent is deterministic");
  plan_duals->add_option("--out", pd_out, "Output model file (default stdout)");

  // plan-rank
  std::string pr_input;
  std::size_t pr_index = 0;
  auto* plan_rank = app.add_subcommand(
      "plan-rank", "Rank one model impression under its dual prices");
  plan_rank->add_option("--input", pr_input, "Planning model document")
      ->required();
  plan_rank->add_option("--impression", pr_index, "Impression index");

  // export-lp
  std::string el_input, el_out;
  auto* export_lp = app.add_subcommand(
      "export-lp", "Emit the offline planning problem in LP text format");
  export_lp->add_option("--input", el_input, "Planning model document")
      ->required();
  export_lp->add_option("--out", el_out, "LP output file (default stdout)");

  // serve
  int serve_port = -1;
  std::string serve_host = "0.0.0.0";
  double serve_deadline_ms = 100.0;
  std::string serve_profile;
  auto* serve = app.add_subcommand("serve", "Serve POST /rank over HTTP");
  serve->add_option("--port", serve_port,
                    "Port (default: SLR_PORT env var, else 8080)");
  serve->add_option("--host", serve_host, "Bind address");
  serve->add_option("--deadline-ms", serve_deadline_ms,
                    "Per-request solve budget");
  serve->add_option("--weight-profile", serve_profile,
                    "JSON array of position weights for 'slots' requests");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help() << std::flush;
    return 2;
  }

  try {
    if (*rank) {
      slr::ServiceConfig config;
      json doc = json::parse(read_file(rank_input), nullptr, false);
      if (doc.is_discarded()) throw slr::ParseError("malformed JSON input");
      doc["mode"] = rank_mode;
      if (rank_seed.has_value()) doc["seed"] = *rank_seed;
      if (rank_baseline_w.has_value()) doc["baseline"] = {{"w", *rank_baseline_w}};
      const slr::RankRequest request =
          slr::parse_rank_request(doc.dump(), config);
      const slr::RankResponse response = slr::handle_rank(request);
      std::cout << slr::rank_response_to_json(response) << "\n";
      return 0;
    }

    if (*bench_lambda) {
      const auto records =
          slr::run_lambda_sweep(bl_m, bl_n, parse_double_list(bl_lambdas),
                                bl_trials, bl_seed, parse_timing(bl_timing));
      write_output(bl_out, slr::to_csv(records));
      return 0;
    }

    if (*bench_size) {
      const auto records =
          slr::run_size_sweep(parse_sizes(bs_sizes), bs_lambda, bs_trials,
                              bs_seed, parse_timing(bs_timing));
      write_output(bs_out, slr::to_csv(records));
      return 0;
    }

    if (*tune) {
      const auto history = parse_history(read_file(tune_input));
      const slr::TuneReport report = slr::tune_lambda(
          history, parse_statistic(tune_statistic), tune_delta, tune_steps);
      std::cout << slr::tune_report_to_json(report) << "\n";
      return 0;
    }

    if (*verify) {
      const slr::Theorem1Report report = slr::verify_theorem1(
          vt_m, vt_n, vt_lambda, vt_instances, vt_draws, vt_seed);
      std::cout << slr::theorem1_report_to_json(report) << "\n";
      return 0;
    }

    if (*plan_duals) {
      const slr::GlobalPlanModel model = slr::parse_plan_model(read_file(pd_input));
      slr::AscentReport report;
      const slr::GlobalPlanModel tuned = slr::estimate_duals(
          model, {pd_iterations, pd_step, pd_seed}, &report);
      write_output(pd_out, slr::plan_model_to_json(tuned));
      std::cerr << "iterations=" << report.iterations
                << " best_dual_objective=" << report.best_dual_objective
                << " max_violation=" << report.final_violations.max_violation
                << "\n";
      return 0;
    }

    if (*plan_rank) {
      const slr::GlobalPlanModel model = slr::parse_plan_model(read_file(pr_input));
      const slr::RankOutcome outcome = slr::rank_with_duals(model, pr_index);
      const slr::Impression& imp = model.impressions[pr_index].impression;
      json doc = plan_to_document(imp, outcome.plan,
                                  slr::evaluate(imp, outcome.plan));
      doc["constraint_redundant"] = outcome.constraint_redundant;
      std::cout << doc.dump(2) << "\n";
      return 0;
    }

    if (*export_lp) {
      const slr::GlobalPlanModel model = slr::parse_plan_model(read_file(el_input));
      std::ostringstream sink;
      const slr::LpExportStats stats = slr::export_offline_lp(model, sink);
      write_output(el_out, sink.str());
      std::cerr << "variables=" << stats.variables << " rows=" << stats.rows
                << "\n";
      return 0;
    }

    if (*serve) {
      int port = serve_port;
      if (port < 0) {
        const char* env = std::getenv("SLR_PORT");
        port = env != nullptr ? std::atoi(env) : 8080;
      }
      slr::ServiceConfig config;
      config.deadline_ms = serve_deadline_ms;
      if (!serve_profile.empty()) {
        const json profile = json::parse(read_file(serve_profile));
        if (!profile.is_array()) {
          throw std::runtime_error("weight profile must be a JSON array");
        }
        for (const json& w : profile) {
          config.weight_profile.push_back(w.get<double>());
        }
      }
      slr::RankService service(config);
      const int bound = service.start(serve_host, port);
      if (bound <= 0) {
        std::cerr << "error: io: cannot bind " << serve_host << ":" << port
                  << "\n";
        return 1;
      }
      std::cerr << "listening on " << serve_host << ":" << bound << "\n";
      std::signal(SIGINT, handle_signal);
      std::signal(SIGTERM, handle_signal);
      while (!g_shutdown) {
        std::this_thread::sleep_for(std::chrono::milliseconds(100));
      }
      service.stop();
      return 0;
    }
  } catch (const slr::ParseError& e) {
    std::cerr << "error: parse: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: validation: " << e.what() << "\n";
    return 1;
  } catch (const json::exception& e) {
    std::cerr << "error: parse: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: io: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
