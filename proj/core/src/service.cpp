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

#include "slr/service.hpp"

#include <atomic>
#include <chrono>
#include <random>
#include <stdexcept>
#include <thread>

#include "httplib.h"
#include "json.hpp"

#include "slr/instance_io.hpp"
#include "slr/ranker.hpp"

namespace slr {

using nlohmann::json;

namespace io_detail {
json parse_document(const std::string& text);
} // namespace io_detail

RankRequest parse_rank_request(const std::string& body,
                               const ServiceConfig& config) {
  json doc = io_detail::parse_document(body);
  if (!doc.is_object()) throw ParseError("request body must be a JSON object");

  RankRequest request;
  if (doc.contains("mode")) {
    if (!doc["mode"].is_string()) throw ParseError("'mode' must be a string");
    const std::string mode = doc["mode"].get<std::string>();
    if (mode == "feasible") {
      request.mode = RankRequest::Mode::kFeasible;
    } else if (mode == "randomized") {
      request.mode = RankRequest::Mode::kRandomized;
    } else {
      throw ParseError("'mode' must be 'feasible' or 'randomized'");
    }
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) {
      throw ParseError("'seed' must be a nonnegative integer");
    }
    request.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("baseline")) {
    if (!doc["baseline"].is_object() || !doc["baseline"].contains("w") ||
        !doc["baseline"]["w"].is_number()) {
      throw ParseError("'baseline' must be an object carrying a numeric 'w'");
    }
    request.baseline = ScoreConfig{doc["baseline"]["w"].get<double>()};
  }

  // A slot count falls back to the server's stored weight profile.
  if (!doc.contains("position_weights") && doc.contains("slots")) {
    if (!doc["slots"].is_number_unsigned() || doc["slots"].get<std::size_t>() == 0) {
      throw ParseError("'slots' must be a positive integer");
    }
    const std::size_t slots = doc["slots"].get<std::size_t>();
    if (config.weight_profile.empty()) {
      throw ParseError("'slots' given but the server has no weight profile; "
                       "send 'position_weights'");
    }
    if (slots > config.weight_profile.size()) {
      throw std::invalid_argument(
          "'slots' exceeds the stored weight profile length (" +
          std::to_string(config.weight_profile.size()) + ")");
    }
    doc["position_weights"] = std::vector<double>(
        config.weight_profile.begin(),
        config.weight_profile.begin() + static_cast<std::ptrdiff_t>(slots));
    doc.erase("slots");
  }
  request.impression = parse_impression(doc.dump());
  return request;
}

RankResponse handle_rank(const RankRequest& request) {
  const Impression& imp = request.impression;
  RankResponse response;

  std::uint64_t seed = 0;
  if (request.mode == RankRequest::Mode::kRandomized) {
    if (request.seed.has_value()) {
      seed = *request.seed;
    } else {
      std::random_device rd;
      seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    }
    response.seed = seed;
  }

  const auto start = std::chrono::steady_clock::now();
  const RankOutcome outcome = request.mode == RankRequest::Mode::kRandomized
                                  ? rank_randomized(imp, seed)
                                  : rank_feasible(imp);
  response.solve_time_us = std::chrono::duration<double, std::micro>(
                               std::chrono::steady_clock::now() - start)
                               .count();

  const EvalResult eval = evaluate(imp, outcome.plan);
  response.revenue = eval.revenue;
  response.relevance = eval.relevance;
  response.relevance_ratio = eval.relevance_ratio;
  response.constraint_redundant = outcome.constraint_redundant;
  response.provenance = to_string(outcome.plan.provenance);
  for (std::int32_t entry : to_caller_slots(imp, outcome.plan)) {
    response.item_ids.push_back(
        entry == RankingPlan::kEmptySlot
            ? std::string()
            : imp.items[static_cast<std::size_t>(entry)].id);
  }

  if (request.baseline.has_value()) {
    const RankingPlan plan = score_rank(imp, *request.baseline);
    const EvalResult baseline_eval = evaluate(imp, plan);
    BaselineBlock block;
    block.w = request.baseline->w;
    block.revenue = baseline_eval.revenue;
    block.relevance = baseline_eval.relevance;
    block.relevance_ratio = baseline_eval.relevance_ratio;
    for (std::int32_t entry : to_caller_slots(imp, plan)) {
      block.item_ids.push_back(
          entry == RankingPlan::kEmptySlot
              ? std::string()
              : imp.items[static_cast<std::size_t>(entry)].id);
    }
    response.baseline = std::move(block);
  }
  return response;
}

std::string rank_response_to_json(const RankResponse& response) {
  json doc;
  doc["items"] = response.item_ids;
  doc["provenance"] = response.provenance;
  doc["revenue"] = response.revenue;
  doc["relevance"] = response.relevance;
  doc["relevance_ratio"] = response.relevance_ratio;
  doc["constraint_redundant"] = response.constraint_redundant;
  doc["solve_time_us"] = response.solve_time_us;
  if (response.seed.has_value()) doc["seed"] = *response.seed;
  if (response.baseline.has_value()) {
    const BaselineBlock& block = *response.baseline;
    doc["baseline"] = {{"items", block.item_ids},
                       {"w", block.w},
                       {"revenue", block.revenue},
                       {"relevance", block.relevance},
                       {"relevance_ratio", block.relevance_ratio}};
  }
  return doc.dump();
}

struct RankService::Impl {
  ServiceConfig config;
  httplib::Server server;
  std::thread worker;
  std::atomic<bool> running{false};

  explicit Impl(ServiceConfig cfg) : config(std::move(cfg)) {
    server.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("{\"status\":\"ok\"}", "application/json");
    });
    server.Post("/rank", [this](const httplib::Request& req,
                                httplib::Response& res) {
      handle(req, res);
    });
  }

  static void error_body(httplib::Response& res, int status,
                         const std::string& kind, const std::string& message) {
    res.status = status;
    res.set_content(json{{"error", kind}, {"message", message}}.dump(),
                    "application/json");
  }

  void handle(const httplib::Request& req, httplib::Response& res) {
    RankRequest request;
    try {
      request = parse_rank_request(req.body, config);
    } catch (const ParseError& e) {
      error_body(res, 400, "malformed_request", e.what());
      return;
    } catch (const std::invalid_argument& e) {
      error_body(res, 422, "validation_failed", e.what());
      return;
    }
    try {
      RankResponse response = handle_rank(request);
      if (response.solve_time_us > config.deadline_ms * 1000.0) {
        // Over budget: report the breach instead of a stale ranking.
        error_body(res, 504, "deadline_exceeded",
                   "solve took " + std::to_string(response.solve_time_us) +
                       " us, budget is " +
                       std::to_string(config.deadline_ms * 1000.0) + " us");
        return;
      }
      res.set_content(rank_response_to_json(response), "application/json");
    } catch (const std::exception& e) {
      error_body(res, 500, "internal_error", e.what());
    }
  }
};

RankService::RankService(ServiceConfig config)
    : impl_(std::make_unique<Impl>(std::move(config))) {}

RankService::~RankService() { stop(); }

int RankService::start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) return 0;
  } else if (!impl_->server.bind_to_port(host, port)) {
    return 0;
  }
  impl_->running = true;
  impl_->worker = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void RankService::stop() {
  if (impl_ && impl_->running.exchange(false)) {
    impl_->server.stop();
    if (impl_->worker.joinable()) impl_->worker.join();
  }
}

} // namespace slr
