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

#ifndef SLR_SERVICE_HPP_
#define SLR_SERVICE_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "slr/baseline.hpp"
#include "slr/model.hpp"

// JSON-over-HTTP ranking endpoint.
//
//   POST /rank    RankRequest -> RankResponse
//   GET  /healthz liveness probe
//
// A RankRequest is an instance document plus:
//   "mode": "feasible" | "randomized"   (default feasible)
//   "seed": integer                     (randomized mode; generated and
//                                        echoed back when absent)
//   "baseline": {"w": number}           (optional side-by-side comparison)
//   "slots": integer                    (alternative to position_weights
//                                        when the server holds a weight
//                                        profile)
//
// Responses carry the ranked item ids in caller slot order, the evaluation,
// and the server-side solve time. Requests are handled on immutable data
// with no cross-request state, so identical requests (including seed) return
// identical rankings. A request whose solve exceeds the deadline gets an
// explicit timeout status, never a partial ranking.
namespace slr {

struct RankRequest {
  Impression impression;
  enum class Mode { kFeasible, kRandomized } mode = Mode::kFeasible;
  std::optional<std::uint64_t> seed;
  std::optional<ScoreConfig> baseline;
};

struct BaselineBlock {
  std::vector<std::string> item_ids;
  double w = 1.0;
  double revenue = 0.0;
  double relevance = 0.0;
  double relevance_ratio = 0.0;
};

struct RankResponse {
  std::vector<std::string> item_ids; // caller slot order
  std::string provenance;
  double revenue = 0.0;
  double relevance = 0.0;
  double relevance_ratio = 0.0;
  bool constraint_redundant = false;
  double solve_time_us = 0.0;
  std::optional<std::uint64_t> seed; // echoed in randomized mode
  std::optional<BaselineBlock> baseline;
};

struct ServiceConfig {
  double deadline_ms = 100.0; // per-request solve budget
  std::vector<double> weight_profile; // serves "slots"-style requests
};

// Payload parsing. Structural problems raise ParseError (HTTP 400);
// validation problems raise std::invalid_argument (HTTP 422).
RankRequest parse_rank_request(const std::string& body,
                               const ServiceConfig& config);

// Pure solve; no deadline handling.
RankResponse handle_rank(const RankRequest& request);

std::string rank_response_to_json(const RankResponse& response);

// Blocking HTTP server over handle_rank. start() binds (port 0 picks a free
// port) and serves on a background thread until stop().
class RankService {
 public:
  explicit RankService(ServiceConfig config);
  ~RankService();

  RankService(const RankService&) = delete;
  RankService& operator=(const RankService&) = delete;

  // Returns the bound port, or 0 on bind failure.
  int start(const std::string& host, int port);
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

} // namespace slr

#endif // SLR_SERVICE_HPP_
