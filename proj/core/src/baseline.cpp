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

#include "slr/baseline.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "slr/ranker.hpp"

namespace slr {

double baseline_score(const Item& item, const ScoreConfig& cfg) {
  if (!(cfg.w >= 0.0) || !std::isfinite(cfg.w)) {
    throw std::invalid_argument("score weight w must be finite and >= 0");
  }
  if (!item.has_rates) {
    throw std::invalid_argument("baseline scoring needs the rate "
                                "decomposition; item '" +
                                item.id + "' carries only (r, v)");
  }
  return item.ptr * item.take_rate * item.price +
         cfg.w * item.ptr * item.ad_rate * item.price;
}

RankingPlan score_rank(const Impression& imp, const ScoreConfig& cfg) {
  std::vector<double> scores(imp.item_count());
  for (std::size_t j = 0; j < imp.item_count(); ++j) {
    scores[j] = baseline_score(imp.items[j], cfg);
  }
  RankingPlan plan = primal_response(scores, imp.slot_count());
  plan.provenance = Provenance::kBaseline;
  return plan;
}

} // namespace slr
