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

#ifndef SLR_BASELINE_HPP_
#define SLR_BASELINE_HPP_

#include "slr/model.hpp"

namespace slr {

// Weight on the ad-revenue component of the composite score.
struct ScoreConfig {
  double w = 1.0;
};

// Composite score of one item: expected organic revenue plus w times
// expected ad revenue, s = r*t*p + w * r*ad*p. Throws for items without the
// rate decomposition.
double baseline_score(const Item& item, const ScoreConfig& cfg);

// Industry score-based ranking: rank by baseline_score descending, top m
// displayed, ties toward the smaller index. Requires items with the full
// rate decomposition; throws std::invalid_argument for synthetic (r, v)-only
// items.
RankingPlan score_rank(const Impression& imp, const ScoreConfig& cfg);

} // namespace slr

#endif // SLR_BASELINE_HPP_
