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

#ifndef SLR_PLANNING_IO_HPP_
#define SLR_PLANNING_IO_HPP_

#include <string>

#include "slr/planning.hpp"

// Planning model documents extend the instance format:
//
//   {
//     "sellers": [{"id": "s1", "inventory_limit": 5, "revenue_target": 0,
//                  "min_consumers": 0}],
//     "consumers": [{"id": "c1", "min_sellers": 0}],
//     "impressions": [
//       {"consumer": "c1",
//        "position_weights": [1.0],
//        "items": [{"id": "i1", "r": 0.5, "v": 2.0, "seller": "s1"}],
//        "lambda": 0.0}
//     ],
//     "duals": {"xi": [...], "nu": [...], "eta": [...], "theta": [...]}
//   }
//
// inventory_limit may be omitted or null for unbounded; duals are optional
// and default to zero.
namespace slr {

GlobalPlanModel parse_plan_model(const std::string& text);
GlobalPlanModel load_plan_model(const std::string& path);
std::string plan_model_to_json(const GlobalPlanModel& model);

} // namespace slr

#endif // SLR_PLANNING_IO_HPP_
