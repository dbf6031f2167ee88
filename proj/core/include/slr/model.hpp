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

#ifndef SLR_MODEL_HPP_
#define SLR_MODEL_HPP_

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

// Domain types for sponsored-listings ranking. One Impression is one ranking
// problem instance: m display slots with purchase-propensity weights h_i and
// n candidate items, each carrying a relevance score r_j (the estimated
// purchase-through rate) and an expected revenue v_j. A ranking assigns items
// to slots injectively; the engine maximizes position-weighted revenue while
// keeping position-weighted relevance at least lambda times the best
// achievable relevance.
namespace slr {

// Default bisection tolerance for the dual search.
inline constexpr double kDefaultEpsilon = 1e-4;

// Absolute slack used by every relevance-feasibility comparison. Keeps the
// bisection comparator stable under floating-point roundoff.
inline constexpr double kRelevanceSlack = 1e-9;

// One candidate item. Revenue decomposes as value = ptr * price *
// (take_rate + ad_rate); synthetic instances may supply (ptr, value)
// directly, in which case has_rates is false and the rate fields are unused.
struct Item {
  std::string id;
  double ptr = 0.0;       // purchase-through rate r_j, doubles as relevance
  double price = 0.0;     // p_j
  double take_rate = 0.0; // t_j, platform commission fraction
  double ad_rate = 0.0;   // ad_j, seller-chosen sponsorship fraction
  double value = 0.0;     // v_j, expected total revenue
  bool has_rates = false;

  // Builds an item from its rate decomposition; derives value.
  static Item from_rates(std::string id, double ptr, double price,
                         double take_rate, double ad_rate);
  // Builds a synthetic item carrying (relevance, value) directly.
  static Item synthetic(std::string id, double relevance, double value);
};

// A validated ranking instance. Position weights are stored sorted
// non-increasing; slot_order[k] records the caller slot that the k-th stored
// weight came from so results can be reported in caller order. Immutable
// after construction; all operations on it are pure.
struct Impression {
  std::vector<double> position_weights; // h, non-increasing, length m
  std::vector<std::size_t> slot_order;  // permutation into caller slots
  std::vector<Item> items;              // length n >= m
  double lambda = 0.0;                  // required relevance fraction, [0,1]
  double epsilon = kDefaultEpsilon;     // bisection tolerance, > 0
  double max_relevance = 0.0;           // a, cached at build time

  std::size_t slot_count() const { return position_weights.size(); }
  std::size_t item_count() const { return items.size(); }
  double relevance_floor() const { return lambda * max_relevance; }
};

// Which code path produced a plan.
enum class Provenance : std::uint8_t {
  kRedundant,       // relevance constraint redundant, revenue-sorted top-m
  kFeasiblePlus,    // feasible end of the dual bracket
  kInfeasibleMinus, // revenue-favoring end of the dual bracket
  kRandomized,      // sampled mixture of the two bracket ends
  kOracle,
  kBaseline,
  kPlanning,
};

const char* to_string(Provenance provenance);

// An injective slot -> item assignment, possibly partial. Entries index into
// Impression::items; kEmptySlot marks an unfilled slot. Slot order follows
// the impression's internal (sorted-weight) slots.
struct RankingPlan {
  static constexpr std::int32_t kEmptySlot = -1;

  std::vector<std::int32_t> assignment;
  Provenance provenance = Provenance::kFeasiblePlus;
};

// True when both plans fill the same slots with the same items.
bool same_assignment(const RankingPlan& a, const RankingPlan& b);

struct EvalResult {
  double revenue = 0.0;         // sum of h_i * v_j over filled slots
  double relevance = 0.0;       // sum of h_i * r_j over filled slots
  double relevance_ratio = 0.0; // relevance / a when a > 0, else 0
};

// Validates raw inputs and normalizes them into sorted-weight form. Throws
// std::invalid_argument naming the offending field on: empty lists, m > n,
// negative or non-finite weights, lambda outside [0,1], epsilon <= 0, or
// item-level violations (ptr/rates outside [0,1], negative price/value).
Impression build_impression(std::vector<double> raw_weights,
                            std::vector<Item> items, double lambda,
                            double epsilon = kDefaultEpsilon);

// Throws std::invalid_argument when the plan repeats an item, indexes out of
// range, or has the wrong number of slots.
void validate_plan(const Impression& imp, const RankingPlan& plan);

// Position-weighted revenue and relevance of a plan. Validates first.
EvalResult evaluate(const Impression& imp, const RankingPlan& plan);

// Best achievable position-weighted relevance a: pair the largest weights
// with the most relevant items (rearrangement argument; the assignment
// polytope is integral so no fractional plan does better).
double max_relevance(const Impression& imp);

// Re-permutes a plan's entries from internal (sorted-weight) slots back into
// the caller's original slot order.
std::vector<std::int32_t> to_caller_slots(const Impression& imp,
                                          const RankingPlan& plan);

} // namespace slr

#endif // SLR_MODEL_HPP_
