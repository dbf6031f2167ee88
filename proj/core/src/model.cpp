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

#include "slr/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace slr {
namespace {

bool is_finite(double x) { return std::isfinite(x); }

void check_unit_interval(double x, const char* field) {
  if (!is_finite(x) || x < 0.0 || x > 1.0) {
    throw std::invalid_argument(std::string(field) + " must lie in [0, 1]");
  }
}

void check_nonnegative(double x, const char* field) {
  if (!is_finite(x) || x < 0.0) {
    throw std::invalid_argument(std::string(field) +
                                " must be finite and nonnegative");
  }
}

void validate_item(const Item& item, std::size_t index) {
  const std::string where = "items[" + std::to_string(index) + "].";
  check_unit_interval(item.ptr, (where + "ptr").c_str());
  check_nonnegative(item.value, (where + "value").c_str());
  if (item.has_rates) {
    check_nonnegative(item.price, (where + "price").c_str());
    check_unit_interval(item.take_rate, (where + "take_rate").c_str());
    check_unit_interval(item.ad_rate, (where + "ad_rate").c_str());
    const double derived = item.ptr * item.price * (item.take_rate + item.ad_rate);
    const double tol = 1e-12 * std::max(1.0, std::abs(derived));
    if (std::abs(item.value - derived) > tol) {
      throw std::invalid_argument(where + "value disagrees with "
                                          "ptr*price*(take_rate+ad_rate)");
    }
  }
}

} // namespace

Item Item::from_rates(std::string id, double ptr, double price,
                      double take_rate, double ad_rate) {
  Item item;
  item.id = std::move(id);
  item.ptr = ptr;
  item.price = price;
  item.take_rate = take_rate;
  item.ad_rate = ad_rate;
  item.value = ptr * price * (take_rate + ad_rate);
  item.has_rates = true;
  validate_item(item, 0);
  return item;
}

Item Item::synthetic(std::string id, double relevance, double value) {
  Item item;
  item.id = std::move(id);
  item.ptr = relevance;
  item.value = value;
  item.has_rates = false;
  validate_item(item, 0);
  return item;
}

const char* to_string(Provenance provenance) {
  switch (provenance) {
    case Provenance::kRedundant: return "redundant";
    case Provenance::kFeasiblePlus: return "feasible_plus";
    case Provenance::kInfeasibleMinus: return "infeasible_minus";
    case Provenance::kRandomized: return "randomized";
    case Provenance::kOracle: return "oracle";
    case Provenance::kBaseline: return "baseline";
    case Provenance::kPlanning: return "planning";
  }
  return "unknown";
}

bool same_assignment(const RankingPlan& a, const RankingPlan& b) {
  return a.assignment == b.assignment;
}

Impression build_impression(std::vector<double> raw_weights,
                            std::vector<Item> items, double lambda,
                            double epsilon) {
  if (raw_weights.empty()) {
    throw std::invalid_argument("position_weights must be non-empty");
  }
  if (items.empty()) {
    throw std::invalid_argument("items must be non-empty");
  }
  if (raw_weights.size() > items.size()) {
    throw std::invalid_argument(
        "position_weights length m = " + std::to_string(raw_weights.size()) +
        " exceeds items length n = " + std::to_string(items.size()));
  }
  for (std::size_t i = 0; i < raw_weights.size(); ++i) {
    if (!is_finite(raw_weights[i]) || raw_weights[i] < 0.0) {
      throw std::invalid_argument("position_weights[" + std::to_string(i) +
                                  "] must be finite and nonnegative");
    }
  }
  check_unit_interval(lambda, "lambda");
  if (!is_finite(epsilon) || epsilon <= 0.0) {
    throw std::invalid_argument("epsilon must be finite and positive");
  }
  for (std::size_t j = 0; j < items.size(); ++j) {
    validate_item(items[j], j);
  }

  Impression imp;
  imp.slot_order.resize(raw_weights.size());
  std::iota(imp.slot_order.begin(), imp.slot_order.end(), std::size_t{0});
  // Stable so equal weights keep caller order.
  std::stable_sort(imp.slot_order.begin(), imp.slot_order.end(),
                   [&raw_weights](std::size_t a, std::size_t b) {
                     return raw_weights[a] > raw_weights[b];
                   });
  imp.position_weights.reserve(raw_weights.size());
  for (std::size_t caller_slot : imp.slot_order) {
    imp.position_weights.push_back(raw_weights[caller_slot]);
  }
  imp.items = std::move(items);
  imp.lambda = lambda;
  imp.epsilon = epsilon;

  // a: pair sorted weights with the m most relevant items.
  std::vector<double> relevance(imp.items.size());
  for (std::size_t j = 0; j < imp.items.size(); ++j) {
    relevance[j] = imp.items[j].ptr;
  }
  std::sort(relevance.begin(), relevance.end(), std::greater<>());
  double a = 0.0;
  for (std::size_t i = 0; i < imp.slot_count(); ++i) {
    a += imp.position_weights[i] * relevance[i];
  }
  imp.max_relevance = a;
  return imp;
}

void validate_plan(const Impression& imp, const RankingPlan& plan) {
  if (plan.assignment.size() != imp.slot_count()) {
    throw std::invalid_argument("plan has " +
                                std::to_string(plan.assignment.size()) +
                                " slots, impression has " +
                                std::to_string(imp.slot_count()));
  }
  std::vector<bool> used(imp.item_count(), false);
  for (std::int32_t entry : plan.assignment) {
    if (entry == RankingPlan::kEmptySlot) continue;
    if (entry < 0 || static_cast<std::size_t>(entry) >= imp.item_count()) {
      throw std::invalid_argument("plan entry " + std::to_string(entry) +
                                  " is out of range");
    }
    if (used[static_cast<std::size_t>(entry)]) {
      throw std::invalid_argument("plan repeats item " + std::to_string(entry));
    }
    used[static_cast<std::size_t>(entry)] = true;
  }
}

EvalResult evaluate(const Impression& imp, const RankingPlan& plan) {
  validate_plan(imp, plan);
  EvalResult result;
  for (std::size_t i = 0; i < plan.assignment.size(); ++i) {
    const std::int32_t entry = plan.assignment[i];
    if (entry == RankingPlan::kEmptySlot) continue;
    const Item& item = imp.items[static_cast<std::size_t>(entry)];
    result.revenue += imp.position_weights[i] * item.value;
    result.relevance += imp.position_weights[i] * item.ptr;
  }
  if (imp.max_relevance > 0.0) {
    result.relevance_ratio = result.relevance / imp.max_relevance;
  }
  return result;
}

double max_relevance(const Impression& imp) { return imp.max_relevance; }

std::vector<std::int32_t> to_caller_slots(const Impression& imp,
                                          const RankingPlan& plan) {
  validate_plan(imp, plan);
  std::vector<std::int32_t> caller(imp.slot_count(), RankingPlan::kEmptySlot);
  for (std::size_t i = 0; i < plan.assignment.size(); ++i) {
    caller[imp.slot_order[i]] = plan.assignment[i];
  }
  return caller;
}

} // namespace slr
