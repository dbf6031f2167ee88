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

#include "slr/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "slr/ranker.hpp"

namespace slr {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

// All positive finite indifference values. restrict_to_top_m limits pairs to
// those touching the m most relevant items; the exact-LP scan uses the full
// pair set so no response change point can be missed.
std::vector<double> collect_indifference_values(const Impression& imp,
                                                bool restrict_to_top_m,
                                                bool* saw_duplicates) {
  const std::size_t n = imp.item_count();
  const std::size_t m = imp.slot_count();

  std::vector<bool> in_top(n, !restrict_to_top_m);
  if (restrict_to_top_m) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&imp](std::size_t a, std::size_t b) {
                       return imp.items[a].ptr > imp.items[b].ptr;
                     });
    for (std::size_t i = 0; i < m; ++i) in_top[order[i]] = true;
  }

  std::vector<double> values;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    for (std::size_t k = j + 1; k < n; ++k) {
      if (!in_top[j] && !in_top[k]) continue;
      const double dr = imp.items[k].ptr - imp.items[j].ptr;
      if (dr == 0.0) continue;
      const double mu = (imp.items[j].value - imp.items[k].value) / dr;
      if (std::isfinite(mu) && mu > 0.0) values.push_back(mu);
    }
  }
  std::sort(values.begin(), values.end());
  if (saw_duplicates != nullptr) {
    *saw_duplicates = false;
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
      if (nearly_equal(values[i], values[i + 1])) {
        *saw_duplicates = true;
        break;
      }
    }
  }
  values.erase(std::unique(values.begin(), values.end(), nearly_equal),
               values.end());
  return values;
}

double response_relevance(const Impression& imp, const RankingPlan& plan) {
  double rel = 0.0;
  for (std::size_t i = 0; i < plan.assignment.size(); ++i) {
    const std::int32_t j = plan.assignment[i];
    if (j == RankingPlan::kEmptySlot) continue;
    rel += imp.position_weights[i] * imp.items[static_cast<std::size_t>(j)].ptr;
  }
  return rel;
}

double response_revenue(const Impression& imp, const RankingPlan& plan) {
  double rev = 0.0;
  for (std::size_t i = 0; i < plan.assignment.size(); ++i) {
    const std::int32_t j = plan.assignment[i];
    if (j == RankingPlan::kEmptySlot) continue;
    rev += imp.position_weights[i] * imp.items[static_cast<std::size_t>(j)].value;
  }
  return rev;
}

RankingPlan response_at(const Impression& imp, double mu) {
  std::vector<double> delta(imp.item_count());
  for (std::size_t j = 0; j < delta.size(); ++j) {
    delta[j] = imp.items[j].value + mu * imp.items[j].ptr;
  }
  RankingPlan plan = primal_response(delta, imp.slot_count());
  plan.provenance = Provenance::kOracle;
  return plan;
}

// Recursively fills slots with an unused item or leaves them empty, keeping
// the best feasible plan. int32 comparison on assignments gives the
// lexicographic tie-break, with empty (-1) ordering first.
struct BruteForceState {
  const Impression& imp;
  double floor;
  std::vector<std::int32_t> assignment;
  std::vector<bool> used;
  bool found = false;
  double best_revenue = -kInf;
  std::vector<std::int32_t> best_assignment;

  explicit BruteForceState(const Impression& impression)
      : imp(impression),
        floor(impression.relevance_floor()),
        used(impression.item_count(), false) {}

  void consider() {
    double revenue = 0.0;
    double relevance = 0.0;
    for (std::size_t i = 0; i < assignment.size(); ++i) {
      const std::int32_t j = assignment[i];
      if (j == RankingPlan::kEmptySlot) continue;
      revenue += imp.position_weights[i] * imp.items[static_cast<std::size_t>(j)].value;
      relevance += imp.position_weights[i] * imp.items[static_cast<std::size_t>(j)].ptr;
    }
    if (relevance < floor - kRelevanceSlack) return;
    if (!found || revenue > best_revenue ||
        (revenue == best_revenue && assignment < best_assignment)) {
      found = true;
      best_revenue = revenue;
      best_assignment = assignment;
    }
  }

  void fill_slot(std::size_t slot) {
    if (slot == imp.slot_count()) {
      consider();
      return;
    }
    assignment.push_back(RankingPlan::kEmptySlot);
    fill_slot(slot + 1);
    assignment.pop_back();
    for (std::size_t j = 0; j < imp.item_count(); ++j) {
      if (used[j]) continue;
      used[j] = true;
      assignment.push_back(static_cast<std::int32_t>(j));
      fill_slot(slot + 1);
      assignment.pop_back();
      used[j] = false;
    }
  }
};

} // namespace

const char* to_string(LpSolution::Case case_tag) {
  switch (case_tag) {
    case LpSolution::Case::kA: return "A";
    case LpSolution::Case::kB1: return "B1";
    case LpSolution::Case::kB2: return "B2";
    case LpSolution::Case::kB3: return "B3";
  }
  return "unknown";
}

std::pair<RankingPlan, double> brute_force_mip(const Impression& imp) {
  if (imp.item_count() > 10 || imp.slot_count() > 4) {
    throw std::invalid_argument("brute_force_mip is guarded to n <= 10, "
                                "m <= 4");
  }
  BruteForceState state(imp);
  state.fill_slot(0);
  // The max-relevance ranking is always feasible, so the search cannot come
  // up empty unless roundoff nudged it out; fall back to that ranking.
  if (!state.found) {
    std::vector<double> rel(imp.item_count());
    for (std::size_t j = 0; j < rel.size(); ++j) rel[j] = imp.items[j].ptr;
    RankingPlan plan = primal_response(rel, imp.slot_count());
    plan.provenance = Provenance::kOracle;
    return {plan, response_revenue(imp, plan)};
  }
  RankingPlan plan;
  plan.assignment = std::move(state.best_assignment);
  plan.provenance = Provenance::kOracle;
  return {std::move(plan), state.best_revenue};
}

LpSolution exact_lp(const Impression& imp) {
  if (imp.item_count() > 200) {
    throw std::invalid_argument("exact_lp is guarded to n <= 200");
  }
  const double floor = imp.relevance_floor();
  LpSolution solution;

  RankingPlan plain = response_at(imp, 0.0);
  const double plain_rel = response_relevance(imp, plain);
  if (plain_rel >= floor - kRelevanceSlack) {
    solution.case_tag = LpSolution::Case::kA;
    solution.mu_star = 0.0;
    solution.objective = response_revenue(imp, plain);
    solution.relevance = plain_rel;
    for (std::size_t i = 0; i < plain.assignment.size(); ++i) {
      if (plain.assignment[i] == RankingPlan::kEmptySlot) continue;
      solution.entries.push_back(
          {i, static_cast<std::size_t>(plain.assignment[i]), 1.0});
    }
    return solution;
  }

  bool duplicates = false;
  const std::vector<double> values =
      collect_indifference_values(imp, /*restrict_to_top_m=*/false,
                                  &duplicates);
  solution.degenerate = duplicates;

  // Candidate prices are 0 plus every indifference value. The right-limit
  // response just above a candidate stays constant until the next candidate,
  // so a step of a quarter of the local gap lands strictly inside the
  // constant piece.
  std::vector<double> candidates;
  candidates.reserve(values.size() + 1);
  candidates.push_back(0.0);
  candidates.insert(candidates.end(), values.begin(), values.end());
  const auto right_step = [&candidates](std::size_t idx) {
    if (idx + 1 < candidates.size()) {
      return 0.25 * (candidates[idx + 1] - candidates[idx]);
    }
    return 1e-9 * (1.0 + candidates[idx]);
  };
  const auto feasible_above = [&](std::size_t idx) {
    RankingPlan plan = response_at(imp, candidates[idx] + right_step(idx));
    return response_relevance(imp, plan) >= floor - kRelevanceSlack;
  };

  // Relevance of the response is non-decreasing in the price, so the
  // feasible candidates form a suffix; binary search its first element.
  std::size_t lo = 0;
  std::size_t hi = candidates.size() - 1;
  if (!feasible_above(hi)) {
    // Beyond the last indifference value the response maximizes relevance,
    // so this can only be roundoff at lambda = 1; pin the last candidate.
    lo = hi;
  } else {
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (feasible_above(mid)) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
  }

  const double mu_star = candidates[lo];
  solution.mu_star = mu_star;
  RankingPlan plan_plus = response_at(imp, mu_star + right_step(lo));
  RankingPlan plan_minus =
      lo == 0 ? plain
              : response_at(imp, mu_star - 0.25 * (mu_star - candidates[lo - 1]));

  const double rel_plus = response_relevance(imp, plan_plus);
  const double rel_minus = response_relevance(imp, plan_minus);
  const double denom = rel_plus - rel_minus;
  const double alpha =
      denom > 1e-12 ? std::clamp((rel_plus - floor) / denom, 0.0, 1.0) : 0.0;

  solution.objective = alpha * response_revenue(imp, plan_minus) +
                       (1.0 - alpha) * response_revenue(imp, plan_plus);
  solution.relevance = alpha * rel_minus + (1.0 - alpha) * rel_plus;

  std::map<std::pair<std::size_t, std::size_t>, double> cells;
  for (std::size_t i = 0; i < plan_minus.assignment.size(); ++i) {
    if (plan_minus.assignment[i] == RankingPlan::kEmptySlot) continue;
    cells[{i, static_cast<std::size_t>(plan_minus.assignment[i])}] += alpha;
  }
  for (std::size_t i = 0; i < plan_plus.assignment.size(); ++i) {
    if (plan_plus.assignment[i] == RankingPlan::kEmptySlot) continue;
    cells[{i, static_cast<std::size_t>(plan_plus.assignment[i])}] +=
        1.0 - alpha;
  }
  for (const auto& [cell, weight] : cells) {
    if (weight > 0.0) {
      solution.entries.push_back({cell.first, cell.second, weight});
    }
  }

  // Classify the tie structure from where the two responses disagree.
  std::vector<std::size_t> diff;
  for (std::size_t i = 0; i < plan_plus.assignment.size(); ++i) {
    if (plan_plus.assignment[i] != plan_minus.assignment[i]) diff.push_back(i);
  }
  const std::size_t m = imp.slot_count();
  if (diff.empty()) {
    solution.case_tag = LpSolution::Case::kB3;
  } else if (diff.size() == 1 && diff[0] == m - 1) {
    solution.case_tag = LpSolution::Case::kB1;
    solution.fractional_alpha = alpha;
  } else if (diff.size() == 2 && diff[1] == diff[0] + 1 &&
             plan_plus.assignment[diff[0]] == plan_minus.assignment[diff[1]] &&
             plan_plus.assignment[diff[1]] == plan_minus.assignment[diff[0]]) {
    solution.case_tag = LpSolution::Case::kB2;
    solution.fractional_alpha = alpha;
  } else {
    // Wider rearrangement: several pairs tie at the same price.
    solution.degenerate = true;
    solution.case_tag =
        diff.back() == m - 1 ? LpSolution::Case::kB1 : LpSolution::Case::kB2;
    solution.fractional_alpha = alpha;
  }
  return solution;
}

namespace {

BreakpointSet make_breakpoint_set(const Impression& imp,
                                  bool restrict_to_top_m) {
  BreakpointSet set;
  set.values =
      collect_indifference_values(imp, restrict_to_top_m, &set.degenerate);
  if (set.values.size() >= 2) {
    double min_gap = kInf;
    for (std::size_t i = 0; i + 1 < set.values.size(); ++i) {
      min_gap = std::min(min_gap, set.values[i + 1] - set.values[i]);
    }
    set.delta_min = min_gap;
  }
  return set;
}

} // namespace

BreakpointSet breakpoints(const Impression& imp) {
  return make_breakpoint_set(imp, /*restrict_to_top_m=*/true);
}

BreakpointSet all_pair_breakpoints(const Impression& imp) {
  return make_breakpoint_set(imp, /*restrict_to_top_m=*/false);
}

} // namespace slr
