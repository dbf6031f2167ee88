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

#include "slr/ranker.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace slr {
namespace {

// Safety net for the doubling phase; a feasible finite price always exists,
// so hitting this indicates corrupted input. 2^1000 stays finite in double;
// beyond that the adjusted scores would overflow.
constexpr int kMaxDoublings = 1000;

// Ranks by (score desc, index asc) and fills the first m slots. Reuses the
// caller's index buffer across bisection iterations.
void response_into(std::span<const double> delta, std::size_t m,
                   std::vector<std::int32_t>& index_buffer,
                   RankingPlan& plan) {
  const std::size_t n = delta.size();
  index_buffer.resize(n);
  std::iota(index_buffer.begin(), index_buffer.end(), 0);
  const auto better = [&delta](std::int32_t a, std::int32_t b) {
    const double da = delta[static_cast<std::size_t>(a)];
    const double db = delta[static_cast<std::size_t>(b)];
    if (da != db) return da > db;
    return a < b;
  };
  // Partial selection keeps the per-step cost at O(n log m); a full sort is
  // faster once most of the array has to be ordered anyway.
  if (m <= n / 2) {
    std::partial_sort(index_buffer.begin(),
                      index_buffer.begin() + static_cast<std::ptrdiff_t>(m),
                      index_buffer.end(), better);
  } else {
    std::sort(index_buffer.begin(), index_buffer.end(), better);
  }
  plan.assignment.assign(index_buffer.begin(),
                         index_buffer.begin() + static_cast<std::ptrdiff_t>(m));
}

double plan_relevance(const Impression& imp, const RankingPlan& plan) {
  double rel = 0.0;
  for (std::size_t i = 0; i < plan.assignment.size(); ++i) {
    const std::int32_t j = plan.assignment[i];
    if (j == RankingPlan::kEmptySlot) continue;
    rel += imp.position_weights[i] * imp.items[static_cast<std::size_t>(j)].ptr;
  }
  return rel;
}

struct Workspace {
  std::vector<double> values;    // v
  std::vector<double> relevance; // r
  std::vector<double> delta;     // v + mu * r
  std::vector<std::int32_t> index_buffer;

  explicit Workspace(const Impression& imp) {
    const std::size_t n = imp.item_count();
    values.resize(n);
    relevance.resize(n);
    delta.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      values[j] = imp.items[j].value;
      relevance[j] = imp.items[j].ptr;
    }
  }

  void response_at(const Impression& imp, double mu, RankingPlan& plan) {
    for (std::size_t j = 0; j < delta.size(); ++j) {
      delta[j] = values[j] + mu * relevance[j];
    }
    response_into(delta, imp.slot_count(), index_buffer, plan);
  }
};

// Shared bracket search: redundancy check, doubling, bisection. Leaves the
// feasible response in outcome.plan and, when the floor binds, the final
// bracket (with alpha) in outcome.bracket.
RankOutcome solve_bracket(const Impression& imp) {
  const auto start = std::chrono::steady_clock::now();
  RankOutcome outcome;
  Workspace ws(imp);
  const double floor = imp.relevance_floor();
  const auto feasible = [floor](double rel) {
    return rel >= floor - kRelevanceSlack;
  };

  RankingPlan plan;
  ws.response_at(imp, 0.0, plan);
  if (feasible(plan_relevance(imp, plan))) {
    plan.provenance = Provenance::kRedundant;
    outcome.plan = std::move(plan);
    outcome.constraint_redundant = true;
    outcome.wall_time = std::chrono::steady_clock::now() - start;
    return outcome;
  }

  double mu_minus = 0.0;
  double mu_plus = 1.0;
  RankingPlan plan_plus;
  ws.response_at(imp, mu_plus, plan_plus);
  while (!feasible(plan_relevance(imp, plan_plus))) {
    mu_minus = mu_plus;
    mu_plus *= 2.0;
    ws.response_at(imp, mu_plus, plan_plus);
    if (++outcome.doubling_steps > kMaxDoublings) {
      throw std::runtime_error("dual price doubling failed to find a "
                               "feasible response");
    }
  }

  RankingPlan plan_mid;
  while (mu_plus - mu_minus > imp.epsilon) {
    const double mu = 0.5 * (mu_plus + mu_minus);
    ws.response_at(imp, mu, plan_mid);
    if (feasible(plan_relevance(imp, plan_mid))) {
      mu_plus = mu;
      plan_plus = plan_mid;
    } else {
      mu_minus = mu;
    }
    ++outcome.bisection_steps;
  }

  DualBracket bracket;
  bracket.mu_minus = mu_minus;
  bracket.mu_plus = mu_plus;
  ws.response_at(imp, mu_minus, bracket.plan_minus);
  bracket.plan_minus.provenance = Provenance::kInfeasibleMinus;
  plan_plus.provenance = Provenance::kFeasiblePlus;
  bracket.plan_plus = plan_plus;

  const double rel_plus = plan_relevance(imp, bracket.plan_plus);
  const double rel_minus = plan_relevance(imp, bracket.plan_minus);
  const double denom = rel_plus - rel_minus;
  if (denom > 1e-12) {
    bracket.alpha = std::clamp((rel_plus - floor) / denom, 0.0, 1.0);
  } else {
    bracket.alpha = 0.0;
  }

  outcome.plan = std::move(plan_plus);
  outcome.bracket = std::move(bracket);
  outcome.iterations = outcome.doubling_steps + outcome.bisection_steps;
  outcome.wall_time = std::chrono::steady_clock::now() - start;
  return outcome;
}

} // namespace

RankingPlan primal_response(std::span<const double> delta, std::size_t m) {
  if (m == 0 || m > delta.size()) {
    throw std::invalid_argument("primal_response requires 1 <= m <= n");
  }
  for (double d : delta) {
    if (!std::isfinite(d)) {
      throw std::invalid_argument("primal_response scores must be finite");
    }
  }
  std::vector<std::int32_t> index_buffer;
  RankingPlan plan;
  response_into(delta, m, index_buffer, plan);
  return plan;
}

RankOutcome rank_feasible(const Impression& imp) { return solve_bracket(imp); }

RankOutcome rank_randomized(const Impression& imp, std::uint64_t rng_seed) {
  RankOutcome outcome = solve_bracket(imp);
  if (outcome.constraint_redundant) return outcome;

  const DualBracket& bracket = *outcome.bracket;
  outcome.sampled_branch = SampledBranch::kFeasiblePlus;
  if (bracket.alpha > 0.0) {
    std::mt19937_64 rng(rng_seed);
    // Top 53 bits -> uniform double in [0, 1); identical on every platform.
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    if (!(u > bracket.alpha)) {
      outcome.plan = bracket.plan_minus;
      outcome.sampled_branch = SampledBranch::kInfeasibleMinus;
    }
  }
  outcome.plan.provenance = Provenance::kRandomized;
  return outcome;
}

DualEval dual_value_and_subgradient(const Impression& imp, double mu) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) {
    throw std::invalid_argument("mu must be finite and nonnegative");
  }
  Workspace ws(imp);
  DualEval eval;
  ws.response_at(imp, mu, eval.plan);
  double adjusted = 0.0;
  for (std::size_t i = 0; i < eval.plan.assignment.size(); ++i) {
    const auto j = static_cast<std::size_t>(eval.plan.assignment[i]);
    adjusted += imp.position_weights[i] * ws.delta[j];
  }
  eval.value = adjusted - mu * imp.relevance_floor();
  eval.subgradient = plan_relevance(imp, eval.plan) - imp.relevance_floor();
  return eval;
}

} // namespace slr
