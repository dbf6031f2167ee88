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

#include "slr/planning.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace slr {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// 2^1000 stays finite in double; beyond that the adjusted scores would
// overflow before a feasible response could be certified.
constexpr int kMaxDoublings = 1000;

void check_dual_vector(std::vector<double>& duals, std::size_t expected,
                       const char* name) {
  if (duals.empty()) {
    duals.assign(expected, 0.0);
    return;
  }
  if (duals.size() != expected) {
    throw std::invalid_argument(std::string("duals.") + name +
                                " has wrong length");
  }
  for (double d : duals) {
    if (!std::isfinite(d) || d < 0.0) {
      throw std::invalid_argument(std::string("duals.") + name +
                                  " must be finite and nonnegative");
    }
  }
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

// Tallies of one induced joint solution, used by both the ascent and the
// violation report.
struct GlobalUsage {
  std::vector<double> placements_per_seller;
  std::vector<double> revenue_per_seller; // position-weighted, attributed
  std::vector<double> placements_per_consumer;

  explicit GlobalUsage(const GlobalPlanModel& model)
      : placements_per_seller(model.sellers.size(), 0.0),
        revenue_per_seller(model.sellers.size(), 0.0),
        placements_per_consumer(model.consumers.size(), 0.0) {}

  void add(const PlanImpression& pimp, const RankingPlan& plan) {
    const Impression& imp = pimp.impression;
    for (std::size_t i = 0; i < plan.assignment.size(); ++i) {
      const std::int32_t j = plan.assignment[i];
      if (j == RankingPlan::kEmptySlot) continue;
      const std::size_t seller = pimp.item_seller[static_cast<std::size_t>(j)];
      placements_per_seller[seller] += 1.0;
      revenue_per_seller[seller] +=
          imp.position_weights[i] * imp.items[static_cast<std::size_t>(j)].value;
      placements_per_consumer[pimp.consumer] += 1.0;
    }
  }
};

} // namespace

void validate_model(GlobalPlanModel& model) {
  for (std::size_t k = 0; k < model.sellers.size(); ++k) {
    const SellerSpec& s = model.sellers[k];
    if (std::isnan(s.inventory_limit) || s.inventory_limit < 0.0 ||
        !std::isfinite(s.revenue_target) || s.revenue_target < 0.0 ||
        !std::isfinite(s.min_consumers) || s.min_consumers < 0.0) {
      throw std::invalid_argument("sellers[" + std::to_string(k) +
                                  "] has a negative or non-finite bound");
    }
  }
  for (std::size_t g = 0; g < model.consumers.size(); ++g) {
    const ConsumerSpec& c = model.consumers[g];
    if (!std::isfinite(c.min_sellers) || c.min_sellers < 0.0) {
      throw std::invalid_argument("consumers[" + std::to_string(g) +
                                  "].min_sellers must be finite and >= 0");
    }
  }
  for (std::size_t t = 0; t < model.impressions.size(); ++t) {
    const PlanImpression& pimp = model.impressions[t];
    if (pimp.item_seller.size() != pimp.impression.item_count()) {
      throw std::invalid_argument("impressions[" + std::to_string(t) +
                                  "] needs one seller per item");
    }
    for (std::size_t seller : pimp.item_seller) {
      if (seller >= model.sellers.size()) {
        throw std::invalid_argument("impressions[" + std::to_string(t) +
                                    "] references an unknown seller");
      }
    }
    if (pimp.consumer >= model.consumers.size()) {
      throw std::invalid_argument("impressions[" + std::to_string(t) +
                                  "] references an unknown consumer");
    }
  }
  check_dual_vector(model.duals.xi, model.sellers.size(), "xi");
  check_dual_vector(model.duals.nu, model.sellers.size(), "nu");
  check_dual_vector(model.duals.eta, model.sellers.size(), "eta");
  check_dual_vector(model.duals.theta, model.consumers.size(), "theta");
}

AdjustedCoefficients adjust_coefficients(const GlobalPlanModel& model,
                                         const PlanImpression& pimp) {
  const Impression& imp = pimp.impression;
  if (pimp.item_seller.size() != imp.item_count()) {
    throw std::invalid_argument("impression needs one seller per item");
  }
  if (pimp.consumer >= model.consumers.size()) {
    throw std::invalid_argument("unknown consumer index");
  }
  const double theta_g = pimp.consumer < model.duals.theta.size()
                             ? model.duals.theta[pimp.consumer]
                             : 0.0;
  AdjustedCoefficients coefs;
  coefs.slot_coef.resize(imp.item_count());
  coefs.flat_coef.resize(imp.item_count());
  for (std::size_t j = 0; j < imp.item_count(); ++j) {
    const std::size_t seller = pimp.item_seller[j];
    if (seller >= model.sellers.size()) {
      throw std::invalid_argument("unknown seller index for items[" +
                                  std::to_string(j) + "]");
    }
    const double xi = seller < model.duals.xi.size() ? model.duals.xi[seller] : 0.0;
    const double nu = seller < model.duals.nu.size() ? model.duals.nu[seller] : 0.0;
    const double eta =
        seller < model.duals.eta.size() ? model.duals.eta[seller] : 0.0;
    coefs.slot_coef[j] = imp.items[j].value * (1.0 + nu);
    coefs.flat_coef[j] = -xi + eta + theta_g;
  }
  return coefs;
}

RankingPlan dp_assign(std::span<const double> weights,
                      std::span<const double> slot_coef,
                      std::span<const double> flat_coef, std::size_t m) {
  const std::size_t n = slot_coef.size();
  if (m == 0 || m > n) {
    throw std::invalid_argument("dp_assign requires 1 <= m <= n");
  }
  if (weights.size() != m || flat_coef.size() != n) {
    throw std::invalid_argument("dp_assign dimension mismatch");
  }
  for (std::size_t i = 0; i + 1 < m; ++i) {
    if (weights[i] < weights[i + 1]) {
      throw std::invalid_argument("dp_assign weights must be non-increasing");
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(slot_coef[j]) || !std::isfinite(flat_coef[j])) {
      throw std::invalid_argument("dp_assign coefficients must be finite");
    }
  }

  // Items whose slot coefficient is nonnegative want the largest weights, so
  // an optimal assignment packs them into the top slots in descending
  // coefficient order. Items kept only for their flat term (slot coefficient
  // negative) want the smallest weights and pack the bottom slots, most
  // negative last. The two prefix DPs below choose the best subset of each
  // group; p front picks and q back picks never collide while p + q <= m.
  std::vector<std::size_t> front;
  std::vector<std::size_t> back;
  for (std::size_t j = 0; j < n; ++j) {
    (slot_coef[j] >= 0.0 ? front : back).push_back(j);
  }
  std::sort(front.begin(), front.end(), [&](std::size_t a, std::size_t b) {
    if (slot_coef[a] != slot_coef[b]) return slot_coef[a] > slot_coef[b];
    return a < b;
  });
  std::sort(back.begin(), back.end(), [&](std::size_t a, std::size_t b) {
    if (slot_coef[a] != slot_coef[b]) return slot_coef[a] < slot_coef[b];
    return a < b;
  });

  const auto run_prefix_dp = [m](const std::vector<std::size_t>& group,
                                 std::span<const double> a,
                                 std::span<const double> b,
                                 std::span<const double> h,
                                 bool from_front) {
    const std::size_t limit = std::min(group.size(), m);
    std::vector<std::vector<double>> table(
        group.size() + 1, std::vector<double>(limit + 1, kNegInf));
    table[0][0] = 0.0;
    for (std::size_t j = 1; j <= group.size(); ++j) {
      const std::size_t item = group[j - 1];
      table[j][0] = 0.0;
      for (std::size_t k = 1; k <= limit; ++k) {
        const double skip = table[j - 1][k];
        const double weight = from_front ? h[k - 1] : h[m - k];
        const double take = table[j - 1][k - 1] == kNegInf
                                ? kNegInf
                                : table[j - 1][k - 1] +
                                      weight * a[item] + b[item];
        table[j][k] = std::max(skip, take);
      }
    }
    return table;
  };

  const auto front_table = run_prefix_dp(front, slot_coef, flat_coef, weights,
                                         /*from_front=*/true);
  const auto back_table = run_prefix_dp(back, slot_coef, flat_coef, weights,
                                        /*from_front=*/false);

  const std::size_t front_limit = std::min(front.size(), m);
  const std::size_t back_limit = std::min(back.size(), m);
  double best = kNegInf;
  std::size_t best_p = 0;
  std::size_t best_q = 0;
  for (std::size_t p = 0; p <= front_limit; ++p) {
    for (std::size_t q = 0; q <= back_limit && p + q <= m; ++q) {
      const double value = front_table[front.size()][p] + back_table[back.size()][q];
      // Ties fill more top slots and avoid gratuitous bottom picks.
      if (value > best || (value == best && (p > best_p || (p == best_p && q < best_q)))) {
        best = value;
        best_p = p;
        best_q = q;
      }
    }
  }

  const auto backtrack = [](const std::vector<std::vector<double>>& table,
                            const std::vector<std::size_t>& group,
                            std::size_t picks) {
    std::vector<std::size_t> chosen;
    std::size_t k = picks;
    for (std::size_t j = group.size(); j > 0 && k > 0; --j) {
      if (table[j][k] == table[j - 1][k]) continue; // skipping was optimal
      chosen.push_back(group[j - 1]);
      --k;
    }
    std::reverse(chosen.begin(), chosen.end());
    return chosen;
  };

  const std::vector<std::size_t> chosen_front =
      backtrack(front_table, front, best_p);
  const std::vector<std::size_t> chosen_back =
      backtrack(back_table, back, best_q);

  RankingPlan plan;
  plan.provenance = Provenance::kPlanning;
  plan.assignment.assign(m, RankingPlan::kEmptySlot);
  for (std::size_t i = 0; i < chosen_front.size(); ++i) {
    plan.assignment[i] = static_cast<std::int32_t>(chosen_front[i]);
  }
  for (std::size_t q = 0; q < chosen_back.size(); ++q) {
    plan.assignment[m - 1 - q] = static_cast<std::int32_t>(chosen_back[q]);
  }
  return plan;
}

double planning_objective(std::span<const double> weights,
                          std::span<const double> slot_coef,
                          std::span<const double> flat_coef,
                          const RankingPlan& plan) {
  double value = 0.0;
  for (std::size_t i = 0; i < plan.assignment.size(); ++i) {
    const std::int32_t j = plan.assignment[i];
    if (j == RankingPlan::kEmptySlot) continue;
    value += weights[i] * slot_coef[static_cast<std::size_t>(j)] +
             flat_coef[static_cast<std::size_t>(j)];
  }
  return value;
}

RankOutcome rank_with_duals(const GlobalPlanModel& model,
                            const PlanImpression& pimp) {
  const Impression& imp = pimp.impression;
  const AdjustedCoefficients coefs = adjust_coefficients(model, pimp);
  const double floor = imp.relevance_floor();
  const auto feasible = [floor](double rel) {
    return rel >= floor - kRelevanceSlack;
  };

  std::vector<double> adjusted(imp.item_count());
  const auto inner = [&](double mu) {
    for (std::size_t j = 0; j < adjusted.size(); ++j) {
      adjusted[j] = coefs.slot_coef[j] + mu * imp.items[j].ptr;
    }
    return dp_assign(imp.position_weights, adjusted, coefs.flat_coef,
                     imp.slot_count());
  };

  const auto start = std::chrono::steady_clock::now();
  RankOutcome outcome;
  RankingPlan plan = inner(0.0);
  if (feasible(plan_relevance(imp, plan))) {
    outcome.plan = std::move(plan);
    outcome.constraint_redundant = true;
    outcome.wall_time = std::chrono::steady_clock::now() - start;
    return outcome;
  }

  double mu_minus = 0.0;
  double mu_plus = 1.0;
  RankingPlan plan_plus = inner(mu_plus);
  while (!feasible(plan_relevance(imp, plan_plus))) {
    mu_minus = mu_plus;
    mu_plus *= 2.0;
    plan_plus = inner(mu_plus);
    if (++outcome.doubling_steps > kMaxDoublings) {
      throw std::runtime_error("dual price doubling failed to find a "
                               "feasible dual-adjusted response");
    }
  }
  while (mu_plus - mu_minus > imp.epsilon) {
    const double mu = 0.5 * (mu_plus + mu_minus);
    RankingPlan candidate = inner(mu);
    if (feasible(plan_relevance(imp, candidate))) {
      mu_plus = mu;
      plan_plus = std::move(candidate);
    } else {
      mu_minus = mu;
    }
    ++outcome.bisection_steps;
  }

  DualBracket bracket;
  bracket.mu_minus = mu_minus;
  bracket.mu_plus = mu_plus;
  bracket.plan_minus = inner(mu_minus);
  bracket.plan_minus.provenance = Provenance::kInfeasibleMinus;
  bracket.plan_plus = plan_plus;
  const double rel_plus = plan_relevance(imp, bracket.plan_plus);
  const double rel_minus = plan_relevance(imp, bracket.plan_minus);
  const double denom = rel_plus - rel_minus;
  bracket.alpha =
      denom > 1e-12 ? std::clamp((rel_plus - floor) / denom, 0.0, 1.0) : 0.0;

  outcome.plan = std::move(plan_plus);
  outcome.bracket = std::move(bracket);
  outcome.iterations = outcome.doubling_steps + outcome.bisection_steps;
  outcome.wall_time = std::chrono::steady_clock::now() - start;
  return outcome;
}

RankOutcome rank_with_duals(const GlobalPlanModel& model,
                            std::size_t impression_index) {
  if (impression_index >= model.impressions.size()) {
    throw std::invalid_argument("impression index out of range");
  }
  return rank_with_duals(model, model.impressions[impression_index]);
}

namespace {

// Lagrangian dual objective at the current prices: inner maxima plus the
// constant bound terms. Sellers with no inventory bound contribute nothing
// through xi (their price is pinned at zero).
double dual_objective(const GlobalPlanModel& model,
                      const std::vector<double>& inner_values) {
  double value = std::accumulate(inner_values.begin(), inner_values.end(), 0.0);
  for (std::size_t k = 0; k < model.sellers.size(); ++k) {
    const SellerSpec& s = model.sellers[k];
    if (std::isfinite(s.inventory_limit)) {
      value += model.duals.xi[k] * s.inventory_limit;
    }
    value -= model.duals.nu[k] * s.revenue_target;
    value -= model.duals.eta[k] * s.min_consumers;
  }
  for (std::size_t g = 0; g < model.consumers.size(); ++g) {
    value -= model.duals.theta[g] * model.consumers[g].min_sellers;
  }
  return value;
}

ConstraintViolations violations_from_usage(const GlobalPlanModel& model,
                                           const GlobalUsage& usage) {
  ConstraintViolations v;
  v.inventory_excess.resize(model.sellers.size(), 0.0);
  v.revenue_shortfall.resize(model.sellers.size(), 0.0);
  v.consumer_shortfall.resize(model.sellers.size(), 0.0);
  v.diversity_shortfall.resize(model.consumers.size(), 0.0);
  for (std::size_t k = 0; k < model.sellers.size(); ++k) {
    const SellerSpec& s = model.sellers[k];
    if (std::isfinite(s.inventory_limit)) {
      v.inventory_excess[k] =
          std::max(0.0, usage.placements_per_seller[k] - s.inventory_limit);
    }
    v.revenue_shortfall[k] =
        std::max(0.0, s.revenue_target - usage.revenue_per_seller[k]);
    v.consumer_shortfall[k] =
        std::max(0.0, s.min_consumers - usage.placements_per_seller[k]);
    v.max_violation = std::max({v.max_violation, v.inventory_excess[k],
                                v.revenue_shortfall[k], v.consumer_shortfall[k]});
  }
  for (std::size_t g = 0; g < model.consumers.size(); ++g) {
    v.diversity_shortfall[g] = std::max(
        0.0, model.consumers[g].min_sellers - usage.placements_per_consumer[g]);
    v.max_violation = std::max(v.max_violation, v.diversity_shortfall[g]);
  }
  return v;
}

} // namespace

ConstraintViolations measure_violations(const GlobalPlanModel& model) {
  GlobalUsage usage(model);
  for (const PlanImpression& pimp : model.impressions) {
    usage.add(pimp, rank_with_duals(model, pimp).plan);
  }
  return violations_from_usage(model, usage);
}

GlobalPlanModel estimate_duals(const GlobalPlanModel& input,
                               const AscentConfig& config,
                               AscentReport* report) {
  GlobalPlanModel model = input;
  validate_model(model);
  if (model.impressions.empty()) {
    throw std::invalid_argument("estimate_duals needs at least one impression");
  }
  if (config.max_iterations < 1 || !std::isfinite(config.step_scale) ||
      config.step_scale <= 0.0) {
    throw std::invalid_argument("invalid ascent configuration");
  }

  DualPrices best = model.duals;
  double best_objective = kInf;
  std::vector<double> trace;
  trace.reserve(static_cast<std::size_t>(config.max_iterations));
  std::vector<double> inner_values(model.impressions.size(), 0.0);

  for (int t = 1; t <= config.max_iterations; ++t) {
    GlobalUsage usage(model);
    for (std::size_t i = 0; i < model.impressions.size(); ++i) {
      const PlanImpression& pimp = model.impressions[i];
      const RankOutcome outcome = rank_with_duals(model, pimp);
      usage.add(pimp, outcome.plan);
      const AdjustedCoefficients coefs = adjust_coefficients(model, pimp);
      inner_values[i] =
          planning_objective(pimp.impression.position_weights, coefs.slot_coef,
                             coefs.flat_coef, outcome.plan);
    }

    const double objective = dual_objective(model, inner_values);
    if (!std::isfinite(objective)) {
      throw std::runtime_error("dual ascent produced a non-finite objective");
    }
    trace.push_back(objective);
    if (objective < best_objective) {
      best_objective = objective;
      best = model.duals;
    }

    const double step = config.step_scale / std::sqrt(static_cast<double>(t));
    for (std::size_t k = 0; k < model.sellers.size(); ++k) {
      const SellerSpec& s = model.sellers[k];
      if (std::isfinite(s.inventory_limit)) {
        model.duals.xi[k] = std::max(
            0.0, model.duals.xi[k] +
                     step * (usage.placements_per_seller[k] - s.inventory_limit));
      }
      model.duals.nu[k] = std::max(
          0.0, model.duals.nu[k] +
                   step * (s.revenue_target - usage.revenue_per_seller[k]));
      model.duals.eta[k] = std::max(
          0.0, model.duals.eta[k] +
                   step * (s.min_consumers - usage.placements_per_seller[k]));
    }
    for (std::size_t g = 0; g < model.consumers.size(); ++g) {
      model.duals.theta[g] = std::max(
          0.0, model.duals.theta[g] +
                   step * (model.consumers[g].min_sellers -
                           usage.placements_per_consumer[g]));
    }
  }

  model.duals = best;
  if (report != nullptr) {
    report->iterations = config.max_iterations;
    report->best_dual_objective = best_objective;
    report->dual_objective_trace = std::move(trace);
    report->final_violations = measure_violations(model);
  }
  return model;
}

namespace {

void append_number(std::string& out, double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  out += buf;
}

std::string var_name(std::size_t t, std::size_t slot, std::size_t item) {
  return "x_t" + std::to_string(t) + "_s" + std::to_string(slot) + "_j" +
         std::to_string(item);
}

} // namespace

LpExportStats expected_lp_dimensions(const GlobalPlanModel& model) {
  LpExportStats stats;
  for (const PlanImpression& pimp : model.impressions) {
    const std::size_t m = pimp.impression.slot_count();
    const std::size_t n = pimp.impression.item_count();
    stats.variables += m * n;
    stats.rows += 1 + n + m; // relevance + item caps + slot caps
  }
  for (const SellerSpec& s : model.sellers) {
    if (std::isfinite(s.inventory_limit)) ++stats.rows;
    if (s.revenue_target > 0.0) ++stats.rows;
    if (s.min_consumers > 0.0) ++stats.rows;
  }
  for (const ConsumerSpec& c : model.consumers) {
    if (c.min_sellers > 0.0) ++stats.rows;
  }
  return stats;
}

LpExportStats export_offline_lp(const GlobalPlanModel& model,
                                std::ostream& sink) {
  GlobalPlanModel checked = model;
  validate_model(checked);
  LpExportStats stats;

  std::string line;
  sink << "\\ slr overall planning export\n";
  for (std::size_t k = 0; k < model.sellers.size(); ++k) {
    sink << "\\ seller k" << k << " = " << model.sellers[k].id << "\n";
  }
  for (std::size_t g = 0; g < model.consumers.size(); ++g) {
    sink << "\\ consumer g" << g << " = " << model.consumers[g].id << "\n";
  }

  sink << "Maximize\n obj:";
  for (std::size_t t = 0; t < model.impressions.size(); ++t) {
    const Impression& imp = model.impressions[t].impression;
    for (std::size_t i = 0; i < imp.slot_count(); ++i) {
      for (std::size_t j = 0; j < imp.item_count(); ++j) {
        line = " + ";
        append_number(line, imp.position_weights[i] * imp.items[j].value);
        line += " " + var_name(t, i, j);
        sink << line;
        ++stats.variables;
      }
      sink << "\n     ";
    }
  }
  sink << "\nSubject To\n";

  for (std::size_t t = 0; t < model.impressions.size(); ++t) {
    const Impression& imp = model.impressions[t].impression;
    sink << " rel_t" << t << ":";
    for (std::size_t i = 0; i < imp.slot_count(); ++i) {
      for (std::size_t j = 0; j < imp.item_count(); ++j) {
        line = " + ";
        append_number(line, imp.position_weights[i] * imp.items[j].ptr);
        line += " " + var_name(t, i, j);
        sink << line;
      }
    }
    line = " >= ";
    append_number(line, imp.relevance_floor());
    sink << line << "\n";
    ++stats.rows;

    for (std::size_t j = 0; j < imp.item_count(); ++j) {
      sink << " item_t" << t << "_j" << j << ":";
      for (std::size_t i = 0; i < imp.slot_count(); ++i) {
        sink << " + " << var_name(t, i, j);
      }
      sink << " <= 1\n";
      ++stats.rows;
    }
    for (std::size_t i = 0; i < imp.slot_count(); ++i) {
      sink << " slot_t" << t << "_s" << i << ":";
      for (std::size_t j = 0; j < imp.item_count(); ++j) {
        sink << " + " << var_name(t, i, j);
      }
      sink << " <= 1\n";
      ++stats.rows;
    }
  }

  // Global rows are emitted only for bounds that actually constrain.
  for (std::size_t k = 0; k < model.sellers.size(); ++k) {
    const SellerSpec& seller = model.sellers[k];
    if (std::isfinite(seller.inventory_limit)) {
      sink << " inv_k" << k << ":";
      for (std::size_t t = 0; t < model.impressions.size(); ++t) {
        const PlanImpression& pimp = model.impressions[t];
        for (std::size_t i = 0; i < pimp.impression.slot_count(); ++i) {
          for (std::size_t j = 0; j < pimp.impression.item_count(); ++j) {
            if (pimp.item_seller[j] == k) {
              sink << " + " << var_name(t, i, j);
            }
          }
        }
      }
      line = " <= ";
      append_number(line, seller.inventory_limit);
      sink << line << "\n";
      ++stats.rows;
    }
    if (seller.revenue_target > 0.0) {
      sink << " rev_k" << k << ":";
      for (std::size_t t = 0; t < model.impressions.size(); ++t) {
        const PlanImpression& pimp = model.impressions[t];
        const Impression& imp = pimp.impression;
        for (std::size_t i = 0; i < imp.slot_count(); ++i) {
          for (std::size_t j = 0; j < imp.item_count(); ++j) {
            if (pimp.item_seller[j] == k) {
              line = " + ";
              append_number(line, imp.position_weights[i] * imp.items[j].value);
              line += " " + var_name(t, i, j);
              sink << line;
            }
          }
        }
      }
      line = " >= ";
      append_number(line, seller.revenue_target);
      sink << line << "\n";
      ++stats.rows;
    }
    if (seller.min_consumers > 0.0) {
      sink << " cnt_k" << k << ":";
      for (std::size_t t = 0; t < model.impressions.size(); ++t) {
        const PlanImpression& pimp = model.impressions[t];
        for (std::size_t i = 0; i < pimp.impression.slot_count(); ++i) {
          for (std::size_t j = 0; j < pimp.impression.item_count(); ++j) {
            if (pimp.item_seller[j] == k) {
              sink << " + " << var_name(t, i, j);
            }
          }
        }
      }
      line = " >= ";
      append_number(line, seller.min_consumers);
      sink << line << "\n";
      ++stats.rows;
    }
  }
  for (std::size_t g = 0; g < model.consumers.size(); ++g) {
    const ConsumerSpec& consumer = model.consumers[g];
    if (consumer.min_sellers > 0.0) {
      sink << " div_g" << g << ":";
      for (std::size_t t = 0; t < model.impressions.size(); ++t) {
        const PlanImpression& pimp = model.impressions[t];
        if (pimp.consumer != g) continue;
        for (std::size_t i = 0; i < pimp.impression.slot_count(); ++i) {
          for (std::size_t j = 0; j < pimp.impression.item_count(); ++j) {
            sink << " + " << var_name(t, i, j);
          }
        }
      }
      line = " >= ";
      append_number(line, consumer.min_sellers);
      sink << line << "\n";
      ++stats.rows;
    }
  }

  sink << "Bounds\n";
  for (std::size_t t = 0; t < model.impressions.size(); ++t) {
    const Impression& imp = model.impressions[t].impression;
    for (std::size_t i = 0; i < imp.slot_count(); ++i) {
      for (std::size_t j = 0; j < imp.item_count(); ++j) {
        sink << " 0 <= " << var_name(t, i, j) << " <= 1\n";
      }
    }
  }
  sink << "End\n";

  if (!sink) {
    throw std::runtime_error("write failure while exporting the planning LP");
  }
  return stats;
}

} // namespace slr
