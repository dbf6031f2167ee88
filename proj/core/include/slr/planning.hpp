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

#ifndef SLR_PLANNING_HPP_
#define SLR_PLANNING_HPP_

#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "slr/model.hpp"
#include "slr/ranker.hpp"

// Overall planning: global constraints that couple many impressions.
//
// On top of the per-impression relevance floors, sellers k carry an
// inventory limit L_k (total placements of their items), a revenue target
// I_k (position-weighted attributed revenue), and a minimum placement count
// C_k; consumers g require at least S_g seller-attributed placements across
// their impressions. The offline problem prices these constraints with duals
// (xi, nu, eta, theta) >= 0; online ranking then maximizes the dual-adjusted
// objective per impression, which only perturbs each item's coefficients:
//
//   slot term  a_j = v_j * (1 + nu_k)       (multiplies h_i)
//   flat term  b_j = -xi_k + eta_k + theta_g (paid once if shown anywhere)
//
// The inner maximization over (a, b) coefficients is solved exactly by a
// small dynamic program, and the duals themselves are estimated offline by
// projected subgradient descent with those inner solves as the oracle.
namespace slr {

struct SellerSpec {
  std::string id;
  double inventory_limit = std::numeric_limits<double>::infinity(); // L_k
  double revenue_target = 0.0;                                      // I_k
  double min_consumers = 0.0;                                       // C_k
};

struct ConsumerSpec {
  std::string id;
  double min_sellers = 0.0; // S_g
};

// Nonnegative prices on the four global constraint families.
struct DualPrices {
  std::vector<double> xi;    // inventory limits, per seller
  std::vector<double> nu;    // revenue targets, per seller
  std::vector<double> eta;   // minimum placement counts, per seller
  std::vector<double> theta; // seller-diversity floors, per consumer
};

// One impression inside a planning model, annotated with the seller of each
// item and the consumer who saw it (indices into the model's tables).
struct PlanImpression {
  Impression impression;
  std::vector<std::size_t> item_seller;
  std::size_t consumer = 0;
};

struct GlobalPlanModel {
  std::vector<PlanImpression> impressions;
  std::vector<SellerSpec> sellers;
  std::vector<ConsumerSpec> consumers;
  DualPrices duals; // zero-initialized to the right sizes by validate()
};

// Checks index ranges and dual sizes; zero-fills absent duals. Throws
// std::invalid_argument naming the offending record.
void validate_model(GlobalPlanModel& model);

// Per-item coefficients of the dual-adjusted objective for one impression.
struct AdjustedCoefficients {
  std::vector<double> slot_coef; // a_j, multiplies the slot weight h_i
  std::vector<double> flat_coef; // b_j, slot-independent
};

AdjustedCoefficients adjust_coefficients(const GlobalPlanModel& model,
                                         const PlanImpression& imp);

// Exact maximizer of sum_i h_i * a_{j(i)} + sum b_{j(i)} over injective,
// possibly partial assignments, with h sorted non-increasing. Items with
// positive slot coefficients fill the top slots in descending order; items
// carried only for their flat term sit in the bottom slots. O(n log n + n*m).
RankingPlan dp_assign(std::span<const double> weights,
                      std::span<const double> slot_coef,
                      std::span<const double> flat_coef, std::size_t m);

// Objective value of a plan under (a, b) coefficients.
double planning_objective(std::span<const double> weights,
                          std::span<const double> slot_coef,
                          std::span<const double> flat_coef,
                          const RankingPlan& plan);

// Dual-adjusted ranking for one impression: the same relevance bisection as
// rank_feasible, with dp_assign as the inner maximizer on coefficients
// (a + mu*r, b). With all duals zero this reduces to rank_feasible exactly.
RankOutcome rank_with_duals(const GlobalPlanModel& model,
                            const PlanImpression& imp);
RankOutcome rank_with_duals(const GlobalPlanModel& model,
                            std::size_t impression_index);

struct AscentConfig {
  int max_iterations = 200;
  double step_scale = 1.0;  // step_t = step_scale / sqrt(t)
  std::uint64_t seed = 0;   // reserved; the ascent itself is deterministic
};

// Violations of the global constraints by the plans induced at some duals.
// Positive numbers mean the constraint is broken by that amount.
struct ConstraintViolations {
  std::vector<double> inventory_excess;     // per seller
  std::vector<double> revenue_shortfall;    // per seller
  std::vector<double> consumer_shortfall;   // per seller
  std::vector<double> diversity_shortfall;  // per consumer
  double max_violation = 0.0;
};

struct AscentReport {
  int iterations = 0;
  double best_dual_objective = 0.0; // upper bound on the joint optimum
  std::vector<double> dual_objective_trace;
  ConstraintViolations final_violations;
};

// Projected subgradient descent on the dual prices, using rank_with_duals as
// the per-impression oracle. Returns the model with the duals that achieved
// the best (smallest) dual objective; deterministic for a fixed schedule.
GlobalPlanModel estimate_duals(const GlobalPlanModel& model,
                               const AscentConfig& config,
                               AscentReport* report = nullptr);

ConstraintViolations measure_violations(const GlobalPlanModel& model);

struct LpExportStats {
  std::size_t variables = 0;
  std::size_t rows = 0;
};

// Emits the full offline planning problem in CPLEX LP text format: one
// variable per (slot, item, impression), per-impression relevance and
// assignment rows, then one row per posed global constraint (inventory rows
// for finite L_k, revenue rows for I_k > 0, placement rows for C_k > 0,
// diversity rows for S_g > 0). Returns variable/row counts for verification
// against the closed-form dimension formulas.
LpExportStats export_offline_lp(const GlobalPlanModel& model,
                                std::ostream& sink);

// The counts export_offline_lp must produce, from model dimensions alone.
LpExportStats expected_lp_dimensions(const GlobalPlanModel& model);

} // namespace slr

#endif // SLR_PLANNING_HPP_
