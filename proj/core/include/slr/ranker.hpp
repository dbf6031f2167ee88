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

#ifndef SLR_RANKER_HPP_
#define SLR_RANKER_HPP_

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "slr/model.hpp"

// Low-latency ranking by dual bisection.
//
// The instance is the assignment problem
//
//   max  sum_{i,j} h_i v_j X_ij
//   s.t. sum_{i,j} h_i r_j X_ij >= lambda * a     (relevance floor)
//        each slot holds at most one item, each item shown at most once,
//        X_ij binary,
//
// where a is the best achievable relevance. Dualizing the relevance floor
// with price mu >= 0 turns the inner problem into ranking by the adjusted
// score delta_j = v_j + mu * r_j, solvable by a sort. D(mu) is convex with
// subgradient Rel(X(mu)) - lambda * a, so the optimal price mu* is found by
// doubling to bracket it and bisecting to tolerance epsilon. The response at
// the feasible end of the bracket is an integral, feasible, near-optimal
// ranking; mixing the two bracket ends with weight alpha reproduces the
// relaxed optimum in expectation.
namespace slr {

// Bisection state around the optimal dual price. plan_plus is the feasible
// (relevance >= floor) response at mu_plus; plan_minus the revenue-favoring
// response at mu_minus. alpha is the probability with which the randomized
// variant returns plan_minus, chosen so the mixture meets the floor exactly.
struct DualBracket {
  double mu_minus = 0.0;
  double mu_plus = 0.0;
  RankingPlan plan_minus;
  RankingPlan plan_plus;
  double alpha = 0.0;
};

// Which bracket end a randomized solve returned.
enum class SampledBranch : std::uint8_t {
  kNone,            // deterministic solve, or the floor was redundant
  kFeasiblePlus,    // U > alpha
  kInfeasibleMinus, // U <= alpha
};

struct RankOutcome {
  RankingPlan plan;
  std::optional<DualBracket> bracket; // absent when the floor is redundant
  bool constraint_redundant = false;
  SampledBranch sampled_branch = SampledBranch::kNone;
  int doubling_steps = 0;
  int bisection_steps = 0;
  int iterations = 0; // doubling_steps + bisection_steps
  std::chrono::nanoseconds wall_time{0};
};

// Fills slot i with the item holding the i-th largest score. Ties break
// toward the smaller item index, so the output is unique for a given input.
// Uses partial selection when m is small relative to n. Throws on m > n or
// non-finite scores.
RankingPlan primal_response(std::span<const double> delta, std::size_t m);

// Deterministic ranking that meets the relevance floor on every call.
// Short-circuits when the revenue-sorted top-m already meets the floor
// (constraint redundant, returned plan is exactly optimal); otherwise
// brackets the optimal dual price and returns the feasible bracket end.
RankOutcome rank_feasible(const Impression& imp);

// Production variant: meets the relevance floor in expectation instead of
// per call. Returns plan_plus with probability 1 - alpha and plan_minus with
// probability alpha; identical to rank_feasible when the floor is redundant
// or the bracket degenerates. Pure function of (impression, seed).
RankOutcome rank_randomized(const Impression& imp, std::uint64_t rng_seed);

struct DualEval {
  double value = 0.0;       // D(mu)
  double subgradient = 0.0; // Rel(X(mu)) - lambda * a
  RankingPlan plan;         // X(mu)
};

// Evaluates the dual function at mu >= 0 along with its subgradient at the
// primal response.
DualEval dual_value_and_subgradient(const Impression& imp, double mu);

} // namespace slr

#endif // SLR_RANKER_HPP_
