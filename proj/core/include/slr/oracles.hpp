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

#ifndef SLR_ORACLES_HPP_
#define SLR_ORACLES_HPP_

#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "slr/model.hpp"

// Ground-truth solvers for desk-scale verification. These trade speed for
// exactness: the MIP oracle enumerates every ranking, and the LP oracle
// locates the optimal dual price exactly by scanning the pairwise
// indifference values mu_jk = (v_j - v_k) / (r_k - r_j) instead of bisecting,
// which removes the tolerance epsilon from the ground truth entirely.
namespace slr {

struct LpEntry {
  std::size_t slot = 0;
  std::size_t item = 0;
  double weight = 0.0; // in (0, 1]
};

// Exact optimum of the relaxed (fractional) ranking problem. The solution is
// integral except for at most one adjacent row pair: a boundary tie splits
// the last slot between two items (case B1), an interior tie swaps two
// adjacent slots fractionally (case B2). Case A means the relevance floor was
// slack at the revenue-sorted ranking; B3 means it binds at an integral
// vertex.
struct LpSolution {
  enum class Case : std::uint8_t { kA, kB1, kB2, kB3 };

  std::vector<LpEntry> entries; // weight > 0 cells only
  double objective = 0.0;
  double relevance = 0.0;
  double mu_star = 0.0;
  Case case_tag = Case::kA;
  std::optional<double> fractional_alpha; // set in cases B1/B2
  bool degenerate = false; // tied indifference values detected
};

const char* to_string(LpSolution::Case case_tag);

// The pairwise indifference values relevant to the dual search: pairs with
// at least one item among the m most relevant and distinct relevance scores.
// delta_min is the smallest gap between distinct values; a bisection
// tolerance below it guarantees the final bracket isolates a single
// indifference value.
struct BreakpointSet {
  std::vector<double> values; // sorted ascending, deduplicated, positive
  double delta_min = std::numeric_limits<double>::infinity();
  bool degenerate = false; // two distinct pairs shared a value
};

// Exhaustive search over every (possibly partial) ranking. Returns a
// revenue-maximal plan meeting the relevance floor and its objective; ties
// resolve to the lexicographically smallest assignment (empty slots first).
// Guarded to n <= 10, m <= 4; throws beyond that.
std::pair<RankingPlan, double> brute_force_mip(const Impression& imp);

// Closed-form relaxed optimum. Scans indifference values for the smallest
// dual price whose right-limit response meets the floor, then mixes the
// responses on either side of that price so the floor holds exactly.
// Guarded to n <= 200 (the scan is quadratic in n); throws beyond that.
// Degenerate instances (tied indifference values, or a tie structure wider
// than one adjacent row pair) still yield a valid optimum but are flagged.
LpSolution exact_lp(const Impression& imp);

// Indifference values over the top-m-relevance index set, with delta_min.
BreakpointSet breakpoints(const Impression& imp);

// Indifference values over every item pair. The gaps here bound how far a
// bisection bracket can shrink before it is guaranteed to isolate a single
// response change, so the Monte-Carlo verifier picks its tolerance from this
// set rather than the restricted one.
BreakpointSet all_pair_breakpoints(const Impression& imp);

} // namespace slr

#endif // SLR_ORACLES_HPP_
