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

#ifndef SLR_HARNESS_HPP_
#define SLR_HARNESS_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "slr/model.hpp"
#include "slr/oracles.hpp"

// Synthetic benchmarking: uniform random instances, lambda and size sweeps
// with optimality gaps measured against an upper bound on the relaxed
// optimum, historical lambda tuning, and a Monte-Carlo verifier for the
// randomized variant. Trials run sequentially with per-trial derived seeds
// (seed XOR trial index); aggregation is order-independent, and everything
// except wall-clock timing is a pure function of the seed.
namespace slr {

// Aggregated measurements for one (m, n, lambda) cell.
struct BenchRecord {
  std::size_t m = 0;
  std::size_t n = 0;
  double lambda = 0.0;
  int trials = 0;
  double mean_gap_pct = 0.0;    // vs the recorded upper bound, percent
  double mean_time_us = 0.0;    // ranking call only
  double p50_time_us = 0.0;
  double p99_time_us = 0.0;
  double redundancy_rate = 0.0; // fraction of trials where the floor is slack
  std::uint64_t seed = 0;
};

// One trial inside a cell; kept for property checks and per-trial gates.
struct TrialOutcome {
  std::size_t m = 0;
  std::size_t n = 0;
  double lambda = 0.0;
  double gap_pct = 0.0;
  double revenue = 0.0;
  double upper_bound = 0.0;
  bool redundant = false;
  double time_us = 0.0;
  std::string bound_source; // "redundant", "exact_lp", or "dual"
};

enum class TimingMode {
  kWall, // measure the ranking call with a steady clock
  kOff,  // report zero; output becomes a pure function of the seed
};

// h sorted descending and r, v all drawn i.i.d. uniform on [0, 1);
// deterministic per seed and identical across platforms.
Impression generate_instance(std::size_t m, std::size_t n, double lambda,
                             std::uint64_t seed,
                             double epsilon = kDefaultEpsilon);

// Mean relative gap per lambda against the exact relaxed optimum when the
// oracle guard allows (n <= 200), otherwise against the bracket's dual upper
// bound; redundant trials count a zero gap. Rows come back in ascending
// lambda order. The same per-trial seeds are reused across lambdas so sweeps
// compare policies on identical instances.
std::vector<BenchRecord> run_lambda_sweep(
    std::size_t m, std::size_t n, std::vector<double> lambdas, int trials,
    std::uint64_t seed, TimingMode timing = TimingMode::kWall,
    std::vector<TrialOutcome>* details = nullptr);

std::vector<BenchRecord> run_size_sweep(
    const std::vector<std::pair<std::size_t, std::size_t>>& sizes,
    double lambda, int trials, std::uint64_t seed,
    TimingMode timing = TimingMode::kWall,
    std::vector<TrialOutcome>* details = nullptr);

// Fixed CSV schema:
// m,n,lambda,trials,mean_gap_pct,mean_time_us,p50_time_us,p99_time_us,
// redundancy_rate,seed
void write_csv(std::ostream& out, const std::vector<BenchRecord>& records);
std::string to_csv(const std::vector<BenchRecord>& records);

struct Statistic {
  enum class Kind { kMean, kMedian, kQuantile } kind = Kind::kMean;
  double q = 0.5; // used by kQuantile

  static Statistic mean() { return {Kind::kMean, 0.0}; }
  static Statistic median() { return {Kind::kMedian, 0.5}; }
  static Statistic quantile(double q) { return {Kind::kQuantile, q}; }
};

// Empirical distribution of historical relevance ratios and the lambda it
// suggests: run the new policy at lambda0 and relevance stays comparable to
// the recorded policy on average.
struct TuneReport {
  std::size_t samples = 0;
  std::size_t skipped = 0; // impressions with zero achievable relevance
  double mean = 0.0;
  double median = 0.0;
  std::vector<std::pair<double, double>> quantiles; // (q, value)
  double lambda0 = 0.0;
  std::vector<double> grid; // lambda0 +- k*delta, clipped to [0, 1]
};

// Throws std::invalid_argument on an empty history or invalid plans.
TuneReport tune_lambda(
    const std::vector<std::pair<Impression, RankingPlan>>& history,
    const Statistic& statistic, double grid_delta = 0.01, int grid_steps = 2);

std::string tune_report_to_json(const TuneReport& report);

// Monte-Carlo comparison of one instance's randomized rankings against the
// exact relaxed optimum. Deviations are reported in units of the Monte-Carlo
// standard error.
struct InstanceMonteCarlo {
  int draws = 0;
  double mean_revenue = 0.0;
  double mean_relevance = 0.0;
  double revenue_dev_se = 0.0;
  double relevance_dev_se = 0.0;
  std::size_t cells_total = 0;
  std::size_t cells_within_3se = 0;
  double max_cell_dev_se = 0.0;
};

InstanceMonteCarlo monte_carlo_check(const Impression& imp,
                                     const LpSolution& lp, int draws,
                                     std::uint64_t seed);

// Aggregate over random binding nondegenerate instances, each checked with a
// bisection tolerance below half the smallest indifference-value gap.
struct Theorem1Report {
  std::size_t instances = 0;
  std::size_t attempts = 0;
  std::size_t skipped_redundant = 0;
  std::size_t skipped_degenerate = 0;
  int draws = 0;
  std::size_t revenue_within_3se = 0;
  std::size_t relevance_within_3se = 0;
  std::size_t cells_total = 0;
  std::size_t cells_within_3se = 0;
  double max_revenue_dev_se = 0.0;
  double max_relevance_dev_se = 0.0;
  double max_cell_dev_se = 0.0;
};

Theorem1Report verify_theorem1(std::size_t m, std::size_t n, double lambda,
                               std::size_t instances, int draws,
                               std::uint64_t seed);

std::string theorem1_report_to_json(const Theorem1Report& report);

// Stable seed derivation for draws and nested trials.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

} // namespace slr

#endif // SLR_HARNESS_HPP_
