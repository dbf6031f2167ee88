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

#include "slr/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "slr/ranker.hpp"

namespace slr {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Top 53 bits of the generator output; bit-identical on every platform,
// unlike std::uniform_real_distribution.
double next_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double percentile(std::vector<double> sorted_values, double p) {
  if (sorted_values.empty()) return 0.0;
  // Nearest-rank.
  const auto rank = static_cast<std::size_t>(
      std::ceil(p * static_cast<double>(sorted_values.size())));
  const std::size_t index = rank == 0 ? 0 : rank - 1;
  return sorted_values[std::min(index, sorted_values.size() - 1)];
}

// Valid upper bounds on the relaxed optimum from the final bracket: the dual
// function evaluated at either end, and the feasibility-repaired value of
// the revenue-favoring plan. The smallest wins.
double dual_upper_bound(const Impression& imp, const DualBracket& bracket) {
  const double floor = imp.relevance_floor();
  const EvalResult minus = evaluate(imp, bracket.plan_minus);
  const EvalResult plus = evaluate(imp, bracket.plan_plus);
  const double repaired =
      minus.revenue + bracket.mu_plus * (floor - minus.relevance);
  const double dual_at_minus =
      minus.revenue + bracket.mu_minus * (minus.relevance - floor);
  const double dual_at_plus =
      plus.revenue + bracket.mu_plus * (plus.relevance - floor);
  return std::min({repaired, dual_at_minus, dual_at_plus});
}

TrialOutcome run_trial(std::size_t m, std::size_t n, double lambda,
                       std::uint64_t trial_seed, TimingMode timing) {
  TrialOutcome trial;
  trial.m = m;
  trial.n = n;
  trial.lambda = lambda;

  const Impression imp = generate_instance(m, n, lambda, trial_seed);
  const auto start = std::chrono::steady_clock::now();
  const RankOutcome outcome = rank_feasible(imp);
  const auto elapsed = std::chrono::steady_clock::now() - start;
  if (timing == TimingMode::kWall) {
    trial.time_us =
        std::chrono::duration<double, std::micro>(elapsed).count();
  }

  const EvalResult eval = evaluate(imp, outcome.plan);
  trial.revenue = eval.revenue;
  if (outcome.constraint_redundant) {
    trial.redundant = true;
    trial.gap_pct = 0.0;
    trial.upper_bound = eval.revenue;
    trial.bound_source = "redundant";
    return trial;
  }

  if (n <= 200) {
    trial.upper_bound = exact_lp(imp).objective;
    trial.bound_source = "exact_lp";
  } else {
    trial.upper_bound = dual_upper_bound(imp, *outcome.bracket);
    trial.bound_source = "dual";
  }
  const double slack = trial.upper_bound - eval.revenue;
  if (slack < -1e-9 * std::max(1.0, trial.upper_bound)) {
    throw std::runtime_error("optimality-gap bound fell below the achieved "
                             "revenue");
  }
  trial.gap_pct = trial.upper_bound > 0.0
                      ? 100.0 * std::max(0.0, slack) / trial.upper_bound
                      : 0.0;
  return trial;
}

BenchRecord aggregate(std::size_t m, std::size_t n, double lambda, int trials,
                      std::uint64_t seed,
                      const std::vector<TrialOutcome>& cell) {
  BenchRecord record;
  record.m = m;
  record.n = n;
  record.lambda = lambda;
  record.trials = trials;
  record.seed = seed;
  double gap_sum = 0.0;
  double time_sum = 0.0;
  int redundant = 0;
  std::vector<double> times;
  times.reserve(cell.size());
  for (const TrialOutcome& trial : cell) {
    gap_sum += trial.gap_pct;
    time_sum += trial.time_us;
    times.push_back(trial.time_us);
    if (trial.redundant) ++redundant;
  }
  std::sort(times.begin(), times.end());
  const auto count = static_cast<double>(cell.size());
  record.mean_gap_pct = gap_sum / count;
  record.mean_time_us = time_sum / count;
  record.p50_time_us = percentile(times, 0.50);
  record.p99_time_us = percentile(times, 0.99);
  record.redundancy_rate = static_cast<double>(redundant) / count;
  return record;
}

std::vector<BenchRecord> run_cells(
    const std::vector<std::tuple<std::size_t, std::size_t, double>>& cells,
    int trials, std::uint64_t seed, TimingMode timing,
    std::vector<TrialOutcome>* details) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  std::vector<BenchRecord> records;
  records.reserve(cells.size());
  for (const auto& [m, n, lambda] : cells) {
    std::vector<TrialOutcome> cell;
    cell.reserve(static_cast<std::size_t>(trials));
    for (int trial = 0; trial < trials; ++trial) {
      cell.push_back(run_trial(m, n, lambda,
                               seed ^ static_cast<std::uint64_t>(trial),
                               timing));
    }
    records.push_back(aggregate(m, n, lambda, trials, seed, cell));
    if (details != nullptr) {
      details->insert(details->end(), cell.begin(), cell.end());
    }
  }
  return records;
}

double interpolated_quantile(const std::vector<double>& sorted_values,
                             double q) {
  if (sorted_values.empty()) return 0.0;
  const double pos = q * static_cast<double>(sorted_values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted_values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted_values[lo] * (1.0 - frac) + sorted_values[hi] * frac;
}

} // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 on the combined value.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Impression generate_instance(std::size_t m, std::size_t n, double lambda,
                             std::uint64_t seed, double epsilon) {
  if (m < 1 || m > n) {
    throw std::invalid_argument("generate_instance requires 1 <= m <= n");
  }
  std::mt19937_64 rng(seed);
  std::vector<double> weights(m);
  for (double& w : weights) w = next_uniform(rng);
  std::vector<Item> items;
  items.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double r = next_uniform(rng);
    const double v = next_uniform(rng);
    items.push_back(Item::synthetic("g" + std::to_string(j), r, v));
  }
  return build_impression(std::move(weights), std::move(items), lambda,
                          epsilon);
}

std::vector<BenchRecord> run_lambda_sweep(std::size_t m, std::size_t n,
                                          std::vector<double> lambdas,
                                          int trials, std::uint64_t seed,
                                          TimingMode timing,
                                          std::vector<TrialOutcome>* details) {
  if (lambdas.empty()) throw std::invalid_argument("lambdas must be non-empty");
  std::sort(lambdas.begin(), lambdas.end());
  std::vector<std::tuple<std::size_t, std::size_t, double>> cells;
  cells.reserve(lambdas.size());
  for (double lambda : lambdas) cells.emplace_back(m, n, lambda);
  return run_cells(cells, trials, seed, timing, details);
}

std::vector<BenchRecord> run_size_sweep(
    const std::vector<std::pair<std::size_t, std::size_t>>& sizes,
    double lambda, int trials, std::uint64_t seed, TimingMode timing,
    std::vector<TrialOutcome>* details) {
  if (sizes.empty()) throw std::invalid_argument("sizes must be non-empty");
  std::vector<std::tuple<std::size_t, std::size_t, double>> cells;
  cells.reserve(sizes.size());
  for (const auto& [m, n] : sizes) cells.emplace_back(m, n, lambda);
  return run_cells(cells, trials, seed, timing, details);
}

void write_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
  out << "m,n,lambda,trials,mean_gap_pct,mean_time_us,p50_time_us,"
         "p99_time_us,redundancy_rate,seed\n";
  char buf[256];
  for (const BenchRecord& r : records) {
    std::snprintf(buf, sizeof(buf),
                  "%zu,%zu,%.6g,%d,%.9f,%.3f,%.3f,%.3f,%.6f,%llu\n", r.m, r.n,
                  r.lambda, r.trials, r.mean_gap_pct, r.mean_time_us,
                  r.p50_time_us, r.p99_time_us, r.redundancy_rate,
                  static_cast<unsigned long long>(r.seed));
    out << buf;
  }
}

std::string to_csv(const std::vector<BenchRecord>& records) {
  std::ostringstream out;
  write_csv(out, records);
  return out.str();
}

TuneReport tune_lambda(
    const std::vector<std::pair<Impression, RankingPlan>>& history,
    const Statistic& statistic, double grid_delta, int grid_steps) {
  if (history.empty()) {
    throw std::invalid_argument("tune_lambda needs a non-empty history");
  }
  if (!(grid_delta > 0.0) || grid_steps < 0) {
    throw std::invalid_argument("invalid tuning grid parameters");
  }
  if (statistic.kind == Statistic::Kind::kQuantile &&
      (statistic.q < 0.0 || statistic.q > 1.0)) {
    throw std::invalid_argument("quantile must lie in [0, 1]");
  }

  TuneReport report;
  std::vector<double> ratios;
  ratios.reserve(history.size());
  for (const auto& [imp, plan] : history) {
    if (imp.max_relevance <= 0.0) {
      ++report.skipped;
      continue;
    }
    ratios.push_back(evaluate(imp, plan).relevance_ratio);
  }
  if (ratios.empty()) {
    throw std::invalid_argument("every history impression has zero "
                                "achievable relevance");
  }
  std::sort(ratios.begin(), ratios.end());

  report.samples = ratios.size();
  double sum = 0.0;
  for (double r : ratios) sum += r;
  report.mean = sum / static_cast<double>(ratios.size());
  report.median = interpolated_quantile(ratios, 0.5);
  for (double q : {0.10, 0.25, 0.50, 0.75, 0.90}) {
    report.quantiles.emplace_back(q, interpolated_quantile(ratios, q));
  }

  switch (statistic.kind) {
    case Statistic::Kind::kMean: report.lambda0 = report.mean; break;
    case Statistic::Kind::kMedian: report.lambda0 = report.median; break;
    case Statistic::Kind::kQuantile:
      report.lambda0 = interpolated_quantile(ratios, statistic.q);
      break;
  }
  report.lambda0 = std::clamp(report.lambda0, 0.0, 1.0);

  for (int k = -grid_steps; k <= grid_steps; ++k) {
    report.grid.push_back(
        std::clamp(report.lambda0 + k * grid_delta, 0.0, 1.0));
  }
  std::sort(report.grid.begin(), report.grid.end());
  report.grid.erase(std::unique(report.grid.begin(), report.grid.end()),
                    report.grid.end());
  return report;
}

std::string tune_report_to_json(const TuneReport& report) {
  nlohmann::json doc;
  doc["samples"] = report.samples;
  doc["skipped"] = report.skipped;
  doc["mean"] = report.mean;
  doc["median"] = report.median;
  nlohmann::json quantiles = nlohmann::json::object();
  for (const auto& [q, value] : report.quantiles) {
    char key[16];
    std::snprintf(key, sizeof(key), "p%02d", static_cast<int>(q * 100.0));
    quantiles[key] = value;
  }
  doc["quantiles"] = std::move(quantiles);
  doc["lambda0"] = report.lambda0;
  doc["grid"] = report.grid;
  return doc.dump(2);
}

InstanceMonteCarlo monte_carlo_check(const Impression& imp,
                                     const LpSolution& lp, int draws,
                                     std::uint64_t seed) {
  if (draws < 1) throw std::invalid_argument("draws must be >= 1");
  InstanceMonteCarlo stats;
  stats.draws = draws;

  const std::size_t m = imp.slot_count();
  const std::size_t n = imp.item_count();
  double rev_sum = 0.0;
  double rev_sq = 0.0;
  double rel_sum = 0.0;
  double rel_sq = 0.0;
  std::vector<std::int64_t> cell_count(m * n, 0);

  for (int d = 0; d < draws; ++d) {
    const RankOutcome outcome = rank_randomized(imp, mix_seed(seed, d));
    const EvalResult eval = evaluate(imp, outcome.plan);
    rev_sum += eval.revenue;
    rev_sq += eval.revenue * eval.revenue;
    rel_sum += eval.relevance;
    rel_sq += eval.relevance * eval.relevance;
    for (std::size_t i = 0; i < outcome.plan.assignment.size(); ++i) {
      const std::int32_t j = outcome.plan.assignment[i];
      if (j != RankingPlan::kEmptySlot) {
        ++cell_count[i * n + static_cast<std::size_t>(j)];
      }
    }
  }

  const double count = draws;
  const auto dev_in_se = [count](double mean, double variance, double target) {
    const double se = std::sqrt(std::max(0.0, variance) / count);
    const double dev = std::abs(mean - target);
    if (se == 0.0) return dev <= 1e-9 ? 0.0 : kInf;
    return dev / se;
  };

  stats.mean_revenue = rev_sum / count;
  stats.mean_relevance = rel_sum / count;
  const double rev_var =
      (rev_sq - count * stats.mean_revenue * stats.mean_revenue) /
      std::max(1.0, count - 1.0);
  const double rel_var =
      (rel_sq - count * stats.mean_relevance * stats.mean_relevance) /
      std::max(1.0, count - 1.0);
  stats.revenue_dev_se = dev_in_se(stats.mean_revenue, rev_var, lp.objective);
  // The relaxed optimum's relevance equals the floor whenever the floor
  // binds, and stays the right target when it does not.
  stats.relevance_dev_se =
      dev_in_se(stats.mean_relevance, rel_var, lp.relevance);

  std::map<std::pair<std::size_t, std::size_t>, double> lp_cells;
  for (const LpEntry& entry : lp.entries) {
    lp_cells[{entry.slot, entry.item}] = entry.weight;
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double phat =
          static_cast<double>(cell_count[i * n + j]) / count;
      const auto it = lp_cells.find({i, j});
      const double target = it == lp_cells.end() ? 0.0 : it->second;
      const double dev = dev_in_se(phat, phat * (1.0 - phat) * count /
                                             std::max(1.0, count - 1.0),
                                   target);
      ++stats.cells_total;
      if (dev <= 3.0) ++stats.cells_within_3se;
      if (dev != kInf) {
        stats.max_cell_dev_se = std::max(stats.max_cell_dev_se, dev);
      } else {
        stats.max_cell_dev_se = kInf;
      }
    }
  }
  return stats;
}

Theorem1Report verify_theorem1(std::size_t m, std::size_t n, double lambda,
                               std::size_t instances, int draws,
                               std::uint64_t seed) {
  if (n > 200) {
    throw std::invalid_argument("verify_theorem1 needs the exact oracle "
                                "(n <= 200)");
  }
  if (draws < 1000) throw std::invalid_argument("draws must be >= 1000");
  Theorem1Report report;
  report.draws = draws;

  std::uint64_t attempt = 0;
  const std::uint64_t max_attempts = instances * 64 + 64;
  while (report.instances < instances && attempt < max_attempts) {
    const std::uint64_t instance_seed = mix_seed(seed, attempt);
    ++attempt;
    ++report.attempts;

    Impression imp = generate_instance(m, n, lambda, instance_seed);
    const BreakpointSet gaps = all_pair_breakpoints(imp);
    if (gaps.degenerate) {
      ++report.skipped_degenerate;
      continue;
    }
    // Tolerance below half the smallest indifference gap guarantees the
    // final bracket straddles exactly one response change.
    imp.epsilon = std::min(kDefaultEpsilon, gaps.delta_min / 2.0);

    const LpSolution lp = exact_lp(imp);
    if (lp.case_tag == LpSolution::Case::kA) {
      ++report.skipped_redundant;
      continue;
    }
    if (lp.degenerate) {
      ++report.skipped_degenerate;
      continue;
    }

    const InstanceMonteCarlo stats =
        monte_carlo_check(imp, lp, draws, mix_seed(instance_seed, 0x5eed));
    ++report.instances;
    if (stats.revenue_dev_se <= 3.0) ++report.revenue_within_3se;
    if (stats.relevance_dev_se <= 3.0) ++report.relevance_within_3se;
    report.cells_total += stats.cells_total;
    report.cells_within_3se += stats.cells_within_3se;
    report.max_revenue_dev_se =
        std::max(report.max_revenue_dev_se, stats.revenue_dev_se);
    report.max_relevance_dev_se =
        std::max(report.max_relevance_dev_se, stats.relevance_dev_se);
    report.max_cell_dev_se =
        std::max(report.max_cell_dev_se, stats.max_cell_dev_se);
  }
  if (report.instances < instances) {
    throw std::runtime_error("could not find enough binding nondegenerate "
                             "instances");
  }
  return report;
}

std::string theorem1_report_to_json(const Theorem1Report& report) {
  nlohmann::json doc;
  doc["instances"] = report.instances;
  doc["attempts"] = report.attempts;
  doc["skipped_redundant"] = report.skipped_redundant;
  doc["skipped_degenerate"] = report.skipped_degenerate;
  doc["draws"] = report.draws;
  doc["revenue_within_3se"] = report.revenue_within_3se;
  doc["relevance_within_3se"] = report.relevance_within_3se;
  doc["cells_total"] = report.cells_total;
  doc["cells_within_3se"] = report.cells_within_3se;
  doc["max_revenue_dev_se"] = report.max_revenue_dev_se;
  doc["max_relevance_dev_se"] = report.max_relevance_dev_se;
  doc["max_cell_dev_se"] = report.max_cell_dev_se;
  return doc.dump(2);
}

} // namespace slr
