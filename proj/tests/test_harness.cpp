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

#include <map>
#include <stdexcept>

#include "doctest.h"

#include "slr/harness.hpp"
#include "slr/model.hpp"
#include "slr/oracles.hpp"
#include "slr/ranker.hpp"

using namespace slr;

TEST_CASE("generated instances are deterministic and well-formed") {
  const Impression a = generate_instance(50, 500, 0.9, 42);
  const Impression b = generate_instance(50, 500, 0.9, 42);
  CHECK(a.position_weights == b.position_weights);
  for (std::size_t j = 0; j < a.item_count(); ++j) {
    CHECK(a.items[j].ptr == b.items[j].ptr);
    CHECK(a.items[j].value == b.items[j].value);
  }
  for (std::size_t i = 0; i + 1 < a.slot_count(); ++i) {
    CHECK(a.position_weights[i] >= a.position_weights[i + 1]);
  }
  for (std::size_t i = 0; i < a.slot_count(); ++i) {
    CHECK(a.position_weights[i] >= 0.0);
    CHECK(a.position_weights[i] < 1.0);
  }
  for (const Item& item : a.items) {
    CHECK(item.ptr >= 0.0);
    CHECK(item.ptr < 1.0);
    CHECK(item.value >= 0.0);
    CHECK(item.value < 1.0);
  }

  const Impression c = generate_instance(50, 500, 0.9, 43);
  CHECK(a.items[0].ptr != c.items[0].ptr);
  CHECK_THROWS_AS(generate_instance(5, 4, 0.9, 1), std::invalid_argument);
}

TEST_CASE("lambda sweep records gaps, redundancy, and shared instances") {
  std::vector<TrialOutcome> details;
  const std::vector<BenchRecord> records = run_lambda_sweep(
      3, 12, {0.9, 0.1, 0.99}, 40, 7, TimingMode::kOff, &details);
  REQUIRE(records.size() == 3);
  CHECK(records[0].lambda == 0.1); // ascending order
  CHECK(records[2].lambda == 0.99);
  for (const BenchRecord& record : records) {
    CHECK(record.trials == 40);
    CHECK(record.mean_gap_pct >= 0.0);
    CHECK(record.redundancy_rate >= 0.0);
    CHECK(record.redundancy_rate <= 1.0);
    CHECK(record.mean_time_us == 0.0);
  }
  // Small lambda leaves the floor slack on almost every uniform instance.
  CHECK(records[0].redundancy_rate > 0.9);

  for (const TrialOutcome& trial : details) {
    CHECK(trial.gap_pct >= 0.0);
    if (trial.redundant) {
      CHECK(trial.gap_pct == 0.0);
      CHECK(trial.bound_source == "redundant");
    } else {
      CHECK(trial.bound_source == "exact_lp"); // n = 12 is inside the guard
    }
  }

  // Mean revenue cannot rise when lambda tightens on the same seed set.
  std::map<double, double> mean_revenue;
  for (const TrialOutcome& trial : details) {
    mean_revenue[trial.lambda] += trial.revenue / 40.0;
  }
  CHECK(mean_revenue[0.1] + 1e-9 >= mean_revenue[0.9]);
  CHECK(mean_revenue[0.9] + 1e-9 >= mean_revenue[0.99]);
}

TEST_CASE("the optimality gap shrinks as the candidate pool grows") {
  // A denser pool offers finer swaps near the floor, so the integrality gap
  // falls with n at fixed m.
  const std::vector<BenchRecord> records = run_size_sweep(
      {{5, 25}, {5, 200}}, 0.95, 200, 31415, TimingMode::kOff);
  REQUIRE(records.size() == 2);
  CHECK(records[1].mean_gap_pct < records[0].mean_gap_pct);
}

TEST_CASE("size sweep uses the dual bound beyond the oracle guard") {
  std::vector<TrialOutcome> details;
  const std::vector<BenchRecord> records = run_size_sweep(
      {{2, 210}}, 0.97, 15, 11, TimingMode::kOff, &details);
  REQUIRE(records.size() == 1);
  bool saw_dual = false;
  for (const TrialOutcome& trial : details) {
    CHECK(trial.gap_pct >= 0.0);
    if (!trial.redundant) {
      CHECK(trial.bound_source == "dual");
      saw_dual = true;
      CHECK(trial.upper_bound >= trial.revenue - 1e-9);
    }
  }
  CHECK(saw_dual);
}

TEST_CASE("csv output is byte-stable for a fixed seed") {
  const auto run = [] {
    return to_csv(run_lambda_sweep(3, 10, {0.5, 0.9}, 25, 99,
                                   TimingMode::kOff));
  };
  const std::string first = run();
  const std::string second = run();
  CHECK(first == second);
  CHECK(first.rfind("m,n,lambda,trials,mean_gap_pct,mean_time_us,"
                    "p50_time_us,p99_time_us,redundancy_rate,seed\n",
                    0) == 0);
  CHECK(first.find("\n3,10,0.5,25,") != std::string::npos);
}

TEST_CASE("tune_lambda summarizes historical relevance ratios") {
  // Single-slot impressions with known ratios 0.8, 0.9, 1.0.
  std::vector<std::pair<Impression, RankingPlan>> history;
  for (double r : {0.8, 0.9, 1.0}) {
    std::vector<Item> items;
    items.push_back(Item::synthetic("shown", r, 1.0));
    items.push_back(Item::synthetic("best", 1.0, 1.0));
    Impression imp = build_impression({1.0}, std::move(items), 0.5);
    RankingPlan plan;
    plan.assignment = {0};
    history.emplace_back(std::move(imp), std::move(plan));
  }

  const TuneReport by_mean = tune_lambda(history, Statistic::mean(), 0.02, 2);
  CHECK(by_mean.samples == 3);
  CHECK(by_mean.lambda0 == doctest::Approx(0.9));
  CHECK(by_mean.grid.front() == doctest::Approx(0.86));
  CHECK(by_mean.grid.back() == doctest::Approx(0.94));

  const TuneReport by_median =
      tune_lambda(history, Statistic::quantile(0.5), 0.02, 0);
  CHECK(by_median.lambda0 == doctest::Approx(0.9));
  CHECK(by_median.grid == std::vector<double>{by_median.lambda0});

  CHECK_THROWS_AS(tune_lambda({}, Statistic::mean(), 0.02, 2),
                  std::invalid_argument);
}

TEST_CASE("tune_lambda skips impressions without achievable relevance") {
  std::vector<std::pair<Impression, RankingPlan>> history;
  {
    std::vector<Item> items;
    items.push_back(Item::synthetic("dead", 0.0, 1.0));
    Impression imp = build_impression({1.0}, std::move(items), 0.0);
    RankingPlan plan;
    plan.assignment = {0};
    history.emplace_back(std::move(imp), std::move(plan));
  }
  {
    std::vector<Item> items;
    items.push_back(Item::synthetic("live", 0.7, 1.0));
    Impression imp = build_impression({1.0}, std::move(items), 0.0);
    RankingPlan plan;
    plan.assignment = {0};
    history.emplace_back(std::move(imp), std::move(plan));
  }
  const TuneReport report = tune_lambda(history, Statistic::mean(), 0.01, 1);
  CHECK(report.samples == 1);
  CHECK(report.skipped == 1);
  CHECK(report.lambda0 == doctest::Approx(1.0));
  const std::string json = tune_report_to_json(report);
  CHECK(json.find("\"lambda0\"") != std::string::npos);
}

TEST_CASE("monte carlo check matches the worked relaxation") {
  std::vector<Item> items;
  items.push_back(Item::synthetic("a", 0.1, 10.0));
  items.push_back(Item::synthetic("b", 1.0, 1.0));
  const Impression imp = build_impression({1.0}, std::move(items), 0.5, 1e-6);
  const LpSolution lp = exact_lp(imp);
  const InstanceMonteCarlo stats = monte_carlo_check(imp, lp, 20000, 2026);
  CHECK(stats.revenue_dev_se <= 3.0);
  CHECK(stats.relevance_dev_se <= 3.0);
  CHECK(stats.cells_total == 2);
  CHECK(stats.cells_within_3se == 2);
}

TEST_CASE("monte carlo check is exact on a redundant instance") {
  std::vector<Item> items;
  items.push_back(Item::synthetic("a", 0.9, 10.0));
  items.push_back(Item::synthetic("b", 0.2, 1.0));
  const Impression imp = build_impression({1.0}, std::move(items), 0.5, 1e-6);
  const LpSolution lp = exact_lp(imp);
  REQUIRE(lp.case_tag == LpSolution::Case::kA);
  const InstanceMonteCarlo stats = monte_carlo_check(imp, lp, 1000, 5);
  CHECK(stats.mean_revenue == doctest::Approx(lp.objective).epsilon(1e-12));
  CHECK(stats.mean_relevance == doctest::Approx(lp.relevance).epsilon(1e-12));
  // Every draw is the same plan; any reported deviation is pure roundoff.
  CHECK(stats.revenue_dev_se <= 1e-3);
  CHECK(stats.relevance_dev_se <= 1e-3);
  CHECK(stats.cells_within_3se == stats.cells_total);
}

TEST_CASE("theorem-1 verifier on a small batch") {
  const Theorem1Report report = verify_theorem1(3, 6, 0.9, 25, 2000, 314);
  CHECK(report.instances == 25);
  CHECK(report.draws == 2000);
  // Loose smoke thresholds; the acceptance suite runs the strict protocol.
  CHECK(report.revenue_within_3se >= 23);
  CHECK(report.relevance_within_3se >= 23);
  CHECK(report.cells_total == 25 * 3 * 6);
  CHECK(static_cast<double>(report.cells_within_3se) >=
        0.9 * static_cast<double>(report.cells_total));
  const std::string json = theorem1_report_to_json(report);
  CHECK(json.find("cells_within_3se") != std::string::npos);
}
