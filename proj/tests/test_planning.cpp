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

#include <random>
#include <sstream>
#include <stdexcept>

#include "doctest.h"

#include "slr/harness.hpp"
#include "slr/instance_io.hpp"
#include "slr/model.hpp"
#include "slr/planning.hpp"
#include "slr/planning_io.hpp"
#include "slr/ranker.hpp"
#include "support/enumeration.hpp"

using namespace slr;

namespace {

Impression synthetic_impression(std::vector<double> h, std::vector<double> r,
                                std::vector<double> v, double lambda,
                                double epsilon = 1e-6) {
  std::vector<Item> items;
  for (std::size_t j = 0; j < r.size(); ++j) {
    items.push_back(Item::synthetic("i" + std::to_string(j), r[j], v[j]));
  }
  return build_impression(std::move(h), std::move(items), lambda, epsilon);
}

// One seller per item, one consumer, no binding global bounds.
GlobalPlanModel wrap_model(Impression imp) {
  GlobalPlanModel model;
  model.consumers.push_back({"c0", 0.0});
  PlanImpression pimp;
  for (std::size_t j = 0; j < imp.item_count(); ++j) {
    model.sellers.push_back({"s" + std::to_string(j),
                             std::numeric_limits<double>::infinity(), 0.0,
                             0.0});
    pimp.item_seller.push_back(j);
  }
  pimp.consumer = 0;
  pimp.impression = std::move(imp);
  model.impressions.push_back(std::move(pimp));
  validate_model(model);
  return model;
}

double enumeration_objective(const Impression& imp,
                             const std::vector<double>& slot_coef,
                             const std::vector<double>& flat_coef,
                             double relevance_floor, bool* found,
                             std::vector<std::int32_t>* argmax = nullptr) {
  const auto best = slr_test::enumerate_best(
      imp.slot_count(), imp.item_count(),
      [&](const std::vector<std::int32_t>& a) {
        double value = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
          if (a[i] == slr_test::kEmpty) continue;
          value += imp.position_weights[i] *
                       slot_coef[static_cast<std::size_t>(a[i])] +
                   flat_coef[static_cast<std::size_t>(a[i])];
        }
        return value;
      },
      [&](const std::vector<std::int32_t>& a) {
        double rel = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
          if (a[i] == slr_test::kEmpty) continue;
          rel += imp.position_weights[i] *
                 imp.items[static_cast<std::size_t>(a[i])].ptr;
        }
        return rel >= relevance_floor - 1e-9;
      });
  *found = best.found;
  if (argmax != nullptr) *argmax = best.assignment;
  return best.objective;
}

} // namespace

TEST_CASE("adjust_coefficients applies the dual prices") {
  Impression imp = synthetic_impression({1.0}, {0.5, 0.9}, {5.0, 10.0}, 0.0);
  GlobalPlanModel model = wrap_model(std::move(imp));
  const PlanImpression& pimp = model.impressions[0];

  SUBCASE("zero duals reduce to the plain objective") {
    const AdjustedCoefficients coefs = adjust_coefficients(model, pimp);
    CHECK(coefs.slot_coef == std::vector<double>{5.0, 10.0});
    CHECK(coefs.flat_coef == std::vector<double>{0.0, 0.0});
  }
  SUBCASE("an inventory price charges a flat penalty") {
    model.duals.xi[0] = 2.0;
    const AdjustedCoefficients coefs = adjust_coefficients(model, pimp);
    CHECK(coefs.slot_coef[0] == 5.0);
    CHECK(coefs.flat_coef[0] == -2.0);
    CHECK(coefs.flat_coef[1] == 0.0);
  }
  SUBCASE("a revenue price scales the slot coefficient") {
    model.duals.nu[1] = 0.1;
    const AdjustedCoefficients coefs = adjust_coefficients(model, pimp);
    CHECK(coefs.slot_coef[1] == doctest::Approx(11.0));
    CHECK(coefs.flat_coef[1] == 0.0);
  }
  SUBCASE("unknown indices are rejected") {
    PlanImpression broken = pimp;
    broken.consumer = 7;
    CHECK_THROWS_AS(adjust_coefficients(model, broken), std::invalid_argument);
    broken = pimp;
    broken.item_seller[0] = 99;
    CHECK_THROWS_AS(adjust_coefficients(model, broken), std::invalid_argument);
  }
}

TEST_CASE("dp_assign picks the flat-term bundle when it pays") {
  const std::vector<double> h{1.0, 0.5};
  const std::vector<double> a{3.0, 2.0, 1.0};
  const std::vector<double> b{0.0, 0.0, 5.0};
  const RankingPlan plan = dp_assign(h, a, b, 2);
  CHECK(plan.assignment == std::vector<std::int32_t>{0, 2});
  CHECK(planning_objective(h, a, b, plan) == doctest::Approx(8.5));
}

TEST_CASE("dp_assign with zero flat terms is the score sort") {
  std::mt19937_64 rng(17);
  const auto uniform = [&rng] {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  for (int round = 0; round < 30; ++round) {
    const std::size_t n = 3 + rng() % 8;
    const std::size_t m = 1 + rng() % n;
    std::vector<double> h(m), a(n);
    for (double& x : h) x = uniform();
    std::sort(h.begin(), h.end(), std::greater<>());
    for (double& x : a) x = 0.01 + uniform();
    const std::vector<double> b(n, 0.0);
    CHECK(dp_assign(h, a, b, m).assignment ==
          primal_response(a, m).assignment);
  }
}

TEST_CASE("dp_assign with m == n lists everything by slot coefficient") {
  const std::vector<double> h{0.9, 0.6, 0.3};
  const std::vector<double> a{1.0, 3.0, 2.0};
  const std::vector<double> b{0.0, 0.0, 0.0};
  const RankingPlan plan = dp_assign(h, a, b, 3);
  CHECK(plan.assignment == std::vector<std::int32_t>{1, 2, 0});
}

TEST_CASE("dp_assign equals exhaustive enumeration on signed coefficients") {
  std::mt19937_64 rng(2025);
  const auto uniform = [&rng] {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  for (int round = 0; round < 300; ++round) {
    const std::size_t n = 2 + rng() % 11; // up to 12
    const std::size_t m = 1 + rng() % std::min<std::size_t>(n, 4);
    std::vector<double> h(m), a(n), b(n);
    for (double& x : h) x = uniform();
    std::sort(h.begin(), h.end(), std::greater<>());
    for (double& x : a) x = 2.0 * uniform() - 1.0;
    for (double& x : b) x = 2.0 * uniform() - 1.0;

    const RankingPlan plan = dp_assign(h, a, b, m);
    const double dp_value = planning_objective(h, a, b, plan);
    const auto best = slr_test::enumerate_best(
        m, n,
        [&](const std::vector<std::int32_t>& assignment) {
          double value = 0.0;
          for (std::size_t i = 0; i < assignment.size(); ++i) {
            if (assignment[i] == slr_test::kEmpty) continue;
            value += h[i] * a[static_cast<std::size_t>(assignment[i])] +
                     b[static_cast<std::size_t>(assignment[i])];
          }
          return value;
        },
        [](const std::vector<std::int32_t>&) { return true; });
    CHECK(dp_value == doctest::Approx(best.objective).epsilon(1e-12));
  }
}

TEST_CASE("dp_assign validates its inputs") {
  const std::vector<double> unsorted{0.5, 1.0};
  const std::vector<double> a{1.0, 2.0};
  const std::vector<double> b{0.0, 0.0};
  CHECK_THROWS_AS(dp_assign(unsorted, a, b, 2), std::invalid_argument);
  const std::vector<double> h{1.0, 0.5, 0.2};
  CHECK_THROWS_AS(dp_assign(h, a, b, 3), std::invalid_argument); // m > n
}

TEST_CASE("rank_with_duals with zero duals matches rank_feasible") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const double lambda = 0.3 + 0.13 * static_cast<double>(seed % 5);
    Impression imp =
        generate_instance(1 + seed % 3, 4 + seed % 6, lambda,
                          mix_seed(777, seed));
    const RankOutcome plain = rank_feasible(imp);
    const GlobalPlanModel model = wrap_model(std::move(imp));
    const RankOutcome dualized = rank_with_duals(model, 0);
    CHECK(same_assignment(plain.plan, dualized.plan));
    CHECK(plain.constraint_redundant == dualized.constraint_redundant);
  }
}

TEST_CASE("a heavy inventory price cannot break the relevance floor") {
  Impression imp = synthetic_impression({1.0}, {0.1, 1.0}, {10.0, 1.0}, 0.5);
  GlobalPlanModel model = wrap_model(std::move(imp));
  model.duals.xi[1] = 100.0; // punish showing item 1 anywhere
  const RankOutcome outcome = rank_with_duals(model, 0);
  // Item 1 is the only relevance-feasible choice, penalty or not.
  CHECK(outcome.plan.assignment == std::vector<std::int32_t>{1});

  bool found = false;
  const AdjustedCoefficients coefs =
      adjust_coefficients(model, model.impressions[0]);
  std::vector<std::int32_t> argmax;
  const double best = enumeration_objective(
      model.impressions[0].impression, coefs.slot_coef, coefs.flat_coef,
      model.impressions[0].impression.relevance_floor(), &found, &argmax);
  REQUIRE(found);
  CHECK(argmax == outcome.plan.assignment);
  CHECK(planning_objective(model.impressions[0].impression.position_weights,
                           coefs.slot_coef, coefs.flat_coef, outcome.plan) ==
        doctest::Approx(best));
}

TEST_CASE("rank_with_duals never beats the filtered enumeration optimum") {
  std::mt19937_64 rng(31);
  const auto uniform = [&rng] {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Impression imp =
        generate_instance(1 + seed % 3, 4 + seed % 7, 0.2 + 0.6 * uniform(),
                          mix_seed(4242, seed));
    GlobalPlanModel model = wrap_model(std::move(imp));
    for (double& xi : model.duals.xi) xi = uniform();
    for (double& nu : model.duals.nu) nu = 0.5 * uniform();
    for (double& eta : model.duals.eta) eta = 0.25 * uniform();
    model.duals.theta[0] = 0.25 * uniform();

    const PlanImpression& pimp = model.impressions[0];
    const RankOutcome outcome = rank_with_duals(model, pimp);
    const Impression& instance = pimp.impression;
    const double relevance =
        evaluate(instance, outcome.plan).relevance;
    CHECK(relevance >= instance.relevance_floor() - 1e-9);

    const AdjustedCoefficients coefs = adjust_coefficients(model, pimp);
    bool found = false;
    const double best =
        enumeration_objective(instance, coefs.slot_coef, coefs.flat_coef,
                              instance.relevance_floor(), &found);
    REQUIRE(found);
    const double achieved =
        planning_objective(instance.position_weights, coefs.slot_coef,
                           coefs.flat_coef, outcome.plan);
    CHECK(achieved <= best + 1e-9);
    if (outcome.constraint_redundant) {
      // The floor was slack, so the inner solve is the exact optimum.
      CHECK(achieved == doctest::Approx(best).epsilon(1e-12));
    }
  }
}

TEST_CASE("dual ascent leaves slack constraints unpriced") {
  GlobalPlanModel model;
  model.consumers.push_back({"c0", 0.0});
  model.sellers.push_back({"s0", 1e9, 0.0, 0.0});
  model.sellers.push_back({"s1", std::numeric_limits<double>::infinity(), 0.0,
                           0.0});
  for (std::uint64_t t = 0; t < 3; ++t) {
    PlanImpression pimp;
    pimp.impression = generate_instance(2, 5, 0.5, mix_seed(88, t));
    pimp.consumer = 0;
    for (std::size_t j = 0; j < 5; ++j) pimp.item_seller.push_back(j % 2);
    model.impressions.push_back(std::move(pimp));
  }
  validate_model(model);

  AscentReport report;
  const GlobalPlanModel tuned = estimate_duals(model, {50, 1.0, 0}, &report);
  for (double xi : tuned.duals.xi) CHECK(xi == 0.0);
  for (double nu : tuned.duals.nu) CHECK(nu == 0.0);
  for (double eta : tuned.duals.eta) CHECK(eta == 0.0);
  for (double theta : tuned.duals.theta) CHECK(theta == 0.0);
  CHECK(report.final_violations.max_violation == 0.0);

  for (std::size_t t = 0; t < tuned.impressions.size(); ++t) {
    CHECK(same_assignment(rank_with_duals(tuned, t).plan,
                          rank_feasible(tuned.impressions[t].impression).plan));
  }
}

TEST_CASE("dual ascent prices a shared inventory bottleneck") {
  // One unit of seller s0 inventory, wanted by both impressions. The
  // revenue-optimal joint plan shows it only where it pays more.
  GlobalPlanModel model;
  model.consumers.push_back({"c0", 0.0});
  model.sellers.push_back({"s0", 1.0, 0.0, 0.0});
  model.sellers.push_back(
      {"s1", std::numeric_limits<double>::infinity(), 0.0, 0.0});

  PlanImpression first;
  first.impression =
      synthetic_impression({1.0}, {0.5, 0.9}, {10.0, 8.0}, 0.0);
  first.item_seller = {0, 1};
  first.consumer = 0;
  model.impressions.push_back(std::move(first));

  PlanImpression second;
  second.impression =
      synthetic_impression({0.9}, {0.5, 0.8}, {10.0, 5.0}, 0.0);
  second.item_seller = {0, 1};
  second.consumer = 0;
  model.impressions.push_back(std::move(second));
  validate_model(model);

  // Joint enumeration over both impressions under the inventory cap.
  double best_value = -1.0;
  std::vector<std::int32_t> best_pair;
  for (std::int32_t a : {-1, 0, 1}) {
    for (std::int32_t b : {-1, 0, 1}) {
      const double usage = (a == 0 ? 1.0 : 0.0) + (b == 0 ? 1.0 : 0.0);
      if (usage > 1.0) continue;
      const double value =
          (a < 0 ? 0.0
                 : model.impressions[0].impression.items[a].value * 1.0) +
          (b < 0 ? 0.0
                 : model.impressions[1].impression.items[b].value * 0.9);
      if (value > best_value) {
        best_value = value;
        best_pair = {a, b};
      }
    }
  }
  CHECK(best_pair == std::vector<std::int32_t>{1, 0}); // s1 item, then s0 item
  CHECK(best_value == doctest::Approx(17.0));

  AscentReport report;
  const GlobalPlanModel tuned = estimate_duals(model, {100, 1.0, 0}, &report);
  CHECK(tuned.duals.xi[0] > 2.0);
  CHECK(tuned.duals.xi[0] < 4.5);
  CHECK(report.final_violations.max_violation == 0.0);
  CHECK(report.best_dual_objective == doctest::Approx(17.0).epsilon(1e-9));

  // The induced plans display exactly the enumeration optimum's items.
  std::vector<std::int32_t> induced;
  for (std::size_t t = 0; t < tuned.impressions.size(); ++t) {
    const RankOutcome outcome = rank_with_duals(tuned, t);
    REQUIRE(outcome.plan.assignment.size() == 1);
    induced.push_back(outcome.plan.assignment[0]);
  }
  CHECK(induced == best_pair);

  // Best-so-far dual bound improves monotonically.
  double best_so_far = std::numeric_limits<double>::infinity();
  for (double value : report.dual_objective_trace) {
    best_so_far = std::min(best_so_far, value);
    CHECK(best_so_far <= value + 1e-12);
  }
  CHECK(best_so_far == doctest::Approx(report.best_dual_objective));
}

TEST_CASE("offline LP export dimensions") {
  Impression imp = synthetic_impression({1.0}, {0.5, 0.9}, {5.0, 10.0}, 0.5);
  GlobalPlanModel model;
  model.consumers.push_back({"c0", 0.0});
  model.sellers.push_back(
      {"s0", std::numeric_limits<double>::infinity(), 0.0, 0.0});
  PlanImpression pimp;
  pimp.impression = std::move(imp);
  pimp.item_seller = {0, 0};
  pimp.consumer = 0;
  model.impressions.push_back(std::move(pimp));
  validate_model(model);

  SUBCASE("no global rows: relevance + item caps + slot caps") {
    std::ostringstream sink;
    const LpExportStats stats = export_offline_lp(model, sink);
    CHECK(stats.variables == 2);
    CHECK(stats.rows == 4); // 1 relevance + 2 item caps + 1 slot cap
    CHECK(stats.rows == expected_lp_dimensions(model).rows);
    CHECK(sink.str().find("Maximize") != std::string::npos);
    CHECK(sink.str().find("rel_t0") != std::string::npos);
    CHECK(sink.str().find("End") != std::string::npos);
  }
  SUBCASE("posing inventory and revenue adds exactly two rows") {
    model.sellers[0].inventory_limit = 5.0;
    model.sellers[0].revenue_target = 1.0;
    std::ostringstream sink;
    const LpExportStats stats = export_offline_lp(model, sink);
    CHECK(stats.variables == 2);
    CHECK(stats.rows == 6);
    CHECK(stats.rows == expected_lp_dimensions(model).rows);
    CHECK(sink.str().find("inv_k0") != std::string::npos);
    CHECK(sink.str().find("rev_k0") != std::string::npos);
  }
}

TEST_CASE("export dimensions match the closed form on random models") {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 10; ++round) {
    GlobalPlanModel model;
    const std::size_t sellers = 1 + rng() % 4;
    const std::size_t consumers = 1 + rng() % 3;
    for (std::size_t k = 0; k < sellers; ++k) {
      SellerSpec seller{"s" + std::to_string(k),
                        std::numeric_limits<double>::infinity(), 0.0, 0.0};
      if (rng() % 2 == 0) seller.inventory_limit = 1.0 + rng() % 5;
      if (rng() % 2 == 0) seller.revenue_target = 1.0;
      if (rng() % 2 == 0) seller.min_consumers = 1.0;
      model.sellers.push_back(std::move(seller));
    }
    for (std::size_t g = 0; g < consumers; ++g) {
      model.consumers.push_back(
          {"c" + std::to_string(g), rng() % 2 == 0 ? 1.0 : 0.0});
    }
    const std::size_t impressions = 1 + rng() % 4;
    std::size_t expected_vars = 0;
    std::size_t imp_rows = 0;
    for (std::size_t t = 0; t < impressions; ++t) {
      const std::size_t n = 2 + rng() % 5;
      const std::size_t m = 1 + rng() % n;
      PlanImpression pimp;
      pimp.impression = generate_instance(m, n, 0.5, mix_seed(919, rng()));
      pimp.consumer = rng() % consumers;
      for (std::size_t j = 0; j < n; ++j) {
        pimp.item_seller.push_back(rng() % sellers);
      }
      model.impressions.push_back(std::move(pimp));
      expected_vars += m * n;
      imp_rows += 1 + m + n;
    }
    validate_model(model);

    std::size_t global_rows = 0;
    for (const SellerSpec& s : model.sellers) {
      if (std::isfinite(s.inventory_limit)) ++global_rows;
      if (s.revenue_target > 0.0) ++global_rows;
      if (s.min_consumers > 0.0) ++global_rows;
    }
    for (const ConsumerSpec& c : model.consumers) {
      if (c.min_sellers > 0.0) ++global_rows;
    }

    std::ostringstream sink;
    const LpExportStats stats = export_offline_lp(model, sink);
    CHECK(stats.variables == expected_vars);
    CHECK(stats.rows == imp_rows + global_rows);
    const LpExportStats expected = expected_lp_dimensions(model);
    CHECK(stats.variables == expected.variables);
    CHECK(stats.rows == expected.rows);
  }
}

TEST_CASE("plan model documents round-trip") {
  const std::string text = R"({
    "sellers": [{"id": "s1", "inventory_limit": 5, "revenue_target": 0.5,
                 "min_consumers": 1}],
    "consumers": [{"id": "c1", "min_sellers": 1}],
    "impressions": [
      {"consumer": "c1",
       "position_weights": [1.0],
       "items": [{"id": "i1", "r": 0.5, "v": 2.0, "seller": "s1"},
                 {"id": "i2", "r": 0.9, "v": 1.0, "seller": "s1"}],
       "lambda": 0.5}
    ]
  })";
  const GlobalPlanModel model = parse_plan_model(text);
  CHECK(model.sellers.size() == 1);
  CHECK(model.impressions[0].item_seller == std::vector<std::size_t>{0, 0});
  CHECK(model.duals.xi == std::vector<double>{0.0});

  const GlobalPlanModel again = parse_plan_model(plan_model_to_json(model));
  CHECK(again.sellers[0].inventory_limit == 5.0);
  CHECK(again.impressions.size() == 1);
  CHECK(again.impressions[0].impression.items[1].ptr == 0.9);

  CHECK_THROWS_AS(parse_plan_model(R"({"sellers": [], "consumers": [],
    "impressions": [{"consumer": "nope", "position_weights": [1.0],
                     "items": [], "lambda": 0}]})"),
                  ParseError);
}
