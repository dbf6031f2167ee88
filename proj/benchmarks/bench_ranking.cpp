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

#include <benchmark/benchmark.h>

#include "slr/baseline.hpp"
#include "slr/harness.hpp"
#include "slr/model.hpp"
#include "slr/oracles.hpp"
#include "slr/ranker.hpp"

namespace {

// Production-shaped sizes plus the benchmark extremes. The 0.1 s latency
// budget is the line to watch on the (500, 500) row.
void BM_RankFeasible(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto n = static_cast<std::size_t>(state.range(1));
  const slr::Impression imp = slr::generate_instance(m, n, 0.95, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(slr::rank_feasible(imp));
  }
}
BENCHMARK(BM_RankFeasible)
    ->Args({10, 50})
    ->Args({50, 500})
    ->Args({50, 2000})
    ->Args({200, 1000})
    ->Args({500, 500})
    ->Unit(benchmark::kMicrosecond);

void BM_RankRandomized(benchmark::State& state) {
  const slr::Impression imp = slr::generate_instance(50, 500, 0.95, 7);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(slr::rank_randomized(imp, seed++));
  }
}
BENCHMARK(BM_RankRandomized)->Unit(benchmark::kMicrosecond);

void BM_PrimalResponse(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto n = static_cast<std::size_t>(state.range(1));
  const slr::Impression imp = slr::generate_instance(m, n, 0.95, 11);
  std::vector<double> delta(n);
  for (std::size_t j = 0; j < n; ++j) {
    delta[j] = imp.items[j].value + 0.5 * imp.items[j].ptr;
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(slr::primal_response(delta, m));
  }
}
BENCHMARK(BM_PrimalResponse)
    ->Args({50, 500})
    ->Args({50, 2000})
    ->Args({500, 500})
    ->Unit(benchmark::kMicrosecond);

void BM_ScoreRank(benchmark::State& state) {
  std::vector<slr::Item> items;
  slr::Impression synth = slr::generate_instance(50, 500, 0.95, 3);
  for (std::size_t j = 0; j < synth.item_count(); ++j) {
    items.push_back(slr::Item::from_rates("i" + std::to_string(j),
                                          synth.items[j].ptr,
                                          100.0 * synth.items[j].value, 0.1,
                                          0.05));
  }
  const slr::Impression imp =
      slr::build_impression(synth.position_weights, items, 0.95);
  for (auto _ : state) {
    benchmark::DoNotOptimize(slr::score_rank(imp, {1.0}));
  }
}
BENCHMARK(BM_ScoreRank)->Unit(benchmark::kMicrosecond);

void BM_ExactLp(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const slr::Impression imp = slr::generate_instance(10, n, 0.95, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(slr::exact_lp(imp));
  }
}
BENCHMARK(BM_ExactLp)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMicrosecond);

} // namespace

BENCHMARK_MAIN();
