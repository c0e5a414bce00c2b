// Copyright 2026 The Platinum Authors.
//
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

#include <numeric>
#include <random>

#include "platinum/maximize.hpp"
#include "platinum/select.hpp"

namespace {

using namespace platinum;

Kernel random_kernel(Index rows, Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = u(rng);
  std::vector<Index> col_index(static_cast<std::size_t>(cols));
  std::iota(col_index.begin(), col_index.end(), Index{0});
  return Kernel(m, std::vector<ClassId>(static_cast<std::size_t>(rows), 0), col_index);
}

void run_maximizer(benchmark::State& state, MaximizerKind kind) {
  const Index cols = state.range(0);
  const int budget = static_cast<int>(state.range(1));
  const Kernel k = random_kernel(16, cols, 1);
  std::vector<Index> pool(static_cast<std::size_t>(cols));
  std::iota(pool.begin(), pool.end(), Index{0});
  std::size_t evals = 0;
  for (auto _ : state) {
    GainState s(SetFunctionKind::flmi(), k);
    const GreedyResult r = maximize(s, pool, budget, kind, 7);
    evals += r.evaluations;
    benchmark::DoNotOptimize(r.final_value);
  }
  state.counters["evals/iter"] = benchmark::Counter(static_cast<double>(evals), benchmark::Counter::kAvgIterations);
}

void BM_NaiveGreedy(benchmark::State& state) { run_maximizer(state, MaximizerKind::naive()); }
void BM_LazyGreedy(benchmark::State& state) { run_maximizer(state, MaximizerKind::lazy()); }
void BM_StochasticGreedy(benchmark::State& state) { run_maximizer(state, MaximizerKind::stochastic(0.1)); }

BENCHMARK(BM_NaiveGreedy)->Args({250, 5})->Args({500, 10})->Args({2000, 50});
BENCHMARK(BM_LazyGreedy)->Args({250, 5})->Args({500, 10})->Args({2000, 50});
BENCHMARK(BM_StochasticGreedy)->Args({250, 5})->Args({500, 10})->Args({2000, 50});

void BM_PerClassSelect(benchmark::State& state) {
  const Index cols = state.range(0);
  Kernel base = random_kernel(80, cols, 2);
  std::vector<ClassId> rc(80);
  for (int i = 0; i < 80; ++i) rc[static_cast<std::size_t>(i)] = i % 5;
  const Kernel k(base.values(), rc, std::vector<Index>(base.col_index().begin(), base.col_index().end()));
  std::vector<Index> pool(static_cast<std::size_t>(cols));
  std::iota(pool.begin(), pool.end(), Index{0});
  for (auto _ : state) {
    const SelectedSubset s = per_class_select(k, pool, 5, 5, SetFunctionKind::flmi(), MaximizerKind::lazy(), 0);
    benchmark::DoNotOptimize(s.entries.data());
  }
}
BENCHMARK(BM_PerClassSelect)->Arg(250)->Arg(500);

}  // namespace
