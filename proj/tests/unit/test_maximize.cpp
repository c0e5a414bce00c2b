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

#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "platinum/error.hpp"
#include "platinum/maximize.hpp"

using namespace platinum;
using namespace platinum::testing;

namespace {

Kernel toy() { return to_kernel({{0.9, 0.1, 0.5}, {0.2, 0.8, 0.4}}); }

std::vector<Index> iota(Index n) {
  std::vector<Index> v(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) v[i] = i;
  return v;
}

GreedyResult run(const MaximizerKind& m, SetFunctionKind kind, const Kernel& k, std::size_t budget,
                 std::uint64_t seed = 1) {
  GainState state(kind, k);
  return maximize(state, iota(k.cols()), budget, m, seed);
}

}  // namespace

TEST_CASE("naive greedy on the toy kernel (GCMI)") {
  const Kernel k = toy();
  const GreedyResult one = run(MaximizerKind::naive(), SetFunctionKind::gcmi(), k, 1);
  CHECK(one.selected == std::vector<Index>{0});
  CHECK(one.gains[0] == doctest::Approx(2.2).epsilon(1e-12));

  const GreedyResult two = run(MaximizerKind::naive(), SetFunctionKind::gcmi(), k, 2);
  CHECK(two.selected == std::vector<Index>{0, 1});
  CHECK(two.gains[1] == doctest::Approx(1.8).epsilon(1e-12));

  const GreedyResult zero = run(MaximizerKind::naive(), SetFunctionKind::gcmi(), k, 0);
  CHECK(zero.selected.empty());
  CHECK(zero.final_value == 0.0);

  const GreedyResult all = run(MaximizerKind::naive(), SetFunctionKind::gcmi(), k, 10);
  CHECK(all.selected.size() == 3);
}

TEST_CASE("lazy greedy reproduces naive greedy") {
  const Kernel k = toy();
  for (std::size_t b : {0u, 1u, 2u, 3u}) {
    const GreedyResult n = run(MaximizerKind::naive(), SetFunctionKind::gcmi(), k, b);
    const GreedyResult l = run(MaximizerKind::lazy(), SetFunctionKind::gcmi(), k, b);
    CHECK(n.selected == l.selected);
    CHECK(n.gains == l.gains);
    CHECK(n.final_value == l.final_value);
  }

  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> rows_d(1, 5), cols_d(1, 20), budget_d(0, 8);
  for (int trial = 0; trial < 200; ++trial) {
    const Kernel kk = to_kernel(random_dense(rng, rows_d(rng), cols_d(rng)));
    const auto b = static_cast<std::size_t>(budget_d(rng));
    const GreedyResult n = run(MaximizerKind::naive(), SetFunctionKind::flmi(), kk, b);
    const GreedyResult l = run(MaximizerKind::lazy(), SetFunctionKind::flmi(), kk, b);
    CHECK(n.selected == l.selected);
    CHECK(n.gains == l.gains);
    CHECK(l.evaluations <= n.evaluations);
    for (std::size_t s = 1; s < n.gains.size(); ++s) CHECK(n.gains[s] <= n.gains[s - 1] + 1e-9);
    double sum = 0.0;
    for (double g : n.gains) sum += g;
    CHECK(std::abs(sum - n.final_value) < 1e-9);
  }
}

TEST_CASE("lazy greedy evaluates each GCMI element once after the first pass") {
  std::mt19937_64 rng(2);
  const Kernel k = to_kernel(random_dense(rng, 4, 30));
  const GreedyResult l = run(MaximizerKind::lazy(), SetFunctionKind::gcmi(), k, 6);
  // First pass scores the whole pool; each later pick re-checks only its own
  // stale bound, which never moves for a modular function.
  CHECK(l.evaluations == 30 + 6 - 1);
  const GreedyResult n = run(MaximizerKind::naive(), SetFunctionKind::gcmi(), k, 6);
  CHECK(n.evaluations == 30 + 29 + 28 + 27 + 26 + 25);
}

TEST_CASE("stochastic greedy") {
  const Kernel k = toy();
  SUBCASE("sample covering the pool degenerates to naive") {
    const GreedyResult s = run(MaximizerKind::stochastic(1e-6), SetFunctionKind::flmi(), k, 2, 99);
    const GreedyResult n = run(MaximizerKind::naive(), SetFunctionKind::flmi(), k, 2);
    CHECK(s.selected == n.selected);
    CHECK(s.gains == n.gains);
  }
  SUBCASE("zero budget") {
    CHECK(run(MaximizerKind::stochastic(0.1), SetFunctionKind::flmi(), k, 0).selected.empty());
  }
  SUBCASE("deterministic per seed") {
    std::mt19937_64 rng(8);
    const Kernel kk = to_kernel(random_dense(rng, 3, 60));
    const GreedyResult a = run(MaximizerKind::stochastic(0.3), SetFunctionKind::flmi(), kk, 5, 7);
    const GreedyResult b = run(MaximizerKind::stochastic(0.3), SetFunctionKind::flmi(), kk, 5, 7);
    CHECK(a.selected == b.selected);
    CHECK(a.gains == b.gains);
  }
  SUBCASE("quality against naive, eps = 0.1") {
    std::mt19937_64 rng(12);
    double ratio_sum = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const Kernel kk = to_kernel(random_dense(rng, 4, 40));
      const double s = run(MaximizerKind::stochastic(0.1), SetFunctionKind::flmi(), kk, 5,
                           static_cast<std::uint64_t>(trial)).final_value;
      const double n = run(MaximizerKind::naive(), SetFunctionKind::flmi(), kk, 5).final_value;
      ratio_sum += s / n;
    }
    CHECK(ratio_sum / 100.0 >= 0.9);
  }
  SUBCASE("epsilon outside (0, 1)") {
    GainState st(SetFunctionKind::flmi(), k);
    CHECK_THROWS_AS(stochastic_greedy(st, iota(3), 1, 1.0, 0), ConfigError);
  }
}

TEST_CASE("brute force oracle") {
  std::mt19937_64 rng(77);
  SUBCASE("GCMI greedy is optimal") {
    for (int trial = 0; trial < 50; ++trial) {
      const Kernel k = to_kernel(random_dense(rng, 3, 10));
      const BruteForceResult bf = brute_force_max(SetFunctionKind::gcmi(), k, iota(10), 4);
      const GreedyResult g = run(MaximizerKind::naive(), SetFunctionKind::gcmi(), k, 4);
      CHECK(std::abs(bf.best_value - g.final_value) < 1e-9);
    }
  }
  SUBCASE("FLMI greedy within 1 - 1/e") {
    for (int trial = 0; trial < 50; ++trial) {
      const Kernel k = to_kernel(random_dense(rng, 3, 10));
      const BruteForceResult bf = brute_force_max(SetFunctionKind::flmi(), k, iota(10), 4);
      const GreedyResult g = run(MaximizerKind::naive(), SetFunctionKind::flmi(), k, 4);
      CHECK(g.final_value >= (1.0 - std::exp(-1.0)) * bf.best_value - 1e-12);
      CHECK(g.final_value <= bf.best_value + 1e-9);
    }
  }
  SUBCASE("budget equal to the pool") {
    const Kernel k = to_kernel(random_dense(rng, 2, 6));
    const BruteForceResult bf = brute_force_max(SetFunctionKind::flmi(), k, iota(6), 6);
    CHECK(bf.best_value == doctest::Approx(flmi_eval(iota(6), k)).epsilon(1e-12));
  }
  SUBCASE("refuses combinatorial blowup") {
    const Kernel k = to_kernel(random_dense(rng, 1, 40));
    CHECK_THROWS_AS(brute_force_max(SetFunctionKind::flmi(), k, iota(40), 20), SizeError);
  }
}

TEST_CASE("maximizer names round trip") {
  for (const auto m : {Maximizer::kNaive, Maximizer::kLazy, Maximizer::kStochastic}) {
    CHECK(parse_maximizer(to_string(m)) == m);
  }
  CHECK_THROWS_AS(parse_maximizer("fast"), ConfigError);
}
