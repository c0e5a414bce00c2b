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

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "platinum/smi.hpp"

namespace platinum {

enum class Maximizer { kNaive, kLazy, kStochastic };

struct MaximizerKind {
  Maximizer variant = Maximizer::kLazy;
  double epsilon = 0.1;  // stochastic only, in (0, 1)

  static MaximizerKind naive() { return {Maximizer::kNaive}; }
  static MaximizerKind lazy() { return {Maximizer::kLazy}; }
  static MaximizerKind stochastic(double eps) { return {Maximizer::kStochastic, eps}; }
};

std::string to_string(Maximizer m);
Maximizer parse_maximizer(const std::string& name);

struct GreedyResult {
  std::vector<Index> selected;  // kernel column positions, in selection order
  std::vector<double> gains;    // marginal gain at selection time
  double final_value = 0.0;
  std::size_t evaluations = 0;  // marginal_gain calls, diagnostics only
};

// All maximizers commit into the state, pick the candidate with the largest
// marginal gain at each step and break ties by the lowest column index. A
// budget larger than the pool selects the whole pool.
GreedyResult naive_greedy(GainState& state, std::span<const Index> pool, std::size_t budget);

// Minoux's accelerated greedy: a max-heap of stale upper bounds, where the
// top is re-evaluated until its gain is current. Same output as
// naive_greedy for submodular functions.
GreedyResult lazy_greedy(GainState& state, std::span<const Index> pool, std::size_t budget);

// Each step scores ceil((|pool| / budget) ln(1/epsilon)) candidates sampled
// uniformly from the remaining pool and commits the best of them.
GreedyResult stochastic_greedy(GainState& state, std::span<const Index> pool, std::size_t budget,
                               double epsilon, std::uint64_t rng_seed);

GreedyResult maximize(GainState& state, std::span<const Index> pool, std::size_t budget,
                      const MaximizerKind& kind, std::uint64_t rng_seed);

struct BruteForceResult {
  std::vector<Index> best_set;
  double best_value = 0.0;
};

inline constexpr double kMaxBruteForceSubsets = 1e6;

// Exact maximum over all subsets of the pool with at most budget
// elements. Throws SizeError when C(|pool|, budget) exceeds 1e6.
BruteForceResult brute_force_max(const SetFunctionKind& kind, const Kernel& kernel,
                                 std::span<const Index> pool, std::size_t budget);

}  // namespace platinum
