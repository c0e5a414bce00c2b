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

#include "platinum/maximize.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <queue>

#include "platinum/error.hpp"
#include "platinum/random.hpp"

namespace platinum {

namespace {

std::vector<Index> sorted_pool(std::span<const Index> pool, const GainState& state) {
  std::vector<Index> out(pool.begin(), pool.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  std::erase_if(out, [&](Index x) { return state.contains(x); });
  return out;
}

// Heap order: larger gain first, then lower index.
struct Candidate {
  double bound;
  Index index;
  std::size_t fresh_at;  // step at which bound was computed
};

struct WorseCandidate {
  bool operator()(const Candidate& a, const Candidate& b) const {
    if (a.bound != b.bound) return a.bound < b.bound;
    return a.index > b.index;
  }
};

void record(GreedyResult& result, GainState& state, Index x, double gain) {
  state.commit(x);
  result.selected.push_back(x);
  result.gains.push_back(gain);
  result.final_value += gain;
}

}  // namespace

std::string to_string(Maximizer m) {
  switch (m) {
    case Maximizer::kNaive: return "naive";
    case Maximizer::kLazy: return "lazy";
    case Maximizer::kStochastic: return "stochastic";
  }
  return "?";
}

Maximizer parse_maximizer(const std::string& name) {
  std::string lower = name;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "naive") return Maximizer::kNaive;
  if (lower == "lazy") return Maximizer::kLazy;
  if (lower == "stochastic") return Maximizer::kStochastic;
  throw ConfigError("unknown maximizer '" + name + "'");
}

GreedyResult naive_greedy(GainState& state, std::span<const Index> pool, std::size_t budget) {
  std::vector<Index> remaining = sorted_pool(pool, state);
  const std::size_t start_evals = state.evaluations();
  GreedyResult result;
  const std::size_t steps = std::min(budget, remaining.size());
  for (std::size_t step = 0; step < steps; ++step) {
    std::size_t best = 0;
    double best_gain = state.marginal_gain(remaining[0]);
    for (std::size_t k = 1; k < remaining.size(); ++k) {
      const double g = state.marginal_gain(remaining[k]);
      if (g > best_gain) {
        best_gain = g;
        best = k;
      }
    }
    record(result, state, remaining[best], best_gain);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
  }
  result.evaluations = state.evaluations() - start_evals;
  return result;
}

GreedyResult lazy_greedy(GainState& state, std::span<const Index> pool, std::size_t budget) {
  const std::vector<Index> remaining = sorted_pool(pool, state);
  const std::size_t start_evals = state.evaluations();
  GreedyResult result;
  const std::size_t steps = std::min(budget, remaining.size());
  if (steps == 0) return result;

  std::priority_queue<Candidate, std::vector<Candidate>, WorseCandidate> heap;
  for (Index x : remaining) heap.push({state.marginal_gain(x), x, 0});

  const WorseCandidate worse;
  std::size_t step = 0;
  while (step < steps) {
    Candidate top = heap.top();
    heap.pop();
    if (top.fresh_at != step) {
      top.bound = state.marginal_gain(top.index);
      top.fresh_at = step;
      // A fresh value that still beats every stale bound is the argmax.
      if (!heap.empty() && worse(top, heap.top())) {
        heap.push(top);
        continue;
      }
    }
    record(result, state, top.index, top.bound);
    ++step;
  }
  result.evaluations = state.evaluations() - start_evals;
  return result;
}

GreedyResult stochastic_greedy(GainState& state, std::span<const Index> pool, std::size_t budget,
                               double epsilon, std::uint64_t rng_seed) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("stochastic greedy needs 0 < epsilon < 1");
  std::vector<Index> remaining = sorted_pool(pool, state);
  const std::size_t start_evals = state.evaluations();
  GreedyResult result;
  const std::size_t steps = std::min(budget, remaining.size());
  if (steps == 0) return result;

  const double raw = std::ceil(static_cast<double>(remaining.size()) / static_cast<double>(budget) *
                               std::log(1.0 / epsilon));
  const std::size_t sample_size = static_cast<std::size_t>(std::max(1.0, raw));
  Rng rng(rng_seed);
  for (std::size_t step = 0; step < steps; ++step) {
    const std::size_t s = std::min(sample_size, remaining.size());
    const std::vector<std::size_t> picks = sample_without_replacement(remaining.size(), s, rng);
    std::size_t best = picks[0];
    double best_gain = state.marginal_gain(remaining[best]);
    for (std::size_t k = 1; k < picks.size(); ++k) {
      const double g = state.marginal_gain(remaining[picks[k]]);
      if (g > best_gain || (g == best_gain && picks[k] < best)) {
        best_gain = g;
        best = picks[k];
      }
    }
    record(result, state, remaining[best], best_gain);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
  }
  result.evaluations = state.evaluations() - start_evals;
  return result;
}

GreedyResult maximize(GainState& state, std::span<const Index> pool, std::size_t budget,
                      const MaximizerKind& kind, std::uint64_t rng_seed) {
  switch (kind.variant) {
    case Maximizer::kNaive: return naive_greedy(state, pool, budget);
    case Maximizer::kLazy: return lazy_greedy(state, pool, budget);
    case Maximizer::kStochastic: return stochastic_greedy(state, pool, budget, kind.epsilon, rng_seed);
  }
  return {};
}

namespace {

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  return c;
}

}  // namespace

BruteForceResult brute_force_max(const SetFunctionKind& kind, const Kernel& kernel,
                                 std::span<const Index> pool, std::size_t budget) {
  std::vector<Index> items(pool.begin(), pool.end());
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
  const std::size_t n = items.size();
  budget = std::min(budget, n);
  if (binomial(n, budget) > kMaxBruteForceSubsets) {
    throw SizeError("brute force over C(" + std::to_string(n) + ", " + std::to_string(budget) +
                    ") subsets refused");
  }

  BruteForceResult best{{}, evaluate(kind, {}, kernel)};
  std::vector<Index> subset;
  // Lexicographic enumeration of index combinations of every size <= budget.
  for (std::size_t size = 1; size <= budget; ++size) {
    std::vector<std::size_t> comb(size);
    for (std::size_t i = 0; i < size; ++i) comb[i] = i;
    while (true) {
      subset.clear();
      for (std::size_t i : comb) subset.push_back(items[i]);
      const double v = evaluate(kind, subset, kernel);
      if (v > best.best_value) best = {subset, v};
      std::size_t i = size;
      while (i > 0 && comb[i - 1] == n - size + i - 1) --i;
      if (i == 0) break;
      ++comb[i - 1];
      for (std::size_t j = i; j < size; ++j) comb[j] = comb[j - 1] + 1;
    }
  }
  return best;
}

}  // namespace platinum
