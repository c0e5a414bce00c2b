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

#include "platinum/select.hpp"

#include <algorithm>
#include <limits>
#include <ostream>

#include "platinum/error.hpp"
#include "platinum/random.hpp"

namespace platinum {

void Budget::validate() const {
  if (way < 1) throw ConfigError("budget needs at least one class");
  if (b_in < 0 || b_out < 0) throw ConfigError("budgets must be non-negative");
  if (b_in % way != 0 || b_out % way != 0) {
    throw ConfigError("budgets " + std::to_string(b_in) + "/" + std::to_string(b_out) +
                      " are not divisible by " + std::to_string(way) + " classes");
  }
}

std::vector<Index> SelectedSubset::indices() const {
  std::vector<Index> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.pool_index);
  return out;
}

std::vector<int> SelectedSubset::class_counts(int classes) const {
  std::vector<int> counts(static_cast<std::size_t>(classes), 0);
  for (const auto& e : entries) {
    if (e.label >= 0 && e.label < classes) ++counts[static_cast<std::size_t>(e.label)];
  }
  return counts;
}

void SelectedSubset::append(const SelectedSubset& more) {
  entries.insert(entries.end(), more.entries.begin(), more.entries.end());
  exhausted = exhausted || more.exhausted;
}

SelectedSubset per_class_select(const Kernel& kernel, std::span<const Index> pool,
                                int budget_per_class, int classes, const SetFunctionKind& kind,
                                const MaximizerKind& maximizer, std::uint64_t seed, int step,
                                Origin origin) {
  if (classes < 1) throw InputError("per-class selection needs at least one class");
  if (budget_per_class < 0) throw InputError("negative per-class budget");
  std::vector<char> present(static_cast<std::size_t>(classes), 0);
  for (ClassId c : kernel.row_class()) {
    if (c < 0 || c >= classes) throw InputError("kernel row class " + std::to_string(c) + " out of range");
    present[static_cast<std::size_t>(c)] = 1;
  }
  for (int c = 0; c < classes; ++c) {
    if (!present[static_cast<std::size_t>(c)]) {
      throw InputError("kernel has no query rows for class " + std::to_string(c));
    }
  }

  SelectedSubset out;
  out.origin = origin;
  std::vector<Index> available(pool.begin(), pool.end());
  std::sort(available.begin(), available.end());
  available.erase(std::unique(available.begin(), available.end()), available.end());

  for (ClassId c = 0; c < classes; ++c) {
    const Kernel sub = kernel.rows_of_class(c);
    GainState state(kind, sub);
    const GreedyResult r = maximize(state, available, static_cast<std::size_t>(budget_per_class),
                                    maximizer, derive_seed(seed, {static_cast<std::uint64_t>(c)}));
    if (r.selected.size() < static_cast<std::size_t>(budget_per_class)) out.exhausted = true;
    for (std::size_t k = 0; k < r.selected.size(); ++k) {
      out.entries.push_back({kernel.col_index()[r.selected[k]], c, r.gains[k], step});
    }
    std::vector<Index> won = r.selected;
    std::sort(won.begin(), won.end());
    std::erase_if(available,
                  [&](Index x) { return std::binary_search(won.begin(), won.end(), x); });
  }
  return out;
}

std::vector<Index> remaining_pool(const Episode& episode, const SelectedSubset& taken) {
  std::vector<char> used(static_cast<std::size_t>(episode.unlabeled_size()), 0);
  for (const auto& e : taken.entries) {
    if (e.pool_index < 0 || e.pool_index >= episode.unlabeled_size()) {
      throw InputError("selected index outside the unlabeled pool");
    }
    used[static_cast<std::size_t>(e.pool_index)] = 1;
  }
  std::vector<Index> out;
  for (Index u = 0; u < episode.unlabeled_size(); ++u) {
    if (!used[static_cast<std::size_t>(u)]) out.push_back(u);
  }
  return out;
}

Kernel selection_kernel(const ParamVector& model, const Episode& episode,
                        std::span<const Index> pool, Phase phase) {
  std::vector<ClassId> row_class = episode.support.y;
  if (phase == Phase::kMetaTrain) {
    row_class.insert(row_class.end(), episode.query.y.begin(), episode.query.y.end());
  }
  const Embeddings rows = onehot_embed(row_class, episode.way());
  Matrix points(static_cast<Index>(pool.size()), episode.unlabeled.cols());
  for (std::size_t k = 0; k < pool.size(); ++k) {
    points.row(static_cast<Index>(k)) = episode.unlabeled.row(pool[k]);
  }
  const Embeddings cols = prob_embed(model, points);
  if (cols.dim() != episode.way()) {
    throw ConfigError("model has " + std::to_string(cols.dim()) + " outputs for a " +
                      std::to_string(episode.way()) + "-way task");
  }
  return cosine_kernel(rows, cols, std::move(row_class), std::vector<Index>(pool.begin(), pool.end()));
}

SelectedSubset smi_select(const ParamVector& model, const Episode& episode,
                          std::span<const Index> pool, int budget_per_class,
                          const SetFunctionKind& kind, const MaximizerKind& maximizer, Phase phase,
                          std::uint64_t seed, int step, Origin origin) {
  SelectedSubset out;
  out.origin = origin;
  if (pool.empty()) {
    out.exhausted = budget_per_class > 0;
    return out;
  }
  const Kernel kernel = selection_kernel(model, episode, pool, phase);
  std::vector<Index> columns(pool.size());
  for (std::size_t k = 0; k < columns.size(); ++k) columns[k] = static_cast<Index>(k);
  return per_class_select(kernel, columns, budget_per_class, episode.way(), kind, maximizer, seed,
                          step, origin);
}

SelectedSubset inner_select(const ParamVector& model, const Episode& episode,
                            const SelectedSubset& already, const Budget& budget,
                            const SetFunctionKind& kind, const MaximizerKind& maximizer,
                            Phase phase, int step, std::uint64_t seed) {
  budget.validate();
  const std::vector<Index> pool = remaining_pool(episode, already);
  return smi_select(model, episode, pool, budget.per_class_in(), kind, maximizer, phase, seed, step,
                    Origin::kInner);
}

SelectedSubset outer_select(const ParamVector& adapted, const Episode& episode,
                            const SelectedSubset& inner_selected, const Budget& budget,
                            const SetFunctionKind& kind, const MaximizerKind& maximizer,
                            std::uint64_t seed) {
  budget.validate();
  const std::vector<Index> pool = remaining_pool(episode, inner_selected);
  return smi_select(adapted, episode, pool, budget.per_class_out(), kind, maximizer,
                    Phase::kMetaTrain, seed, 0, Origin::kOuter);
}

SelectionAccuracy selection_accuracy(const SelectedSubset& subset, const Episode& episode) {
  SelectionAccuracy acc;
  if (subset.empty()) {
    acc.empty = true;
    return acc;
  }
  std::size_t match = 0;
  std::size_t in_dist = 0;
  for (const auto& e : subset.entries) {
    if (e.pool_index < 0 || e.pool_index >= episode.unlabeled_size()) {
      throw InputError("selected index outside the unlabeled pool");
    }
    const auto u = static_cast<std::size_t>(e.pool_index);
    if (!episode.unlabeled_ood[u]) {
      ++in_dist;
      if (episode.unlabeled_label[u] == e.label) ++match;
    }
  }
  const double n = static_cast<double>(subset.size());
  acc.label_match = static_cast<double>(match) / n;
  acc.in_dist = static_cast<double>(in_dist) / n;
  return acc;
}

void write_subset_csv(const SelectedSubset& subset, std::ostream& out) {
  out.precision(std::numeric_limits<double>::max_digits10);
  out << "pool_index,label,gain,step\n";
  for (const auto& e : subset.entries) {
    out << e.pool_index << ',' << e.label << ',' << e.gain << ',' << e.step << '\n';
  }
}

}  // namespace platinum
