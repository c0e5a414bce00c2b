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
#include <iosfwd>
#include <span>
#include <vector>

#include "platinum/episodes.hpp"
#include "platinum/kernel.hpp"
#include "platinum/maximize.hpp"
#include "platinum/net.hpp"
#include "platinum/smi.hpp"

namespace platinum {

// Selection budgets summed over the classes of a task; each class gets an
// equal share.
struct Budget {
  int b_in = 25;   // per inner step
  int b_out = 50;  // per outer selection
  int way = 5;

  void validate() const;
  int per_class_in() const { return b_in / way; }
  int per_class_out() const { return b_out / way; }
};

enum class Origin { kInner, kOuter };

struct SelectedEntry {
  Index pool_index;  // row of Episode::unlabeled
  ClassId label;     // hypothesized label
  double gain;
  int step;          // inner step (1-based); 0 for outer or standalone selection
};

struct SelectedSubset {
  std::vector<SelectedEntry> entries;
  Origin origin = Origin::kInner;
  bool exhausted = false;  // the pool ran out before the budget was met

  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
  std::vector<Index> indices() const;
  std::vector<int> class_counts(int classes) const;
  void append(const SelectedSubset& more);
};

// One SMI instance per class c over the rows of class c, maximized over the
// shared pool (kernel column positions) with budget_per_class. Classes run
// in ascending order; a column won by class c is unavailable to later
// classes. pool_index in the result is the kernel's col_index.
SelectedSubset per_class_select(const Kernel& kernel, std::span<const Index> pool,
                                int budget_per_class, int classes, const SetFunctionKind& kind,
                                const MaximizerKind& maximizer, std::uint64_t seed, int step = 0,
                                Origin origin = Origin::kInner);

// Unlabeled indices of the episode that are not in `taken`, ascending.
std::vector<Index> remaining_pool(const Episode& episode, const SelectedSubset& taken);

// Query rows are one-hot labels of S and Q (meta-train) or S alone
// (meta-test); columns are the model's class probabilities for `pool`.
Kernel selection_kernel(const ParamVector& model, const Episode& episode,
                        std::span<const Index> pool, Phase phase);

// Per-class SMI selection over `pool` (unlabeled indices).
SelectedSubset smi_select(const ParamVector& model, const Episode& episode,
                          std::span<const Index> pool, int budget_per_class,
                          const SetFunctionKind& kind, const MaximizerKind& maximizer, Phase phase,
                          std::uint64_t seed, int step, Origin origin);

// Fresh b_in points for inner step `step`, excluding everything in `already`.
SelectedSubset inner_select(const ParamVector& model, const Episode& episode,
                            const SelectedSubset& already, const Budget& budget,
                            const SetFunctionKind& kind, const MaximizerKind& maximizer,
                            Phase phase, int step, std::uint64_t seed);

// b_out points from U minus the inner selection, using the adapted model.
SelectedSubset outer_select(const ParamVector& adapted, const Episode& episode,
                            const SelectedSubset& inner_selected, const Budget& budget,
                            const SetFunctionKind& kind, const MaximizerKind& maximizer,
                            std::uint64_t seed);

struct SelectionAccuracy {
  double label_match = 0.0;  // hypothesized label == hidden label; OOD counts as wrong
  double in_dist = 0.0;      // drawn from the task's own classes
  bool empty = false;
};

SelectionAccuracy selection_accuracy(const SelectedSubset& subset, const Episode& episode);

// CSV: pool_index,label,gain,step
void write_subset_csv(const SelectedSubset& subset, std::ostream& out);

}  // namespace platinum
