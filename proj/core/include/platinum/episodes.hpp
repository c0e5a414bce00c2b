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
#include <optional>
#include <string>
#include <vector>

#include "platinum/net.hpp"
#include "platinum/types.hpp"

namespace platinum {

enum class Split { kTrain, kVal, kTest };

std::string to_string(Split split);
Split parse_split(const std::string& name);

// Number of classes assigned to each split.
struct ClassSplit {
  int train = 0;
  int val = 0;
  int test = 0;

  int total() const { return train + val + test; }
};

// 64/16/20 percent of the classes, rounded, with the remainder going to test.
ClassSplit default_class_split(int classes);

// Gaussian clouds around prototypes on the unit hypersphere. Points are
// stored class-major: point id p belongs to class p / per_class. Classes
// are assigned to splits in order (train first, then val, then test).
struct SyntheticDataset {
  int classes = 0;
  int dim = 0;
  int per_class = 0;
  double spread = 0.0;
  double rho = 1.0;
  Matrix prototypes;  // classes x dim; empty when loaded from CSV
  Matrix points;      // (classes * per_class) x dim
  std::vector<ClassId> labels;
  std::vector<Split> class_split;  // per class
  std::vector<char> labeled;       // per point

  Index num_points() const { return points.rows(); }
  std::vector<ClassId> classes_in(Split split) const;
};

SyntheticDataset gen_synthetic(std::uint64_t seed, int classes, int dim, int per_class,
                               double spread, std::optional<ClassSplit> split = std::nullopt);

// Marks max(1, ceil(rho * per_class)) points of every class as labeled.
SyntheticDataset split_labeled(SyntheticDataset dataset, double rho, std::uint64_t seed);

// Labeled points per class after split_labeled.
int labeled_per_class(double rho, int per_class);

struct EpisodeShape {
  int way = 5;
  int shot = 1;
  int query_per_class = 15;
  int unlabeled_per_class = 50;
  int ood_classes = 0;

  Index unlabeled_size() const {
    return static_cast<Index>(unlabeled_per_class) * (way + ood_classes);
  }
};

// One few-shot task. Episode labels 0..way-1 index `classes`. The
// unlabeled pool keeps its hidden labels (-1 for distractors) for
// selection metrics only.
struct Episode {
  EpisodeShape shape;
  std::vector<ClassId> classes;      // dataset class per episode label
  std::vector<ClassId> distractor_classes;  // dataset classes of OOD points
  LabeledBatch support;
  LabeledBatch query;
  Matrix unlabeled;
  std::vector<ClassId> unlabeled_label;  // episode label, -1 when OOD
  std::vector<ClassId> unlabeled_class;  // dataset class
  std::vector<char> unlabeled_ood;
  std::vector<Index> support_ids;
  std::vector<Index> query_ids;
  std::vector<Index> unlabeled_ids;

  int way() const { return shape.way; }
  Index unlabeled_size() const { return unlabeled.rows(); }
};

Episode sample_episode(const SyntheticDataset& dataset, Split split, const EpisodeShape& shape,
                       std::uint64_t seed);

// CSV: point_id,class_id,split,labeled,f0,...,f{dim-1}
void write_dataset_csv(const SyntheticDataset& dataset, std::ostream& out);
SyntheticDataset read_dataset_csv(std::istream& in);

}  // namespace platinum
