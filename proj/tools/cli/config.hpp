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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "platinum/episodes.hpp"
#include "platinum/meta.hpp"

namespace platinum::cli {

struct DatasetConfig {
  int classes = 44;
  int dim = 32;
  int per_class = 600;
  double spread = 0.3;
  double rho = 0.05;
  std::optional<ClassSplit> split = ClassSplit{20, 12, 12};
};

struct AblateConfig {
  std::vector<int> ood = {0, 3, 5, 7};
  std::vector<bool> outer_selection = {true, false};
  std::vector<StrategyKind> strategies = {StrategyKind::smi_with(SetFunctionKind::flmi()),
                                          StrategyKind::smi_with(SetFunctionKind::gcmi()),
                                          StrategyKind::pseudo_label()};
};

// One JSON document describes a whole run. Network input width, class
// count, budget way and the training seed follow from the other fields.
struct ExperimentConfig {
  std::uint64_t seed = 0;
  DatasetConfig dataset;
  TrainConfig train;
  int n_test_episodes = 600;
  AblateConfig ablate;
  std::filesystem::path output_dir = "out";

  // Copies seed, way and data width into the nested training config.
  void sync();
  void validate() const;
};

// Throws ConfigError naming the offending key; unknown keys are rejected.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& cfg);

// The dataset a config describes, generated from its seed.
SyntheticDataset make_dataset(const ExperimentConfig& cfg);
std::vector<Episode> test_episodes(const ExperimentConfig& cfg, const SyntheticDataset& dataset);
std::uint64_t test_seed(const ExperimentConfig& cfg);

}  // namespace platinum::cli
