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

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "metrics.hpp"

namespace platinum::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfigFailure = 2,
  kDataFailure = 3,
  kNumericFailure = 4,
};

// Writes <out>/dataset.csv.
std::filesystem::path cmd_generate(const ExperimentConfig& cfg);

struct TrainOutputs {
  std::filesystem::path checkpoint;
  std::filesystem::path history;
  TrainResult result;
};

// Trains on `data` (a dataset CSV) or on the generated dataset, writing
// checkpoint.txt, history.jsonl and train_summary.json.
TrainOutputs cmd_train(const ExperimentConfig& cfg, const std::optional<std::filesystem::path>& data,
                       std::ostream& log);

MetricsRecord evaluate_params(const ExperimentConfig& cfg, const ParamVector& theta,
                              const SyntheticDataset& dataset);

// Scores a checkpoint on the config's test episodes; writes metrics.csv and
// metrics.jsonl.
MetricsRecord cmd_evaluate(const ExperimentConfig& cfg, const std::filesystem::path& checkpoint,
                           const std::optional<std::filesystem::path>& data);

// Trains and evaluates every (ood, outer_selection, strategy) cell with the
// same seed; writes ablation.csv and ablation.jsonl.
std::vector<MetricsRecord> cmd_ablate(const ExperimentConfig& cfg,
                                      const std::optional<std::filesystem::path>& data,
                                      std::ostream& log);

struct SelectOptions {
  int budget_per_class = 2;
  SetFunctionKind function = SetFunctionKind::flmi();
  MaximizerKind maximizer = MaximizerKind::lazy();
  std::uint64_t seed = 0;
};

// Per-class selection on a kernel CSV; the class count is taken from the
// largest row class.
SelectedSubset cmd_select(const std::filesystem::path& kernel_csv, const SelectOptions& opts);

// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace platinum::cli
