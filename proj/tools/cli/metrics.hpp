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
#include <span>
#include <string>
#include <vector>

namespace platinum::cli {

// One evaluated cell of an experiment.
struct MetricsRecord {
  std::string strategy;
  double rho = 0.0;
  int ood_classes = 0;
  bool outer_selection = true;
  double mean_acc = 0.0;
  double ci95 = 0.0;
  std::optional<double> selection_label_match;
  std::optional<double> selection_in_dist;
  double wall_time_s = 0.0;
  std::uint64_t seed = 0;
};

// Header plus one line per record; missing selection metrics are empty cells.
void write_metrics_csv(std::span<const MetricsRecord> records, std::ostream& out);
// One JSON object per line; missing selection metrics are null.
void write_metrics_jsonl(std::span<const MetricsRecord> records, std::ostream& out);
std::vector<MetricsRecord> read_metrics_jsonl(std::istream& in);

}  // namespace platinum::cli
