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

#include "platinum/select.hpp"

namespace platinum {

enum class Strategy {
  kSupervised,   // no unlabeled data
  kPseudoLabel,  // top-confidence points labeled by the model's argmax
  kRandom,       // uniform points labeled by the model's argmax
  kSmi,          // per-class SMI maximization
};

struct StrategyKind {
  Strategy variant = Strategy::kSmi;
  double confidence_threshold = 0.0;  // pseudo-label only, in [0, 1)
  SetFunctionKind smi = SetFunctionKind::flmi();

  static StrategyKind supervised() { return {Strategy::kSupervised}; }
  static StrategyKind pseudo_label(double threshold = 0.0) {
    return {Strategy::kPseudoLabel, threshold};
  }
  static StrategyKind random() { return {Strategy::kRandom}; }
  static StrategyKind smi_with(SetFunctionKind kind) { return {Strategy::kSmi, 0.0, kind}; }

  bool uses_unlabeled() const { return variant != Strategy::kSupervised; }
  void validate() const;
};

// "supervised", "pl", "random", "flmi" or "gcmi".
std::string to_string(const StrategyKind& strategy);
StrategyKind parse_strategy(const std::string& name);

// Picks at most total_budget points of `pool` (unlabeled indices) with
// hypothesized labels. Smi delegates to smi_select with total_budget / way
// per class and needs total_budget divisible by the task's way.
SelectedSubset acquire(const StrategyKind& strategy, const ParamVector& model,
                       const Episode& episode, std::span<const Index> pool, int total_budget,
                       Phase phase, const MaximizerKind& maximizer, std::uint64_t seed, int step,
                       Origin origin);

}  // namespace platinum
