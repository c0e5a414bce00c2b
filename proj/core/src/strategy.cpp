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

#include "platinum/strategy.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "platinum/error.hpp"
#include "platinum/random.hpp"

namespace platinum {

void StrategyKind::validate() const {
  if (variant == Strategy::kPseudoLabel &&
      !(confidence_threshold >= 0.0 && confidence_threshold < 1.0)) {
    throw ConfigError("pseudo-label confidence threshold must lie in [0, 1)");
  }
  if (variant == Strategy::kSmi && smi.variant != SetFunction::kFacilityLocationMI &&
      smi.variant != SetFunction::kGraphCutMI) {
    throw ConfigError("SMI strategy needs flmi or gcmi");
  }
}

std::string to_string(const StrategyKind& strategy) {
  switch (strategy.variant) {
    case Strategy::kSupervised: return "supervised";
    case Strategy::kPseudoLabel: return "pl";
    case Strategy::kRandom: return "random";
    case Strategy::kSmi: return to_string(strategy.smi.variant);
  }
  return "?";
}

StrategyKind parse_strategy(const std::string& raw) {
  std::string name = raw;
  std::transform(name.begin(), name.end(), name.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (name == "supervised") return StrategyKind::supervised();
  if (name == "pl") return StrategyKind::pseudo_label();
  if (name == "random") return StrategyKind::random();
  if (name == "flmi") return StrategyKind::smi_with(SetFunctionKind::flmi());
  if (name == "gcmi") return StrategyKind::smi_with(SetFunctionKind::gcmi());
  throw ConfigError("unknown strategy '" + raw + "'");
}

namespace {

struct Scored {
  Index u;
  ClassId label;
  double confidence;
};

std::vector<Scored> score_pool(const ParamVector& model, const Episode& episode,
                               std::span<const Index> pool) {
  Matrix points(static_cast<Index>(pool.size()), episode.unlabeled.cols());
  for (std::size_t k = 0; k < pool.size(); ++k) points.row(static_cast<Index>(k)) = episode.unlabeled.row(pool[k]);
  const Matrix probs = forward_batch(model, points);
  std::vector<Scored> out;
  out.reserve(pool.size());
  for (std::size_t k = 0; k < pool.size(); ++k) {
    Index arg = 0;
    const double conf = probs.row(static_cast<Index>(k)).maxCoeff(&arg);
    out.push_back({pool[k], static_cast<ClassId>(arg), conf});
  }
  return out;
}

}  // namespace

SelectedSubset acquire(const StrategyKind& strategy, const ParamVector& model,
                       const Episode& episode, std::span<const Index> pool, int total_budget,
                       Phase phase, const MaximizerKind& maximizer, std::uint64_t seed, int step,
                       Origin origin) {
  strategy.validate();
  if (total_budget < 0) throw ConfigError("negative selection budget");
  SelectedSubset out;
  out.origin = origin;
  const auto budget = static_cast<std::size_t>(total_budget);
  switch (strategy.variant) {
    case Strategy::kSupervised:
      return out;
    case Strategy::kSmi: {
      if (total_budget % episode.way() != 0) {
        throw ConfigError("budget " + std::to_string(total_budget) + " not divisible by " +
                          std::to_string(episode.way()) + " classes");
      }
      return smi_select(model, episode, pool, total_budget / episode.way(), strategy.smi,
                        maximizer, phase, seed, step, origin);
    }
    case Strategy::kPseudoLabel: {
      if (pool.empty()) break;
      std::vector<Scored> scored = score_pool(model, episode, pool);
      std::stable_sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
        if (a.confidence != b.confidence) return a.confidence > b.confidence;
        return a.u < b.u;
      });
      for (const Scored& s : scored) {
        if (out.size() == budget || s.confidence < strategy.confidence_threshold) break;
        out.entries.push_back({s.u, s.label, s.confidence, step});
      }
      break;
    }
    case Strategy::kRandom: {
      if (pool.empty()) break;
      const std::vector<Scored> scored = score_pool(model, episode, pool);
      Rng rng(seed);
      for (std::size_t k : sample_without_replacement(scored.size(), budget, rng)) {
        out.entries.push_back({scored[k].u, scored[k].label, scored[k].confidence, step});
      }
      break;
    }
  }
  out.exhausted = out.size() < budget && pool.size() < budget;
  return out;
}

}  // namespace platinum
