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

#include <benchmark/benchmark.h>

#include "platinum/meta.hpp"

namespace {

using namespace platinum;

const SyntheticDataset& dataset() {
  static const SyntheticDataset ds =
      split_labeled(gen_synthetic(1, 44, 32, 600, 0.3, ClassSplit{20, 12, 12}), 0.05, 2);
  return ds;
}

// One meta-training task (inner loop, outer selection, outer gradient) per
// iteration, so times compare directly across strategies.
void run_task(benchmark::State& state, StrategyKind strategy) {
  TrainConfig cfg;
  cfg.strategy = strategy;
  cfg.episode.ood_classes = static_cast<int>(state.range(0));
  const ParamVector theta = initial_params(cfg);
  std::vector<Episode> episodes;
  for (int k = 0; k < 16; ++k) episodes.push_back(sample_episode(dataset(), Split::kTrain, cfg.episode, k));
  std::size_t i = 0;
  for (auto _ : state) {
    const MetaStepResult r = meta_step(theta, std::span(&episodes[i++ % episodes.size()], 1), 5, cfg, i);
    benchmark::DoNotOptimize(r.theta.values().data());
  }
}

void BM_TaskSupervised(benchmark::State& state) { run_task(state, StrategyKind::supervised()); }
void BM_TaskPseudoLabel(benchmark::State& state) { run_task(state, StrategyKind::pseudo_label()); }
void BM_TaskFlmi(benchmark::State& state) { run_task(state, StrategyKind::smi_with(SetFunctionKind::flmi())); }
void BM_TaskGcmi(benchmark::State& state) { run_task(state, StrategyKind::smi_with(SetFunctionKind::gcmi())); }

BENCHMARK(BM_TaskSupervised)->Arg(0);
BENCHMARK(BM_TaskPseudoLabel)->Arg(0);
BENCHMARK(BM_TaskFlmi)->Arg(0)->Arg(5);
BENCHMARK(BM_TaskGcmi)->Arg(0)->Arg(5);

}  // namespace
