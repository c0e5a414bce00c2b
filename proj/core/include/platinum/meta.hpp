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
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "platinum/episodes.hpp"
#include "platinum/maximize.hpp"
#include "platinum/net.hpp"
#include "platinum/select.hpp"
#include "platinum/strategy.hpp"

namespace platinum {

struct Schedules {
  int t_in = 5;        // inner steps during meta-training
  int t_in_test = 10;  // inner steps during meta-testing and validation
  int t_out = 60;      // epochs
  int t_warm = 10;     // epoch at which the outer unlabeled weight reaches 1

  void validate() const;
};

struct TrainConfig {
  double alpha = 0.5;  // inner learning rate
  double beta = 0.02;  // outer learning rate
  int batch_tasks = 1;
  Schedules schedules;
  Budget budget;
  StrategyKind strategy;
  MaximizerKind maximizer;
  bool outer_selection = true;
  std::uint64_t seed = 0;
  int iterations_per_epoch = 100;
  int n_val_episodes = 50;
  NetShape net;
  EpisodeShape episode;

  void validate() const;
};

// 0 for t < 2, else exp(-5 (1 - t / t_in)^2). Requires 1 <= t <= t_in.
double tau_in(int t, int t_in);
// exp(-5 (1 - j / t_warm)^2) for j <= t_warm, else 1; always 1 when t_warm = 0.
double tau_out(int j, int t_warm);

struct InnerStepLog {
  int step = 0;
  double tau = 0.0;
  LossBreakdown loss;
  std::size_t selected = 0;  // fresh points acquired this step
};

struct AdaptResult {
  ParamVector phi;
  SelectedSubset a_s;  // accumulated over all inner steps
  std::vector<InnerStepLog> log;
};

// Inner loop: phi <- theta, then for t = 1..T: acquire fresh points with
// the current phi, accumulate them, and take one SGD step on
// L_l(S) + tau_in(t) L_u(accumulated). T is t_in for meta-training and
// t_in_test for meta-testing.
AdaptResult adapt(const ParamVector& theta, const Episode& episode, const TrainConfig& cfg,
                  Phase phase, std::uint64_t seed);

struct TaskLog {
  ParamVector phi;
  SelectedSubset a_s;
  SelectedSubset a_q;
  LossBreakdown outer;
  std::optional<SelectionAccuracy> inner_accuracy;
  std::optional<SelectionAccuracy> outer_accuracy;
};

struct MetaStepResult {
  ParamVector theta;
  ParamVector mean_grad;  // mean over tasks of the outer gradient at phi_i
  double tau_out = 0.0;
  std::vector<TaskLog> tasks;
};

// First-order meta update: theta' = theta - beta * mean_i grad_phi
// [L_l(phi_i; Q_i) + tau_out(epoch) L_u(phi_i; A^q_i)].
MetaStepResult meta_step(const ParamVector& theta, std::span<const Episode> episodes, int epoch,
                         const TrainConfig& cfg, std::uint64_t seed);

struct EpochRecord {
  int epoch = 0;
  double outer_labeled = 0.0;
  double outer_unlabeled = 0.0;
  double outer_total = 0.0;
  double tau_out = 0.0;
  std::vector<double> tau_in;  // inner schedule, one value per step
  std::optional<double> inner_label_match;
  std::optional<double> inner_in_dist;
  std::optional<double> outer_label_match;
  std::optional<double> outer_in_dist;
  double val_acc = 0.0;
  double val_ci95 = 0.0;

  friend bool operator==(const EpochRecord&, const EpochRecord&) = default;
};

struct TrainResult {
  ParamVector theta;  // best-validation parameters
  std::vector<EpochRecord> history;
  int best_epoch = 0;  // 0 when no epoch ran
  double best_val_acc = 0.0;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

// Seeds used by meta_train; exposed so tests can replay its episode stream.
std::uint64_t train_episode_seed(std::uint64_t seed, int epoch, int iteration, int task);
std::uint64_t meta_step_seed(std::uint64_t seed, int epoch, int iteration);
ParamVector initial_params(const TrainConfig& cfg);

TrainResult meta_train(const TrainConfig& cfg, const SyntheticDataset& dataset,
                       const EpochCallback& on_epoch = {});

struct EvalResult {
  double mean_acc = 0.0;
  double ci95 = 0.0;  // 1.96 * sample std / sqrt(n)
  std::vector<double> accuracies;
  std::optional<double> selection_label_match;  // inner-loop subsets, meta-test
  std::optional<double> selection_in_dist;
};

double accuracy(const ParamVector& params, const LabeledBatch& batch);

// Adapts on S (and U via the strategy) per episode and scores argmax
// accuracy on Q.
EvalResult meta_test(const ParamVector& theta, std::span<const Episode> episodes,
                     const TrainConfig& cfg, std::uint64_t seed);

std::vector<Episode> sample_episodes(const SyntheticDataset& dataset, Split split,
                                     const EpisodeShape& shape, int count, std::uint64_t seed);

void write_history_jsonl(std::span<const EpochRecord> history, std::ostream& out);
std::vector<EpochRecord> read_history_jsonl(std::istream& in);

}  // namespace platinum
