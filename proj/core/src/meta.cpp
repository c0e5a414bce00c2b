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

#include "platinum/meta.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "json.hpp"
#include "platinum/error.hpp"
#include "platinum/parallel.hpp"
#include "platinum/random.hpp"

namespace platinum {

void Schedules::validate() const {
  if (t_in < 1 || t_in_test < 1) throw ConfigError("inner step counts must be at least 1");
  if (t_out < 0) throw ConfigError("epoch count must be non-negative");
  if (t_warm < 0 || t_warm > t_out) throw ConfigError("warm-start epoch must lie in [0, t_out]");
}

void TrainConfig::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError("alpha must be positive");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ConfigError("beta must be positive");
  if (batch_tasks < 1) throw ConfigError("batch_tasks must be at least 1");
  if (iterations_per_epoch < 1) throw ConfigError("iterations_per_epoch must be at least 1");
  if (n_val_episodes < 0) throw ConfigError("n_val_episodes must be non-negative");
  schedules.validate();
  budget.validate();
  strategy.validate();
  if (budget.way != episode.way) throw ConfigError("budget way differs from episode way");
  if (net.classes != episode.way) throw ConfigError("network outputs differ from episode way");
  if (maximizer.variant == Maximizer::kStochastic &&
      !(maximizer.epsilon > 0.0 && maximizer.epsilon < 1.0)) {
    throw ConfigError("stochastic greedy epsilon must lie in (0, 1)");
  }
}

double tau_in(int t, int t_in) {
  if (t_in < 1 || t < 1 || t > t_in) {
    throw LogicError("inner step " + std::to_string(t) + " outside [1, " + std::to_string(t_in) + "]");
  }
  if (t < 2) return 0.0;
  const double r = 1.0 - static_cast<double>(t) / t_in;
  return std::exp(-5.0 * r * r);
}

double tau_out(int j, int t_warm) {
  if (j < 1) throw LogicError("epoch index must be at least 1");
  if (t_warm <= 0 || j > t_warm) return 1.0;
  const double r = 1.0 - static_cast<double>(j) / t_warm;
  return std::exp(-5.0 * r * r);
}

namespace {

LabeledBatch pseudo_batch(const Episode& episode, const SelectedSubset& subset) {
  LabeledBatch b;
  b.x.resize(static_cast<Index>(subset.size()), episode.unlabeled.cols());
  b.y.reserve(subset.size());
  for (std::size_t k = 0; k < subset.size(); ++k) {
    b.x.row(static_cast<Index>(k)) = episode.unlabeled.row(subset.entries[k].pool_index);
    b.y.push_back(subset.entries[k].label);
  }
  return b;
}

void append_rows(LabeledBatch& batch, const LabeledBatch& more) {
  if (more.empty()) return;
  Matrix x(batch.size() + more.size(), more.x.cols());
  if (!batch.empty()) x.topRows(batch.size()) = batch.x;
  x.bottomRows(more.size()) = more.x;
  batch.x = std::move(x);
  batch.y.insert(batch.y.end(), more.y.begin(), more.y.end());
}

}  // namespace

AdaptResult adapt(const ParamVector& theta, const Episode& episode, const TrainConfig& cfg,
                  Phase phase, std::uint64_t seed) {
  const int steps = phase == Phase::kMetaTrain ? cfg.schedules.t_in : cfg.schedules.t_in_test;
  AdaptResult r{theta, {}, {}};
  r.a_s.origin = Origin::kInner;
  LabeledBatch pseudo;
  pseudo.x.resize(0, episode.support.x.cols());
  for (int t = 1; t <= steps; ++t) {
    InnerStepLog log;
    log.step = t;
    log.tau = tau_in(t, steps);
    if (cfg.strategy.uses_unlabeled()) {
      const std::vector<Index> pool = remaining_pool(episode, r.a_s);
      const SelectedSubset fresh =
          acquire(cfg.strategy, r.phi, episode, pool, cfg.budget.b_in, phase, cfg.maximizer,
                  derive_seed(seed, {static_cast<std::uint64_t>(t)}), t, Origin::kInner);
      log.selected = fresh.size();
      r.a_s.append(fresh);
      append_rows(pseudo, pseudo_batch(episode, fresh));
    }
    try {
      const LossAndGrad lg = loss_and_grad(r.phi, episode.support, pseudo, log.tau);
      log.loss = lg.loss;
      r.phi = sgd_step(r.phi, lg.grad, cfg.alpha);
    } catch (const NumericError& e) {
      throw NumericError("inner step " + std::to_string(t) + ": " + e.what());
    }
    if (!r.phi.all_finite()) throw NumericError("inner step " + std::to_string(t) + ": parameters diverged");
    r.log.push_back(log);
  }
  return r;
}

MetaStepResult meta_step(const ParamVector& theta, std::span<const Episode> episodes, int epoch,
                         const TrainConfig& cfg, std::uint64_t seed) {
  if (episodes.empty()) throw ConfigError("meta step needs at least one task");
  MetaStepResult out;
  out.tau_out = tau_out(epoch, cfg.schedules.t_warm);
  out.tasks.resize(episodes.size());
  std::vector<ParamVector> grads(episodes.size());

  parallel_for(episodes.size(), [&](std::size_t i) {
    const Episode& ep = episodes[i];
    TaskLog& task = out.tasks[i];
    AdaptResult adapted = adapt(theta, ep, cfg, Phase::kMetaTrain, derive_seed(seed, {i, 0}));
    task.phi = std::move(adapted.phi);
    task.a_s = std::move(adapted.a_s);
    task.a_q.origin = Origin::kOuter;
    if (cfg.strategy.uses_unlabeled()) {
      task.inner_accuracy = selection_accuracy(task.a_s, ep);
      if (cfg.outer_selection) {
        const std::vector<Index> pool = remaining_pool(ep, task.a_s);
        task.a_q = acquire(cfg.strategy, task.phi, ep, pool, cfg.budget.b_out, Phase::kMetaTrain,
                           cfg.maximizer, derive_seed(seed, {i, 1}), 0, Origin::kOuter);
        task.outer_accuracy = selection_accuracy(task.a_q, ep);
      }
    }
    try {
      LossAndGrad lg = loss_and_grad(task.phi, ep.query, pseudo_batch(ep, task.a_q), out.tau_out);
      task.outer = lg.loss;
      grads[i] = std::move(lg.grad);
    } catch (const NumericError& e) {
      throw NumericError(std::string("outer loss: ") + e.what());
    }
  });

  out.mean_grad = ParamVector(theta.widths());
  for (const ParamVector& g : grads) out.mean_grad.values() += g.values();
  out.mean_grad.values() /= static_cast<double>(episodes.size());
  out.theta = sgd_step(theta, out.mean_grad, cfg.beta);
  if (!out.theta.all_finite()) throw NumericError("meta parameters diverged");
  return out;
}

std::uint64_t train_episode_seed(std::uint64_t seed, int epoch, int iteration, int task) {
  return derive_seed(seed, {1, static_cast<std::uint64_t>(epoch),
                            static_cast<std::uint64_t>(iteration), static_cast<std::uint64_t>(task)});
}

std::uint64_t meta_step_seed(std::uint64_t seed, int epoch, int iteration) {
  return derive_seed(seed, {3, static_cast<std::uint64_t>(epoch), static_cast<std::uint64_t>(iteration)});
}

ParamVector initial_params(const TrainConfig& cfg) {
  return init_params(derive_seed(cfg.seed, {0}), cfg.net);
}

namespace {

// Running mean over the tasks that have a value.
struct MeanAcc {
  double sum = 0.0;
  std::size_t n = 0;

  void add(double v) {
    sum += v;
    ++n;
  }
  std::optional<double> get() const {
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
  }
};

}  // namespace

TrainResult meta_train(const TrainConfig& cfg, const SyntheticDataset& dataset,
                       const EpochCallback& on_epoch) {
  cfg.validate();
  if (cfg.net.input != dataset.dim) {
    throw ConfigError("network input " + std::to_string(cfg.net.input) + " differs from data dim " +
                      std::to_string(dataset.dim));
  }
  TrainResult result;
  result.theta = initial_params(cfg);
  ParamVector theta = result.theta;

  EpisodeShape val_shape = cfg.episode;
  const int val_classes = static_cast<int>(dataset.classes_in(Split::kVal).size());
  val_shape.ood_classes = std::max(0, std::min(val_shape.ood_classes, val_classes - val_shape.way));
  const std::vector<Episode> val_episodes =
      sample_episodes(dataset, Split::kVal, val_shape, cfg.n_val_episodes, derive_seed(cfg.seed, {2}));

  std::vector<double> tau_in_schedule;
  for (int t = 1; t <= cfg.schedules.t_in; ++t) tau_in_schedule.push_back(tau_in(t, cfg.schedules.t_in));

  result.best_val_acc = -std::numeric_limits<double>::infinity();
  std::vector<Episode> batch(static_cast<std::size_t>(cfg.batch_tasks));
  for (int epoch = 1; epoch <= cfg.schedules.t_out; ++epoch) {
    MeanAcc labeled, unlabeled, total, in_match, in_dist, out_match, out_dist;
    double epoch_tau_out = 0.0;
    for (int it = 0; it < cfg.iterations_per_epoch; ++it) {
      for (int b = 0; b < cfg.batch_tasks; ++b) {
        batch[static_cast<std::size_t>(b)] = sample_episode(
            dataset, Split::kTrain, cfg.episode, train_episode_seed(cfg.seed, epoch, it, b));
      }
      MetaStepResult step = meta_step(theta, batch, epoch, cfg, meta_step_seed(cfg.seed, epoch, it));
      theta = std::move(step.theta);
      epoch_tau_out = step.tau_out;
      for (const TaskLog& task : step.tasks) {
        labeled.add(task.outer.labeled);
        unlabeled.add(task.outer.unlabeled);
        total.add(task.outer.total);
        if (task.inner_accuracy && !task.inner_accuracy->empty) {
          in_match.add(task.inner_accuracy->label_match);
          in_dist.add(task.inner_accuracy->in_dist);
        }
        if (task.outer_accuracy && !task.outer_accuracy->empty) {
          out_match.add(task.outer_accuracy->label_match);
          out_dist.add(task.outer_accuracy->in_dist);
        }
      }
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.outer_labeled = *labeled.get();
    rec.outer_unlabeled = *unlabeled.get();
    rec.outer_total = *total.get();
    rec.tau_out = epoch_tau_out;
    rec.tau_in = tau_in_schedule;
    rec.inner_label_match = in_match.get();
    rec.inner_in_dist = in_dist.get();
    rec.outer_label_match = out_match.get();
    rec.outer_in_dist = out_dist.get();
    if (!val_episodes.empty()) {
      const EvalResult val = meta_test(theta, val_episodes, cfg, derive_seed(cfg.seed, {4}));
      rec.val_acc = val.mean_acc;
      rec.val_ci95 = val.ci95;
    }
    if (val_episodes.empty() || rec.val_acc > result.best_val_acc) {
      result.best_val_acc = rec.val_acc;
      result.best_epoch = epoch;
      result.theta = theta;
    }
    result.history.push_back(rec);
    if (on_epoch) on_epoch(rec);
  }
  if (result.best_epoch == 0) result.best_val_acc = 0.0;
  return result;
}

double accuracy(const ParamVector& params, const LabeledBatch& batch) {
  if (batch.empty()) return 0.0;
  const Matrix z = logits(params, batch.x);
  std::size_t correct = 0;
  for (Index i = 0; i < z.rows(); ++i) {
    Index arg = 0;
    z.row(i).maxCoeff(&arg);
    if (static_cast<ClassId>(arg) == batch.y[static_cast<std::size_t>(i)]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(z.rows());
}

EvalResult meta_test(const ParamVector& theta, std::span<const Episode> episodes,
                     const TrainConfig& cfg, std::uint64_t seed) {
  EvalResult out;
  if (episodes.empty()) return out;
  out.accuracies.resize(episodes.size());
  std::vector<std::optional<SelectionAccuracy>> sel(episodes.size());
  parallel_for(episodes.size(), [&](std::size_t k) {
    const AdaptResult r = adapt(theta, episodes[k], cfg, Phase::kMetaTest, derive_seed(seed, {k}));
    out.accuracies[k] = accuracy(r.phi, episodes[k].query);
    if (cfg.strategy.uses_unlabeled() && !r.a_s.empty()) sel[k] = selection_accuracy(r.a_s, episodes[k]);
  });

  const double n = static_cast<double>(episodes.size());
  double sum = 0.0;
  for (double a : out.accuracies) sum += a;
  out.mean_acc = sum / n;
  if (episodes.size() > 1) {
    double ss = 0.0;
    for (double a : out.accuracies) ss += (a - out.mean_acc) * (a - out.mean_acc);
    out.ci95 = 1.96 * std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  MeanAcc match, dist;
  for (const auto& s : sel) {
    if (!s) continue;
    match.add(s->label_match);
    dist.add(s->in_dist);
  }
  out.selection_label_match = match.get();
  out.selection_in_dist = dist.get();
  return out;
}

std::vector<Episode> sample_episodes(const SyntheticDataset& dataset, Split split,
                                     const EpisodeShape& shape, int count, std::uint64_t seed) {
  std::vector<Episode> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int k = 0; k < count; ++k) {
    out.push_back(sample_episode(dataset, split, shape, derive_seed(seed, {static_cast<std::uint64_t>(k)})));
  }
  return out;
}

namespace {

nlohmann::json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::optional<double> optional_value(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

}  // namespace

void write_history_jsonl(std::span<const EpochRecord> history, std::ostream& out) {
  for (const EpochRecord& r : history) {
    nlohmann::json j = {
        {"epoch", r.epoch},
        {"outer_labeled", r.outer_labeled},
        {"outer_unlabeled", r.outer_unlabeled},
        {"outer_total", r.outer_total},
        {"tau_out", r.tau_out},
        {"tau_in", r.tau_in},
        {"inner_label_match", optional_json(r.inner_label_match)},
        {"inner_in_dist", optional_json(r.inner_in_dist)},
        {"outer_label_match", optional_json(r.outer_label_match)},
        {"outer_in_dist", optional_json(r.outer_in_dist)},
        {"val_acc", r.val_acc},
        {"val_ci95", r.val_ci95},
    };
    out << j.dump() << '\n';
  }
}

std::vector<EpochRecord> read_history_jsonl(std::istream& in) {
  std::vector<EpochRecord> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      EpochRecord r;
      r.epoch = j.at("epoch").get<int>();
      r.outer_labeled = j.at("outer_labeled").get<double>();
      r.outer_unlabeled = j.at("outer_unlabeled").get<double>();
      r.outer_total = j.at("outer_total").get<double>();
      r.tau_out = j.at("tau_out").get<double>();
      r.tau_in = j.at("tau_in").get<std::vector<double>>();
      r.inner_label_match = optional_value(j, "inner_label_match");
      r.inner_in_dist = optional_value(j, "inner_in_dist");
      r.outer_label_match = optional_value(j, "outer_label_match");
      r.outer_in_dist = optional_value(j, "outer_in_dist");
      r.val_acc = j.at("val_acc").get<double>();
      r.val_ci95 = j.at("val_ci95").get<double>();
      out.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw DataError("history line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace platinum
