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

#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "platinum/error.hpp"

namespace platinum::cli {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

SyntheticDataset load_dataset(const ExperimentConfig& cfg, const std::optional<fs::path>& data) {
  if (!data) return make_dataset(cfg);
  std::ifstream in = open_in(*data);
  SyntheticDataset ds = read_dataset_csv(in);
  if (ds.dim != cfg.train.net.input) {
    throw ConfigError("dataset " + data->string() + " has dim " + std::to_string(ds.dim) +
                      ", config expects " + std::to_string(cfg.train.net.input));
  }
  return ds;
}

void write_config_echo(const ExperimentConfig& cfg) {
  std::ofstream out = open_out(cfg.output_dir / "config.json");
  out << to_json(cfg).dump(2) << '\n';
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void write_records(const fs::path& dir, const std::string& stem, std::span<const MetricsRecord> records) {
  std::ofstream csv = open_out(dir / (stem + ".csv"));
  write_metrics_csv(records, csv);
  std::ofstream jsonl = open_out(dir / (stem + ".jsonl"));
  write_metrics_jsonl(records, jsonl);
}

}  // namespace

fs::path cmd_generate(const ExperimentConfig& cfg) {
  const fs::path path = cfg.output_dir / "dataset.csv";
  std::ofstream out = open_out(path);
  write_dataset_csv(make_dataset(cfg), out);
  return path;
}

TrainOutputs cmd_train(const ExperimentConfig& cfg, const std::optional<fs::path>& data, std::ostream& log) {
  const SyntheticDataset ds = load_dataset(cfg, data);
  write_config_echo(cfg);
  TrainOutputs out;
  out.history = cfg.output_dir / "history.jsonl";
  out.checkpoint = cfg.output_dir / "checkpoint.txt";
  std::ofstream history = open_out(out.history);

  const auto start = std::chrono::steady_clock::now();
  out.result = meta_train(cfg.train, ds, [&](const EpochRecord& rec) {
    write_history_jsonl(std::span(&rec, 1), history);
    history.flush();
    log << "epoch " << rec.epoch << " outer_loss " << rec.outer_total << " val_acc " << rec.val_acc << '\n';
  });
  const double wall = seconds_since(start);

  std::ofstream ckpt = open_out(out.checkpoint);
  save_checkpoint(out.result.theta, ckpt);
  std::ofstream summary = open_out(cfg.output_dir / "train_summary.json");
  summary << nlohmann::json{{"strategy", to_string(cfg.train.strategy)},
                            {"epochs", cfg.train.schedules.t_out},
                            {"best_epoch", out.result.best_epoch},
                            {"best_val_acc", out.result.best_val_acc},
                            {"wall_time_s", wall}}
                 .dump(2)
          << '\n';
  return out;
}

MetricsRecord evaluate_params(const ExperimentConfig& cfg, const ParamVector& theta,
                              const SyntheticDataset& dataset) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<Episode> episodes = test_episodes(cfg, dataset);
  const EvalResult r = meta_test(theta, episodes, cfg.train, test_seed(cfg));
  MetricsRecord m;
  m.strategy = to_string(cfg.train.strategy);
  m.rho = dataset.rho;
  m.ood_classes = cfg.train.episode.ood_classes;
  m.outer_selection = cfg.train.outer_selection;
  m.mean_acc = r.mean_acc;
  m.ci95 = r.ci95;
  m.selection_label_match = r.selection_label_match;
  m.selection_in_dist = r.selection_in_dist;
  m.seed = cfg.seed;
  m.wall_time_s = seconds_since(start);
  return m;
}

MetricsRecord cmd_evaluate(const ExperimentConfig& cfg, const fs::path& checkpoint,
                           const std::optional<fs::path>& data) {
  std::ifstream in = open_in(checkpoint);
  const ParamVector theta = load_checkpoint(in);
  if (theta.widths() != cfg.train.net.widths()) {
    throw ConfigError("checkpoint " + checkpoint.string() + " does not match the configured network");
  }
  const MetricsRecord m = evaluate_params(cfg, theta, load_dataset(cfg, data));
  write_records(cfg.output_dir, "metrics", std::span(&m, 1));
  return m;
}

std::vector<MetricsRecord> cmd_ablate(const ExperimentConfig& cfg, const std::optional<fs::path>& data,
                                      std::ostream& log) {
  const SyntheticDataset ds = load_dataset(cfg, data);
  write_config_echo(cfg);
  std::vector<MetricsRecord> records;
  for (int ood : cfg.ablate.ood) {
    for (bool outer : cfg.ablate.outer_selection) {
      for (const StrategyKind& strategy : cfg.ablate.strategies) {
        ExperimentConfig cell = cfg;
        cell.train.episode.ood_classes = ood;
        cell.train.outer_selection = outer;
        cell.train.strategy = strategy;
        cell.validate();
        const auto start = std::chrono::steady_clock::now();
        const TrainResult trained = meta_train(cell.train, ds);
        MetricsRecord m = evaluate_params(cell, trained.theta, ds);
        m.wall_time_s = seconds_since(start);
        log << m.strategy << " ood=" << ood << " outer=" << (outer ? "on" : "off") << " acc " << m.mean_acc
            << '\n';
        records.push_back(std::move(m));
      }
    }
  }
  write_records(cfg.output_dir, "ablation", records);
  return records;
}

SelectedSubset cmd_select(const fs::path& kernel_csv, const SelectOptions& opts) {
  std::ifstream in = open_in(kernel_csv);
  const Kernel k = read_kernel_csv(in);
  if (k.rows() == 0) throw DataError(kernel_csv.string() + ": kernel has no rows");
  const auto rc = k.row_class();
  const int classes = *std::max_element(rc.begin(), rc.end()) + 1;
  std::vector<Index> pool(static_cast<std::size_t>(k.cols()));
  for (Index j = 0; j < k.cols(); ++j) pool[static_cast<std::size_t>(j)] = j;
  return per_class_select(k, pool, opts.budget_per_class, classes, opts.function, opts.maximizer, opts.seed);
}

namespace {

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::kConfig:
      return kConfigFailure;
    case ErrorKind::kData:
    case ErrorKind::kInput:
    case ErrorKind::kSampling:
    case ErrorKind::kSize:
      return kDataFailure;
    case ErrorKind::kNumeric:
      return kNumericFailure;
    case ErrorKind::kLogic:
      break;
  }
  return kFailure;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Semi-supervised meta-learning with submodular selection on synthetic few-shot data"};
  app.require_subcommand(1);

  std::string config_path, out_dir, data_path, checkpoint_path;
  std::optional<std::uint64_t> seed;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_path, "JSON experiment config (defaults when omitted)");
    sub->add_option("-o,--out", out_dir, "output directory (overrides output.dir)");
    sub->add_option("-s,--seed", seed, "master seed (overrides seed)");
  };
  CLI::App* generate = app.add_subcommand("generate", "write the synthetic dataset as CSV");
  add_common(generate);
  CLI::App* train = app.add_subcommand("train", "meta-train and save the best-validation checkpoint");
  add_common(train);
  train->add_option("-d,--data", data_path, "dataset CSV (generated from the config when omitted)");
  CLI::App* evaluate = app.add_subcommand("evaluate", "meta-test a checkpoint on test-split episodes");
  add_common(evaluate);
  evaluate->add_option("-d,--data", data_path, "dataset CSV");
  evaluate->add_option("-k,--checkpoint", checkpoint_path, "checkpoint (default <out>/checkpoint.txt)");
  CLI::App* ablate = app.add_subcommand("ablate", "train and evaluate the ood x outer-selection x strategy grid");
  add_common(ablate);
  ablate->add_option("-d,--data", data_path, "dataset CSV");

  CLI::App* select = app.add_subcommand("select", "per-class selection on a kernel CSV");
  std::string kernel_path, select_out, function = "flmi", maximizer = "lazy";
  SelectOptions sel;
  select->add_option("-k,--kernel", kernel_path, "kernel CSV")->required();
  select->add_option("-b,--budget", sel.budget_per_class, "budget per class");
  select->add_option("-f,--function", function, "flmi or gcmi");
  select->add_option("-m,--maximizer", maximizer, "naive, lazy or stochastic");
  select->add_option("-e,--epsilon", sel.maximizer.epsilon, "stochastic greedy epsilon");
  select->add_option("-s,--seed", sel.seed, "seed for stochastic greedy");
  select->add_option("-o,--out", select_out, "output CSV (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigFailure;
  }

  try {
    if (select->parsed()) {
      sel.function.variant = parse_set_function(function);
      sel.maximizer.variant = parse_maximizer(maximizer);
      if (sel.function.variant != SetFunction::kFacilityLocationMI &&
          sel.function.variant != SetFunction::kGraphCutMI) {
        throw ConfigError("select needs flmi or gcmi");
      }
      const SelectedSubset subset = cmd_select(kernel_path, sel);
      if (select_out.empty()) {
        write_subset_csv(subset, out);
      } else {
        std::ofstream f = open_out(select_out);
        write_subset_csv(subset, f);
      }
      if (subset.exhausted) err << "warning: pool exhausted before the budget was met\n";
      return kOk;
    }

    ExperimentConfig cfg = config_path.empty() ? parse_config(nlohmann::json::object()) : load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    cfg.sync();
    cfg.validate();
    const std::optional<fs::path> data = data_path.empty() ? std::nullopt : std::optional<fs::path>(data_path);

    if (generate->parsed()) {
      out << cmd_generate(cfg).string() << '\n';
    } else if (train->parsed()) {
      const TrainOutputs t = cmd_train(cfg, data, err);
      out << "best_epoch " << t.result.best_epoch << " best_val_acc " << t.result.best_val_acc << '\n'
          << t.checkpoint.string() << '\n';
    } else if (evaluate->parsed()) {
      const fs::path ckpt = checkpoint_path.empty() ? cfg.output_dir / "checkpoint.txt" : fs::path(checkpoint_path);
      const MetricsRecord m = cmd_evaluate(cfg, ckpt, data);
      out << m.strategy << " mean_acc " << m.mean_acc << " ci95 " << m.ci95 << '\n';
    } else if (ablate->parsed()) {
      const std::vector<MetricsRecord> records = cmd_ablate(cfg, data, err);
      write_metrics_csv(records, out);
    }
    return kOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace platinum::cli
