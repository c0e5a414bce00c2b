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

#include "config.hpp"

#include <fstream>
#include <set>

#include "platinum/error.hpp"
#include "platinum/random.hpp"

namespace platinum::cli {

namespace {

using nlohmann::json;

// Walks one JSON object, remembering which keys were consumed so leftovers
// can be reported.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where("") + "must be an object");
  }

  template <typename T>
  void read(const char* key, T& into) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      into = j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(where(key) + "has the wrong type");
    }
  }

  bool has(const char* key) const { return j_.contains(key); }

  Section child(const char* key) {
    seen_.insert(key);
    return Section(j_.at(key), path_.empty() ? key : path_ + "." + key);
  }

  const json& raw(const char* key) {
    seen_.insert(key);
    return j_.at(key);
  }

  std::string where(const std::string& key) const {
    std::string full = path_;
    if (!key.empty()) full += (full.empty() ? "" : ".") + key;
    return "config key '" + (full.empty() ? std::string("<root>") : full) + "': ";
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(where(it.key()) + "unknown key");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

StrategyKind parse_strategy_json(const json& j, const std::string& where) {
  if (j.is_string()) return parse_strategy(j.get<std::string>());
  if (!j.is_object()) throw ConfigError(where + "strategy must be a name or an object");
  Section s(j, where);
  std::string name = "flmi";
  double threshold = 0.0;
  s.read("name", name);
  s.read("confidence_threshold", threshold);
  s.finish();
  StrategyKind k = parse_strategy(name);
  k.confidence_threshold = threshold;
  return k;
}

json strategy_json(const StrategyKind& k) {
  return {{"name", to_string(k)}, {"confidence_threshold", k.confidence_threshold}};
}

}  // namespace

void ExperimentConfig::sync() {
  train.seed = seed;
  train.net.input = dataset.dim;
  train.net.classes = train.episode.way;
  train.budget.way = train.episode.way;
}

void ExperimentConfig::validate() const {
  train.validate();
  if (dataset.dim != train.net.input) throw ConfigError("network input differs from dataset dim");
  if (dataset.classes < 1 || dataset.dim < 1 || dataset.per_class < 1) {
    throw ConfigError("dataset sizes must be positive");
  }
  if (!(dataset.spread > 0.0)) throw ConfigError("dataset spread must be positive");
  if (!(dataset.rho > 0.0 && dataset.rho <= 1.0)) throw ConfigError("rho must lie in (0, 1]");
  if (dataset.split && dataset.split->total() != dataset.classes) {
    throw ConfigError("class split does not add up to the class count");
  }
  if (n_test_episodes < 1) throw ConfigError("n_test_episodes must be at least 1");
  const EpisodeShape& e = train.episode;
  if (e.shot < 1 || e.query_per_class < 1 || e.unlabeled_per_class < 0 || e.ood_classes < 0) {
    throw ConfigError("episode sizes out of range");
  }
  const int labeled = labeled_per_class(dataset.rho, dataset.per_class);
  if (e.shot + e.query_per_class > labeled) {
    throw ConfigError("shot + query (" + std::to_string(e.shot + e.query_per_class) +
                      ") exceeds the " + std::to_string(labeled) + " labeled points per class");
  }
  if (e.unlabeled_per_class > dataset.per_class - labeled) {
    throw ConfigError("not enough unlabeled points per class for the episode pool");
  }
  const ClassSplit split = dataset.split.value_or(default_class_split(dataset.classes));
  if (split.train < e.way + e.ood_classes || split.test < e.way + e.ood_classes) {
    throw ConfigError("train and test splits need at least way + ood classes");
  }
  if (split.val < e.way && train.n_val_episodes > 0) throw ConfigError("validation split has fewer classes than way");
  for (int ood : ablate.ood) {
    if (ood < 0 || split.train < e.way + ood || split.test < e.way + ood) {
      throw ConfigError("ablation ood level " + std::to_string(ood) + " does not fit the class split");
    }
  }
  for (const StrategyKind& s : ablate.strategies) s.validate();
}

ExperimentConfig parse_config(const json& doc) {
  ExperimentConfig cfg;
  Section root(doc, "");
  root.read("seed", cfg.seed);

  if (root.has("dataset")) {
    Section d = root.child("dataset");
    d.read("classes", cfg.dataset.classes);
    d.read("dim", cfg.dataset.dim);
    d.read("per_class", cfg.dataset.per_class);
    d.read("spread", cfg.dataset.spread);
    d.read("rho", cfg.dataset.rho);
    if (d.has("split")) {
      if (d.raw("split").is_null()) {
        cfg.dataset.split.reset();
      } else {
        Section s = d.child("split");
        ClassSplit split;
        s.read("train", split.train);
        s.read("val", split.val);
        s.read("test", split.test);
        s.finish();
        cfg.dataset.split = split;
      }
    }
    d.finish();
  }

  EpisodeShape& ep = cfg.train.episode;
  if (root.has("episode")) {
    Section e = root.child("episode");
    e.read("way", ep.way);
    e.read("shot", ep.shot);
    e.read("query", ep.query_per_class);
    e.read("unlabeled", ep.unlabeled_per_class);
    e.read("ood", ep.ood_classes);
    e.finish();
  }

  if (root.has("net")) {
    Section n = root.child("net");
    n.read("hidden", cfg.train.net.hidden);
    n.finish();
  }

  if (root.has("train")) {
    Section t = root.child("train");
    t.read("alpha", cfg.train.alpha);
    t.read("beta", cfg.train.beta);
    t.read("batch_tasks", cfg.train.batch_tasks);
    t.read("t_in", cfg.train.schedules.t_in);
    t.read("t_in_test", cfg.train.schedules.t_in_test);
    t.read("t_out", cfg.train.schedules.t_out);
    t.read("t_warm", cfg.train.schedules.t_warm);
    t.read("iterations_per_epoch", cfg.train.iterations_per_epoch);
    t.read("n_val_episodes", cfg.train.n_val_episodes);
    t.read("outer_selection", cfg.train.outer_selection);
    t.finish();
  }

  if (root.has("budget")) {
    Section b = root.child("budget");
    b.read("b_in", cfg.train.budget.b_in);
    b.read("b_out", cfg.train.budget.b_out);
    b.finish();
  }

  if (root.has("strategy")) cfg.train.strategy = parse_strategy_json(root.raw("strategy"), "strategy");

  if (root.has("maximizer")) {
    Section m = root.child("maximizer");
    std::string name = to_string(cfg.train.maximizer.variant);
    double epsilon = cfg.train.maximizer.epsilon;
    m.read("name", name);
    m.read("epsilon", epsilon);
    m.finish();
    cfg.train.maximizer.variant = parse_maximizer(name);
    cfg.train.maximizer.epsilon = epsilon;
  }

  if (root.has("evaluation")) {
    Section e = root.child("evaluation");
    e.read("n_test_episodes", cfg.n_test_episodes);
    e.finish();
  }

  if (root.has("ablate")) {
    Section a = root.child("ablate");
    a.read("ood", cfg.ablate.ood);
    a.read("outer_selection", cfg.ablate.outer_selection);
    if (a.has("strategies")) {
      const json& list = a.raw("strategies");
      if (!list.is_array()) throw ConfigError(a.where("strategies") + "must be a list");
      cfg.ablate.strategies.clear();
      for (const json& s : list) cfg.ablate.strategies.push_back(parse_strategy_json(s, "ablate.strategies"));
    }
    a.finish();
  }

  if (root.has("output")) {
    Section o = root.child("output");
    std::string dir = cfg.output_dir.string();
    o.read("dir", dir);
    o.finish();
    cfg.output_dir = dir;
  }
  root.finish();

  cfg.sync();
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

json to_json(const ExperimentConfig& cfg) {
  const TrainConfig& t = cfg.train;
  json split = nullptr;
  if (cfg.dataset.split) {
    split = {{"train", cfg.dataset.split->train}, {"val", cfg.dataset.split->val}, {"test", cfg.dataset.split->test}};
  }
  json strategies = json::array();
  for (const auto& s : cfg.ablate.strategies) strategies.push_back(strategy_json(s));
  return {
      {"seed", cfg.seed},
      {"dataset",
       {{"classes", cfg.dataset.classes},
        {"dim", cfg.dataset.dim},
        {"per_class", cfg.dataset.per_class},
        {"spread", cfg.dataset.spread},
        {"rho", cfg.dataset.rho},
        {"split", split}}},
      {"episode",
       {{"way", t.episode.way},
        {"shot", t.episode.shot},
        {"query", t.episode.query_per_class},
        {"unlabeled", t.episode.unlabeled_per_class},
        {"ood", t.episode.ood_classes}}},
      {"net", {{"hidden", t.net.hidden}}},
      {"train",
       {{"alpha", t.alpha},
        {"beta", t.beta},
        {"batch_tasks", t.batch_tasks},
        {"t_in", t.schedules.t_in},
        {"t_in_test", t.schedules.t_in_test},
        {"t_out", t.schedules.t_out},
        {"t_warm", t.schedules.t_warm},
        {"iterations_per_epoch", t.iterations_per_epoch},
        {"n_val_episodes", t.n_val_episodes},
        {"outer_selection", t.outer_selection}}},
      {"budget", {{"b_in", t.budget.b_in}, {"b_out", t.budget.b_out}}},
      {"strategy", strategy_json(t.strategy)},
      {"maximizer", {{"name", to_string(t.maximizer.variant)}, {"epsilon", t.maximizer.epsilon}}},
      {"evaluation", {{"n_test_episodes", cfg.n_test_episodes}}},
      {"ablate", {{"ood", cfg.ablate.ood}, {"outer_selection", cfg.ablate.outer_selection}, {"strategies", strategies}}},
      {"output", {{"dir", cfg.output_dir.string()}}},
  };
}

SyntheticDataset make_dataset(const ExperimentConfig& cfg) {
  const DatasetConfig& d = cfg.dataset;
  return split_labeled(gen_synthetic(derive_seed(cfg.seed, {10}), d.classes, d.dim, d.per_class, d.spread, d.split),
                       d.rho, derive_seed(cfg.seed, {11}));
}

std::vector<Episode> test_episodes(const ExperimentConfig& cfg, const SyntheticDataset& dataset) {
  return sample_episodes(dataset, Split::kTest, cfg.train.episode, cfg.n_test_episodes,
                         derive_seed(cfg.seed, {20}));
}

std::uint64_t test_seed(const ExperimentConfig& cfg) { return derive_seed(cfg.seed, {21}); }

}  // namespace platinum::cli
