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

#include <algorithm>
#include <numeric>
#include <set>

#include "doctest.h"
#include "platinum/error.hpp"
#include "platinum/strategy.hpp"

using namespace platinum;

namespace {

SyntheticDataset fixture() {
  return split_labeled(gen_synthetic(13, 40, 32, 600, 0.3, ClassSplit{20, 8, 12}), 0.05, 14);
}

std::vector<Index> full_pool(const Episode& ep) {
  std::vector<Index> v(static_cast<std::size_t>(ep.unlabeled_size()));
  std::iota(v.begin(), v.end(), Index{0});
  return v;
}

// A network whose output bias makes it predict class 0 everywhere.
ParamVector skewed_model() {
  ParamVector p = init_params(1, NetShape{});
  p.bias(static_cast<int>(p.widths().size()) - 2)(0) = 8.0;
  return p;
}

double variance(const std::vector<int>& counts) {
  const double mean = std::accumulate(counts.begin(), counts.end(), 0.0) / counts.size();
  double v = 0.0;
  for (int c : counts) v += (c - mean) * (c - mean);
  return v / counts.size();
}

SelectedSubset run(const StrategyKind& s, const ParamVector& model, const Episode& ep, int budget,
                   std::uint64_t seed = 0) {
  return acquire(s, model, ep, full_pool(ep), budget, Phase::kMetaTrain, MaximizerKind::lazy(), seed,
                 1, Origin::kInner);
}

}  // namespace

TEST_CASE("strategy names") {
  for (const char* name : {"supervised", "pl", "random", "flmi", "gcmi"}) {
    CHECK(to_string(parse_strategy(name)) == name);
  }
  CHECK(parse_strategy("FLMI").smi.variant == SetFunction::kFacilityLocationMI);
  CHECK_THROWS_AS(parse_strategy("vat"), ConfigError);
  CHECK_THROWS_AS(StrategyKind::pseudo_label(1.0).validate(), ConfigError);
  CHECK_THROWS_AS(StrategyKind::pseudo_label(-0.1).validate(), ConfigError);
  CHECK_FALSE(StrategyKind::supervised().uses_unlabeled());
}

TEST_CASE("acquire") {
  const SyntheticDataset ds = fixture();
  const Episode ep = sample_episode(ds, Split::kTrain, EpisodeShape{}, 3);
  const ParamVector model = init_params(4, NetShape{});

  SUBCASE("supervised is always empty") {
    CHECK(run(StrategyKind::supervised(), model, ep, 25).empty());
    CHECK(run(StrategyKind::supervised(), model, ep, 50).empty());
  }

  SUBCASE("budget respected") {
    for (const auto& s : {StrategyKind::pseudo_label(), StrategyKind::random(),
                          StrategyKind::smi_with(SetFunctionKind::flmi()),
                          StrategyKind::smi_with(SetFunctionKind::gcmi())}) {
      for (int b : {5, 25, 50}) {
        const SelectedSubset sub = run(s, model, ep, b);
        CHECK(sub.size() == static_cast<std::size_t>(b));
        const std::vector<Index> idx = sub.indices();
        CHECK(std::set<Index>(idx.begin(), idx.end()).size() == idx.size());
      }
    }
  }

  SUBCASE("pseudo-label ordering and labels") {
    const SelectedSubset sub = run(StrategyKind::pseudo_label(), model, ep, 25);
    const Embeddings p = prob_embed(model, ep.unlabeled);
    std::set<Index> chosen;
    double lowest = 1.0;
    for (const auto& e : sub.entries) {
      chosen.insert(e.pool_index);
      Index arg = 0;
      const double conf = p.vectors.row(e.pool_index).maxCoeff(&arg);
      CHECK(e.label == arg);
      CHECK(e.gain == doctest::Approx(conf));
      lowest = std::min(lowest, conf);
    }
    for (Index u = 0; u < ep.unlabeled_size(); ++u) {
      if (!chosen.count(u)) CHECK(p.vectors.row(u).maxCoeff() <= lowest);
    }
  }

  SUBCASE("pseudo-label threshold") {
    const Embeddings p = prob_embed(model, ep.unlabeled);
    std::vector<double> conf;
    for (Index u = 0; u < ep.unlabeled_size(); ++u) conf.push_back(p.vectors.row(u).maxCoeff());
    std::sort(conf.rbegin(), conf.rend());
    const double th = conf[9];
    const SelectedSubset sub = run(StrategyKind::pseudo_label(th), model, ep, 25);
    CHECK(sub.size() <= 10);
    CHECK(sub.size() >= 1);
    for (const auto& e : sub.entries) CHECK(e.gain >= th);
  }

  SUBCASE("random labels by argmax and depends on seed") {
    const SelectedSubset a = run(StrategyKind::random(), model, ep, 25, 1);
    const SelectedSubset b = run(StrategyKind::random(), model, ep, 25, 2);
    const SelectedSubset c = run(StrategyKind::random(), model, ep, 25, 1);
    CHECK(a.indices() == c.indices());
    CHECK(a.indices() != b.indices());
    const Embeddings p = prob_embed(model, ep.unlabeled);
    for (const auto& e : a.entries) {
      Index arg = 0;
      p.vectors.row(e.pool_index).maxCoeff(&arg);
      CHECK(e.label == arg);
    }
  }

  SUBCASE("skewed model: pseudo-labels collapse, SMI stays balanced") {
    const ParamVector skewed = skewed_model();
    const SelectedSubset pl = run(StrategyKind::pseudo_label(), skewed, ep, 25);
    const std::vector<int> pl_counts = pl.class_counts(5);
    CHECK(pl_counts == std::vector<int>{25, 0, 0, 0, 0});
    for (const auto& kind : {SetFunctionKind::flmi(), SetFunctionKind::gcmi()}) {
      const SelectedSubset smi = run(StrategyKind::smi_with(kind), skewed, ep, 25);
      CHECK(smi.class_counts(5) == std::vector<int>{5, 5, 5, 5, 5});
      CHECK(variance(smi.class_counts(5)) == 0.0);
    }
    // All mass on one class is the largest variance a 25-point split can have.
    CHECK(variance(pl_counts) == doctest::Approx(100.0));
  }

  SUBCASE("smi budget must split evenly") {
    CHECK_THROWS_AS(run(StrategyKind::smi_with(SetFunctionKind::flmi()), model, ep, 24), ConfigError);
  }

  SUBCASE("empty pool") {
    const SelectedSubset sub = acquire(StrategyKind::pseudo_label(), model, ep, {}, 25,
                                       Phase::kMetaTrain, MaximizerKind::lazy(), 0, 1, Origin::kInner);
    CHECK(sub.empty());
    CHECK(sub.exhausted);
  }
}
