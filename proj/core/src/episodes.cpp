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

#include "platinum/episodes.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include "platinum/error.hpp"
#include "platinum/random.hpp"

namespace platinum {

std::string to_string(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
  }
  return "?";
}

Split parse_split(const std::string& name) {
  if (name == "train") return Split::kTrain;
  if (name == "val") return Split::kVal;
  if (name == "test") return Split::kTest;
  throw ConfigError("unknown split '" + name + "'");
}

ClassSplit default_class_split(int classes) {
  ClassSplit s;
  s.train = static_cast<int>(std::lround(0.64 * classes));
  s.val = static_cast<int>(std::lround(0.16 * classes));
  s.test = classes - s.train - s.val;
  return s;
}

std::vector<ClassId> SyntheticDataset::classes_in(Split split) const {
  std::vector<ClassId> out;
  for (ClassId c = 0; c < classes; ++c) {
    if (class_split[c] == split) out.push_back(c);
  }
  return out;
}

SyntheticDataset gen_synthetic(std::uint64_t seed, int classes, int dim, int per_class,
                               double spread, std::optional<ClassSplit> split) {
  if (classes <= 0 || dim <= 0 || per_class <= 0) {
    throw ConfigError("dataset needs positive classes, dim and per_class");
  }
  if (!(spread > 0.0)) throw ConfigError("spread must be positive");
  const ClassSplit counts = split.value_or(default_class_split(classes));
  if (counts.train < 0 || counts.val < 0 || counts.test < 0 || counts.total() != classes) {
    throw ConfigError("class split " + std::to_string(counts.train) + "/" +
                      std::to_string(counts.val) + "/" + std::to_string(counts.test) +
                      " does not cover " + std::to_string(classes) + " classes");
  }

  SyntheticDataset ds;
  ds.classes = classes;
  ds.dim = dim;
  ds.per_class = per_class;
  ds.spread = spread;
  ds.rho = 1.0;
  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  ds.prototypes.resize(classes, dim);
  for (int c = 0; c < classes; ++c) {
    for (int d = 0; d < dim; ++d) ds.prototypes(c, d) = gauss(rng);
    ds.prototypes.row(c).normalize();
  }
  const Index n = static_cast<Index>(classes) * per_class;
  ds.points.resize(n, dim);
  ds.labels.resize(static_cast<std::size_t>(n));
  for (int c = 0; c < classes; ++c) {
    for (int k = 0; k < per_class; ++k) {
      const Index p = static_cast<Index>(c) * per_class + k;
      ds.labels[p] = c;
      for (int d = 0; d < dim; ++d) ds.points(p, d) = ds.prototypes(c, d) + spread * gauss(rng);
    }
  }
  ds.class_split.resize(classes);
  for (int c = 0; c < classes; ++c) {
    ds.class_split[c] = c < counts.train               ? Split::kTrain
                        : c < counts.train + counts.val ? Split::kVal
                                                        : Split::kTest;
  }
  ds.labeled.assign(static_cast<std::size_t>(n), 1);
  return ds;
}

int labeled_per_class(double rho, int per_class) {
  // The slack keeps exact products such as 0.05 * 600 from rounding up.
  const int n = static_cast<int>(std::ceil(rho * per_class - 1e-9));
  return std::clamp(n, 1, per_class);
}

SyntheticDataset split_labeled(SyntheticDataset dataset, double rho, std::uint64_t seed) {
  if (!(rho > 0.0 && rho <= 1.0)) throw ConfigError("labeled ratio must lie in (0, 1]");
  const int n_labeled = labeled_per_class(rho, dataset.per_class);
  Rng rng(seed);
  std::fill(dataset.labeled.begin(), dataset.labeled.end(), 0);
  for (int c = 0; c < dataset.classes; ++c) {
    const auto picks = sample_without_replacement(static_cast<std::size_t>(dataset.per_class),
                                                  static_cast<std::size_t>(n_labeled), rng);
    for (std::size_t k : picks) {
      dataset.labeled[static_cast<std::size_t>(c) * dataset.per_class + k] = 1;
    }
  }
  dataset.rho = rho;
  return dataset;
}

namespace {

void shuffle(std::vector<Index>& v, Rng& rng) {
  const auto perm = sample_without_replacement(v.size(), v.size(), rng);
  std::vector<Index> out;
  out.reserve(v.size());
  for (std::size_t i : perm) out.push_back(v[i]);
  v = std::move(out);
}

LabeledBatch gather(const SyntheticDataset& ds, std::span<const Index> ids,
                    std::span<const ClassId> labels) {
  LabeledBatch b;
  b.x.resize(static_cast<Index>(ids.size()), ds.dim);
  for (std::size_t i = 0; i < ids.size(); ++i) b.x.row(static_cast<Index>(i)) = ds.points.row(ids[i]);
  b.y.assign(labels.begin(), labels.end());
  return b;
}

}  // namespace

Episode sample_episode(const SyntheticDataset& dataset, Split split, const EpisodeShape& shape,
                       std::uint64_t seed) {
  if (shape.way < 1 || shape.shot < 1 || shape.query_per_class < 0 ||
      shape.unlabeled_per_class < 0 || shape.ood_classes < 0) {
    throw ConfigError("invalid episode shape");
  }
  const std::vector<ClassId> pool = dataset.classes_in(split);
  const std::size_t needed = static_cast<std::size_t>(shape.way + shape.ood_classes);
  if (pool.size() < needed) {
    throw SamplingError(to_string(split) + " split has " + std::to_string(pool.size()) +
                        " classes, episode needs " + std::to_string(needed));
  }
  Rng rng(seed);
  const auto class_picks = sample_without_replacement(pool.size(), needed, rng);

  Episode ep;
  ep.shape = shape;
  std::vector<ClassId> support_y;
  std::vector<ClassId> query_y;
  struct PoolPoint {
    Index id;
    ClassId label;
    ClassId cls;
  };
  std::vector<PoolPoint> unlabeled;

  for (std::size_t k = 0; k < needed; ++k) {
    const ClassId cls = pool[class_picks[k]];
    const bool ood = k >= static_cast<std::size_t>(shape.way);
    std::vector<Index> lab;
    std::vector<Index> unl;
    for (int j = 0; j < dataset.per_class; ++j) {
      const Index p = static_cast<Index>(cls) * dataset.per_class + j;
      (dataset.labeled[p] ? lab : unl).push_back(p);
    }
    if (unl.size() < static_cast<std::size_t>(shape.unlabeled_per_class)) {
      throw SamplingError("class " + std::to_string(cls) + " has " + std::to_string(unl.size()) +
                          " unlabeled points, episode needs " +
                          std::to_string(shape.unlabeled_per_class));
    }
    shuffle(unl, rng);
    for (int j = 0; j < shape.unlabeled_per_class; ++j) {
      unlabeled.push_back({unl[j], ood ? ClassId{-1} : static_cast<ClassId>(k), cls});
    }
    if (ood) {
      ep.distractor_classes.push_back(cls);
      continue;
    }
    ep.classes.push_back(cls);
    const std::size_t need_lab = static_cast<std::size_t>(shape.shot + shape.query_per_class);
    if (lab.size() < need_lab) {
      throw SamplingError("class " + std::to_string(cls) + " has " + std::to_string(lab.size()) +
                          " labeled points, episode needs " + std::to_string(need_lab));
    }
    shuffle(lab, rng);
    for (int j = 0; j < shape.shot; ++j) {
      ep.support_ids.push_back(lab[j]);
      support_y.push_back(static_cast<ClassId>(k));
    }
    for (int j = 0; j < shape.query_per_class; ++j) {
      ep.query_ids.push_back(lab[shape.shot + j]);
      query_y.push_back(static_cast<ClassId>(k));
    }
  }

  const auto order = sample_without_replacement(unlabeled.size(), unlabeled.size(), rng);
  ep.unlabeled.resize(static_cast<Index>(unlabeled.size()), dataset.dim);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const PoolPoint& pt = unlabeled[order[i]];
    ep.unlabeled.row(static_cast<Index>(i)) = dataset.points.row(pt.id);
    ep.unlabeled_ids.push_back(pt.id);
    ep.unlabeled_label.push_back(pt.label);
    ep.unlabeled_class.push_back(pt.cls);
    ep.unlabeled_ood.push_back(pt.label < 0 ? 1 : 0);
  }
  ep.support = gather(dataset, ep.support_ids, support_y);
  ep.query = gather(dataset, ep.query_ids, query_y);
  return ep;
}

void write_dataset_csv(const SyntheticDataset& dataset, std::ostream& out) {
  out.precision(std::numeric_limits<double>::max_digits10);
  out << "point_id,class_id,split,labeled";
  for (int d = 0; d < dataset.dim; ++d) out << ",f" << d;
  out << '\n';
  for (Index p = 0; p < dataset.num_points(); ++p) {
    const ClassId c = dataset.labels[p];
    out << p << ',' << c << ',' << to_string(dataset.class_split[c]) << ','
        << (dataset.labeled[p] ? 1 : 0);
    for (int d = 0; d < dataset.dim; ++d) out << ',' << dataset.points(p, d);
    out << '\n';
  }
}

namespace {

std::string data_error_prefix(int line) { return "dataset csv line " + std::to_string(line) + ": "; }

}  // namespace

SyntheticDataset read_dataset_csv(std::istream& in) {
  std::string line;
  int line_no = 1;
  if (!std::getline(in, line)) throw DataError(data_error_prefix(1) + "empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::string expected = "point_id,class_id,split,labeled";
  if (line.rfind(expected, 0) != 0) throw DataError(data_error_prefix(1) + "unexpected header");
  const int dim = static_cast<int>(std::count(line.begin(), line.end(), ',')) - 3;
  if (dim <= 0) throw DataError(data_error_prefix(1) + "no feature columns");

  std::vector<ClassId> labels;
  std::vector<char> labeled;
  std::vector<double> feats;
  std::map<ClassId, Split> split_of;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string field;
    std::vector<std::string> f;
    while (std::getline(ss, field, ',')) f.push_back(field);
    if (f.size() != static_cast<std::size_t>(dim) + 4) {
      throw DataError(data_error_prefix(line_no) + "expected " + std::to_string(dim + 4) +
                      " fields, got " + std::to_string(f.size()));
    }
    try {
      std::size_t used = 0;
      const long long pid = std::stoll(f[0], &used);
      if (used != f[0].size() || pid != static_cast<long long>(labels.size())) {
        throw DataError(data_error_prefix(line_no) + "point ids must be 0..n-1 in order");
      }
      const ClassId c = std::stoi(f[1], &used);
      if (used != f[1].size() || c < 0) throw DataError(data_error_prefix(line_no) + "bad class id");
      if (f[2] != "train" && f[2] != "val" && f[2] != "test") {
        throw DataError(data_error_prefix(line_no) + "unknown split '" + f[2] + "'");
      }
      const Split s = parse_split(f[2]);
      auto [it, inserted] = split_of.emplace(c, s);
      if (!inserted && it->second != s) {
        throw DataError(data_error_prefix(line_no) + "class " + std::to_string(c) +
                        " appears in two splits");
      }
      if (f[3] != "0" && f[3] != "1") throw DataError(data_error_prefix(line_no) + "bad labeled flag");
      labels.push_back(c);
      labeled.push_back(f[3] == "1" ? 1 : 0);
      for (int d = 0; d < dim; ++d) {
        const double v = std::stod(f[4 + d], &used);
        if (used != f[4 + d].size() || !std::isfinite(v)) {
          throw DataError(data_error_prefix(line_no) + "bad feature '" + f[4 + d] + "'");
        }
        feats.push_back(v);
      }
    } catch (const DataError&) {
      throw;
    } catch (const std::exception&) {
      throw DataError(data_error_prefix(line_no) + "malformed number");
    }
  }
  if (labels.empty()) throw DataError(data_error_prefix(line_no) + "no points");

  SyntheticDataset ds;
  ds.dim = dim;
  ds.classes = split_of.rbegin()->first + 1;
  if (static_cast<int>(split_of.size()) != ds.classes) throw DataError("dataset csv: class ids not contiguous");
  if (labels.size() % static_cast<std::size_t>(ds.classes) != 0) {
    throw DataError("dataset csv: classes have unequal sizes");
  }
  ds.per_class = static_cast<int>(labels.size() / static_cast<std::size_t>(ds.classes));
  for (std::size_t p = 0; p < labels.size(); ++p) {
    if (labels[p] != static_cast<ClassId>(p / static_cast<std::size_t>(ds.per_class))) {
      throw DataError(data_error_prefix(static_cast<int>(p) + 2) + "points must be grouped by class");
    }
  }
  ds.points = Eigen::Map<const Matrix>(feats.data(), static_cast<Index>(labels.size()), dim);
  ds.labels = std::move(labels);
  ds.labeled = std::move(labeled);
  for (const auto& [c, s] : split_of) ds.class_split.push_back(s);
  const auto n_lab = std::count(ds.labeled.begin(), ds.labeled.begin() + ds.per_class, 1);
  ds.rho = static_cast<double>(n_lab) / ds.per_class;
  return ds;
}

}  // namespace platinum
