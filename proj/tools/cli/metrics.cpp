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

#include "metrics.hpp"

#include <istream>
#include <limits>
#include <ostream>

#include "json.hpp"
#include "platinum/error.hpp"

namespace platinum::cli {

namespace {

void cell(std::ostream& out, const std::optional<double>& v) {
  if (v) out << *v;
}

}  // namespace

void write_metrics_csv(std::span<const MetricsRecord> records, std::ostream& out) {
  out << "strategy,rho,ood_classes,outer_selection,mean_acc,ci95,selection_label_match,"
         "selection_in_dist,wall_time_s,seed\n";
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  for (const MetricsRecord& r : records) {
    out << r.strategy << ',' << r.rho << ',' << r.ood_classes << ',' << (r.outer_selection ? "true" : "false")
        << ',' << r.mean_acc << ',' << r.ci95 << ',';
    cell(out, r.selection_label_match);
    out << ',';
    cell(out, r.selection_in_dist);
    out << ',' << r.wall_time_s << ',' << r.seed << '\n';
  }
  out.precision(old);
}

void write_metrics_jsonl(std::span<const MetricsRecord> records, std::ostream& out) {
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  for (const MetricsRecord& r : records) {
    const nlohmann::json j = {
        {"strategy", r.strategy},
        {"rho", r.rho},
        {"ood_classes", r.ood_classes},
        {"outer_selection", r.outer_selection},
        {"mean_acc", r.mean_acc},
        {"ci95", r.ci95},
        {"selection_label_match", opt(r.selection_label_match)},
        {"selection_in_dist", opt(r.selection_in_dist)},
        {"wall_time_s", r.wall_time_s},
        {"seed", r.seed},
    };
    out << j.dump() << '\n';
  }
}

std::vector<MetricsRecord> read_metrics_jsonl(std::istream& in) {
  std::vector<MetricsRecord> out;
  std::string line;
  int line_no = 0;
  auto opt = [](const nlohmann::json& j, const char* key) -> std::optional<double> {
    if (j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      MetricsRecord r;
      r.strategy = j.at("strategy").get<std::string>();
      r.rho = j.at("rho").get<double>();
      r.ood_classes = j.at("ood_classes").get<int>();
      r.outer_selection = j.at("outer_selection").get<bool>();
      r.mean_acc = j.at("mean_acc").get<double>();
      r.ci95 = j.at("ci95").get<double>();
      r.selection_label_match = opt(j, "selection_label_match");
      r.selection_in_dist = opt(j, "selection_in_dist");
      r.wall_time_s = j.at("wall_time_s").get<double>();
      r.seed = j.at("seed").get<std::uint64_t>();
      out.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw DataError("metrics line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace platinum::cli
