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

#include "platinum/smi.hpp"

#include <algorithm>
#include <cctype>

#include "platinum/error.hpp"

namespace platinum {

namespace {

constexpr double kSymmetryTol = 1e-9;

void check_columns(std::span<const Index> a, const Kernel& kernel) {
  std::vector<char> seen(static_cast<std::size_t>(kernel.cols()), 0);
  for (Index j : a) {
    if (j < 0 || j >= kernel.cols()) {
      throw InputError("set element " + std::to_string(j) + " outside kernel columns [0, " +
                       std::to_string(kernel.cols()) + ")");
    }
    if (seen[static_cast<std::size_t>(j)]) {
      throw InputError("set element " + std::to_string(j) + " repeated");
    }
    seen[static_cast<std::size_t>(j)] = 1;
  }
}

void check_square(const Kernel& kernel) {
  if (!kernel.is_square()) {
    throw InputError("square kernel required, got " + std::to_string(kernel.rows()) + "x" +
                     std::to_string(kernel.cols()));
  }
}

}  // namespace

std::string to_string(SetFunction f) {
  switch (f) {
    case SetFunction::kFacilityLocation: return "fl";
    case SetFunction::kGraphCut: return "gc";
    case SetFunction::kFacilityLocationMI: return "flmi";
    case SetFunction::kGraphCutMI: return "gcmi";
  }
  return "?";
}

SetFunction parse_set_function(const std::string& name) {
  std::string lower = name;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "fl") return SetFunction::kFacilityLocation;
  if (lower == "gc") return SetFunction::kGraphCut;
  if (lower == "flmi") return SetFunction::kFacilityLocationMI;
  if (lower == "gcmi") return SetFunction::kGraphCutMI;
  throw ConfigError("unknown set function '" + name + "'");
}

double flmi_eval(std::span<const Index> a, const Kernel& kernel) {
  check_columns(a, kernel);
  if (a.empty()) return 0.0;
  double query_cover = 0.0;
  for (Index i = 0; i < kernel.rows(); ++i) {
    double best = 0.0;
    for (Index j : a) best = std::max(best, kernel(i, j));
    query_cover += best;
  }
  double set_cover = 0.0;
  for (Index j : a) {
    double best = 0.0;
    for (Index i = 0; i < kernel.rows(); ++i) best = std::max(best, kernel(i, j));
    set_cover += best;
  }
  return query_cover + set_cover;
}

double gcmi_eval(std::span<const Index> a, const Kernel& kernel) {
  check_columns(a, kernel);
  double sum = 0.0;
  for (Index j : a) {
    for (Index i = 0; i < kernel.rows(); ++i) sum += kernel(i, j);
  }
  return 2.0 * sum;
}

double fl_eval(std::span<const Index> a, const Kernel& square_kernel) {
  check_square(square_kernel);
  check_columns(a, square_kernel);
  double sum = 0.0;
  for (Index i = 0; i < square_kernel.rows(); ++i) {
    double best = 0.0;
    for (Index j : a) best = std::max(best, square_kernel(i, j));
    sum += best;
  }
  return sum;
}

double gc_eval(std::span<const Index> a, const Kernel& square_kernel, double lambda) {
  check_square(square_kernel);
  if (!square_kernel.is_symmetric(kSymmetryTol)) throw InputError("graph cut needs a symmetric kernel");
  if (!(lambda > 0.0)) throw InputError("graph cut lambda must be positive");
  check_columns(a, square_kernel);
  double cut = 0.0;
  for (Index i : a) {
    for (Index j = 0; j < square_kernel.cols(); ++j) cut += square_kernel(i, j);
  }
  double inner = 0.0;
  for (Index i : a) {
    for (Index j : a) inner += square_kernel(i, j);
  }
  return cut - lambda * inner;
}

double evaluate(const SetFunctionKind& kind, std::span<const Index> a, const Kernel& kernel) {
  switch (kind.variant) {
    case SetFunction::kFacilityLocation: return fl_eval(a, kernel);
    case SetFunction::kGraphCut: return gc_eval(a, kernel, kind.lambda);
    case SetFunction::kFacilityLocationMI: return flmi_eval(a, kernel);
    case SetFunction::kGraphCutMI: return gcmi_eval(a, kernel);
  }
  return 0.0;
}

GainState::GainState(SetFunctionKind kind, const Kernel& kernel)
    : kind_(kind), kernel_(&kernel) {
  const Index rows = kernel.rows();
  const Index cols = kernel.cols();
  in_set_.assign(static_cast<std::size_t>(cols), 0);
  per_row_max_.assign(static_cast<std::size_t>(rows), 0.0);
  column_term_.assign(static_cast<std::size_t>(cols), 0.0);
  switch (kind.variant) {
    case SetFunction::kFacilityLocationMI:
      for (Index j = 0; j < cols; ++j) {
        column_term_[j] = rows > 0 ? kernel.values().col(j).maxCoeff() : 0.0;
      }
      break;
    case SetFunction::kGraphCutMI:
      for (Index j = 0; j < cols; ++j) column_term_[j] = kernel.values().col(j).sum();
      break;
    case SetFunction::kFacilityLocation:
      check_square(kernel);
      break;
    case SetFunction::kGraphCut:
      check_square(kernel);
      if (!kernel.is_symmetric(kSymmetryTol)) throw InputError("graph cut needs a symmetric kernel");
      if (!(kind.lambda > 0.0)) throw InputError("graph cut lambda must be positive");
      for (Index j = 0; j < cols; ++j) column_term_[j] = kernel.values().row(j).sum();
      set_affinity_.assign(static_cast<std::size_t>(cols), 0.0);
      break;
  }
}

void GainState::check_column(Index x) const {
  if (x < 0 || x >= kernel_->cols()) {
    throw InputError("candidate " + std::to_string(x) + " outside kernel columns");
  }
  if (in_set_[static_cast<std::size_t>(x)]) {
    throw LogicError("candidate " + std::to_string(x) + " already selected");
  }
}

double GainState::marginal_gain(Index x) const {
  check_column(x);
  ++evaluations_;
  const Kernel& k = *kernel_;
  switch (kind_.variant) {
    case SetFunction::kFacilityLocationMI:
    case SetFunction::kFacilityLocation: {
      double gain = 0.0;
      for (Index i = 0; i < k.rows(); ++i) gain += std::max(0.0, k(i, x) - per_row_max_[i]);
      if (kind_.variant == SetFunction::kFacilityLocationMI) gain += column_term_[x];
      return gain;
    }
    case SetFunction::kGraphCutMI:
      return 2.0 * column_term_[x];
    case SetFunction::kGraphCut:
      return column_term_[x] - kind_.lambda * (2.0 * set_affinity_[x] + k(x, x));
  }
  return 0.0;
}

void GainState::commit(Index x) {
  const double gain = marginal_gain(x);
  --evaluations_;
  const Kernel& k = *kernel_;
  switch (kind_.variant) {
    case SetFunction::kFacilityLocationMI:
    case SetFunction::kFacilityLocation:
      for (Index i = 0; i < k.rows(); ++i) per_row_max_[i] = std::max(per_row_max_[i], k(i, x));
      break;
    case SetFunction::kGraphCut:
      for (Index j = 0; j < k.cols(); ++j) set_affinity_[j] += k(x, j);
      break;
    case SetFunction::kGraphCutMI:
      break;
  }
  in_set_[static_cast<std::size_t>(x)] = 1;
  selected_.push_back(x);
  current_value_ += gain;
}

}  // namespace platinum
