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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "platinum/kernel.hpp"

namespace platinum {

enum class SetFunction {
  kFacilityLocation,     // FL: sum_{i in V} max_{j in A} S_ij, square kernel
  kGraphCut,             // GC: sum_{i in A, j in V} S_ij - lambda sum_{i,j in A} S_ij
  kFacilityLocationMI,   // FLMI over a query-rows x pool-columns kernel
  kGraphCutMI,           // GCMI over a query-rows x pool-columns kernel
};

struct SetFunctionKind {
  SetFunction variant = SetFunction::kFacilityLocationMI;
  double lambda = 1.0;  // GC only

  static SetFunctionKind flmi() { return {SetFunction::kFacilityLocationMI}; }
  static SetFunctionKind gcmi() { return {SetFunction::kGraphCutMI}; }
  static SetFunctionKind fl() { return {SetFunction::kFacilityLocation}; }
  static SetFunctionKind gc(double lambda = 1.0) { return {SetFunction::kGraphCut, lambda}; }
};

std::string to_string(SetFunction f);
// Accepts "fl", "gc", "flmi", "gcmi" (case-insensitive).
SetFunction parse_set_function(const std::string& name);

// Set-function values from scratch. A holds kernel column positions.
// max over the empty set is 0.
double flmi_eval(std::span<const Index> a, const Kernel& kernel);
double gcmi_eval(std::span<const Index> a, const Kernel& kernel);
double fl_eval(std::span<const Index> a, const Kernel& square_kernel);
double gc_eval(std::span<const Index> a, const Kernel& square_kernel, double lambda = 1.0);
double evaluate(const SetFunctionKind& kind, std::span<const Index> a, const Kernel& kernel);

// Memoized incremental state for one greedy run. Holds a non-owning
// reference to the kernel, which must outlive the state.
//
// For FLMI and FL, per_row_max()[i] is max_{j in A} S_ij (0 when A is
// empty). For GC, the state tracks sum_{i in A} S_ix for every column x.
class GainState {
 public:
  GainState(SetFunctionKind kind, const Kernel& kernel);

  const SetFunctionKind& kind() const { return kind_; }
  const Kernel& kernel() const { return *kernel_; }
  const std::vector<Index>& selected() const { return selected_; }
  const std::vector<double>& per_row_max() const { return per_row_max_; }
  double current_value() const { return current_value_; }
  bool contains(Index x) const { return in_set_[static_cast<std::size_t>(x)]; }

  // f(A + x) - f(A). Throws LogicError if x is already selected.
  double marginal_gain(Index x) const;
  void commit(Index x);

  // Number of marginal_gain calls so far.
  std::size_t evaluations() const { return evaluations_; }

 private:
  void check_column(Index x) const;

  SetFunctionKind kind_;
  const Kernel* kernel_;
  std::vector<Index> selected_;
  std::vector<char> in_set_;
  std::vector<double> per_row_max_;
  std::vector<double> column_term_;  // FLMI: max_i S_ix; GCMI: sum_i S_ix; GC: sum_j S_xj
  std::vector<double> set_affinity_;  // GC: sum_{i in A} S_ix
  double current_value_ = 0.0;
  mutable std::size_t evaluations_ = 0;
};

}  // namespace platinum
