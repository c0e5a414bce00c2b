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
#include <iosfwd>
#include <span>
#include <vector>

#include "platinum/types.hpp"

namespace platinum {

// Fully connected ReLU classifier: input -> hidden... -> classes.
struct NetShape {
  int input = 32;
  std::vector<int> hidden = {64, 64};
  int classes = 5;

  std::vector<int> widths() const;
};

// Flat parameter vector with per-layer views. Layer l stores its weight
// matrix (out x in, row-major) followed by its bias.
class ParamVector {
 public:
  ParamVector() = default;
  // Zero-initialized parameters for the given layer widths.
  explicit ParamVector(std::vector<int> widths);
  ParamVector(std::vector<int> widths, Vector values);

  static Index parameter_count(std::span<const int> widths);

  const std::vector<int>& widths() const { return widths_; }
  int num_layers() const { return static_cast<int>(widths_.size()) - 1; }
  int input_dim() const { return widths_.front(); }
  int num_classes() const { return widths_.back(); }
  Index size() const { return values_.size(); }

  const Vector& values() const { return values_; }
  Vector& values() { return values_; }

  Eigen::Map<const Matrix> weight(int layer) const;
  Eigen::Map<Matrix> weight(int layer);
  Eigen::Map<const Vector> bias(int layer) const;
  Eigen::Map<Vector> bias(int layer);

  bool same_shape(const ParamVector& other) const { return widths_ == other.widths_; }
  bool all_finite() const { return values_.allFinite(); }

  friend bool operator==(const ParamVector& a, const ParamVector& b) {
    return a.widths_ == b.widths_ && a.values_ == b.values_;
  }

 private:
  void validate_and_index();

  std::vector<int> widths_;
  std::vector<Index> weight_offset_;
  std::vector<Index> bias_offset_;
  Vector values_;
};

// Points with (true or hypothesized) class labels.
struct LabeledBatch {
  Matrix x;
  std::vector<ClassId> y;

  Index size() const { return x.rows(); }
  bool empty() const { return x.rows() == 0; }
};

struct LossBreakdown {
  double labeled = 0.0;
  double unlabeled = 0.0;
  double tau = 0.0;
  double total = 0.0;
};

struct LossAndGrad {
  LossBreakdown loss;
  ParamVector grad;
};

// He-uniform weights for ReLU layers, LeCun-uniform for the output layer,
// zero biases. Deterministic per seed.
ParamVector init_params(std::uint64_t seed, const NetShape& shape);

Matrix logits(const ParamVector& params, const Matrix& x);

// Row-wise class probabilities (stable softmax).
Matrix forward_batch(const ParamVector& params, const Matrix& x);
Vector forward(const ParamVector& params, std::span<const double> x);

// Row-wise softmax with the max logit subtracted.
Matrix softmax_rows(const Matrix& logits);

// total = mean CE(labeled) + tau * mean CE(pseudo); an empty side contributes
// zero. The gradient is that of total with respect to every parameter.
LossAndGrad loss_and_grad(const ParamVector& params, const LabeledBatch& labeled,
                          const LabeledBatch& pseudo, double tau);

// Loss only; same conventions as loss_and_grad.
LossBreakdown loss(const ParamVector& params, const LabeledBatch& labeled,
                   const LabeledBatch& pseudo, double tau);

ParamVector sgd_step(const ParamVector& params, const ParamVector& grad, double lr);

// Checkpoint: one JSON line {"format":"platinum-params","widths":[...],"count":n}
// followed by one value per line in round-trip precision.
void save_checkpoint(const ParamVector& params, std::ostream& out);
ParamVector load_checkpoint(std::istream& in);

}  // namespace platinum
