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

#include "platinum/net.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "json.hpp"
#include "platinum/error.hpp"
#include "platinum/random.hpp"

namespace platinum {

std::vector<int> NetShape::widths() const {
  std::vector<int> w;
  w.reserve(hidden.size() + 2);
  w.push_back(input);
  w.insert(w.end(), hidden.begin(), hidden.end());
  w.push_back(classes);
  return w;
}

ParamVector::ParamVector(std::vector<int> widths) : widths_(std::move(widths)) {
  validate_and_index();
  values_ = Vector::Zero(parameter_count(widths_));
}

ParamVector::ParamVector(std::vector<int> widths, Vector values)
    : widths_(std::move(widths)), values_(std::move(values)) {
  validate_and_index();
  if (values_.size() != parameter_count(widths_)) {
    throw ConfigError("parameter vector has " + std::to_string(values_.size()) +
                      " values, shapes need " + std::to_string(parameter_count(widths_)));
  }
}

Index ParamVector::parameter_count(std::span<const int> widths) {
  Index n = 0;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    n += static_cast<Index>(widths[l + 1]) * (widths[l] + 1);
  }
  return n;
}

void ParamVector::validate_and_index() {
  if (widths_.size() < 2) throw ConfigError("network needs at least an input and an output layer");
  for (int w : widths_) {
    if (w <= 0) throw ConfigError("layer width must be positive");
  }
  weight_offset_.clear();
  bias_offset_.clear();
  Index offset = 0;
  for (int l = 0; l < num_layers(); ++l) {
    weight_offset_.push_back(offset);
    offset += static_cast<Index>(widths_[l + 1]) * widths_[l];
    bias_offset_.push_back(offset);
    offset += widths_[l + 1];
  }
}

Eigen::Map<const Matrix> ParamVector::weight(int layer) const {
  return {values_.data() + weight_offset_[layer], widths_[layer + 1], widths_[layer]};
}
Eigen::Map<Matrix> ParamVector::weight(int layer) {
  return {values_.data() + weight_offset_[layer], widths_[layer + 1], widths_[layer]};
}
Eigen::Map<const Vector> ParamVector::bias(int layer) const {
  return {values_.data() + bias_offset_[layer], widths_[layer + 1]};
}
Eigen::Map<Vector> ParamVector::bias(int layer) {
  return {values_.data() + bias_offset_[layer], widths_[layer + 1]};
}

ParamVector init_params(std::uint64_t seed, const NetShape& shape) {
  ParamVector params(shape.widths());
  Rng rng(seed);
  for (int l = 0; l < params.num_layers(); ++l) {
    const double fan_in = params.widths()[l];
    const bool output = l + 1 == params.num_layers();
    const double limit = std::sqrt((output ? 3.0 : 6.0) / fan_in);
    std::uniform_real_distribution<double> draw(-limit, limit);
    auto w = params.weight(l);
    for (Index i = 0; i < w.rows(); ++i) {
      for (Index j = 0; j < w.cols(); ++j) w(i, j) = draw(rng);
    }
  }
  return params;
}

namespace {

void check_input(const ParamVector& params, const Matrix& x) {
  if (x.cols() != params.input_dim()) {
    throw ConfigError("input has " + std::to_string(x.cols()) + " features, network expects " +
                      std::to_string(params.input_dim()));
  }
}

// Post-activation outputs of every hidden layer plus the final logits.
std::vector<Matrix> forward_trace(const ParamVector& params, const Matrix& x) {
  std::vector<Matrix> acts;
  acts.reserve(params.num_layers());
  const Matrix* in = &x;
  for (int l = 0; l < params.num_layers(); ++l) {
    Matrix z = (*in) * params.weight(l).transpose();
    z.rowwise() += params.bias(l).transpose();
    if (l + 1 < params.num_layers()) z = z.cwiseMax(0.0);
    acts.push_back(std::move(z));
    in = &acts.back();
  }
  return acts;
}

void check_labels(std::span<const ClassId> y, Index rows, int classes, const char* side) {
  if (static_cast<Index>(y.size()) != rows) {
    throw InputError(std::string(side) + " batch has mismatched label count");
  }
  for (ClassId c : y) {
    if (c < 0 || c >= classes) {
      throw InputError(std::string(side) + " label " + std::to_string(c) + " out of range [0, " +
                       std::to_string(classes) + ")");
    }
  }
}

// Mean cross-entropy from logits via log-sum-exp.
double mean_cross_entropy(const Matrix& z, std::span<const ClassId> y) {
  if (z.rows() == 0) return 0.0;
  double sum = 0.0;
  for (Index i = 0; i < z.rows(); ++i) {
    const double m = z.row(i).maxCoeff();
    const double lse = m + std::log((z.row(i).array() - m).exp().sum());
    sum += lse - z(i, y[i]);
  }
  return sum / static_cast<double>(z.rows());
}

Matrix stack(const LabeledBatch& a, const LabeledBatch& b) {
  Matrix x(a.size() + b.size(), a.empty() ? b.x.cols() : a.x.cols());
  if (!a.empty()) x.topRows(a.size()) = a.x;
  if (!b.empty()) x.bottomRows(b.size()) = b.x;
  return x;
}

}  // namespace

Matrix softmax_rows(const Matrix& z) {
  Matrix p(z.rows(), z.cols());
  for (Index i = 0; i < z.rows(); ++i) {
    const double m = z.row(i).maxCoeff();
    p.row(i) = (z.row(i).array() - m).exp();
    p.row(i) /= p.row(i).sum();
  }
  return p;
}

Matrix logits(const ParamVector& params, const Matrix& x) {
  check_input(params, x);
  return std::move(forward_trace(params, x).back());
}

Matrix forward_batch(const ParamVector& params, const Matrix& x) {
  return softmax_rows(logits(params, x));
}

Vector forward(const ParamVector& params, std::span<const double> x) {
  Matrix row = Eigen::Map<const Matrix>(x.data(), 1, static_cast<Index>(x.size()));
  return forward_batch(params, row).row(0).transpose();
}

LossBreakdown loss(const ParamVector& params, const LabeledBatch& labeled,
                   const LabeledBatch& pseudo, double tau) {
  const int classes = params.num_classes();
  check_labels(labeled.y, labeled.size(), classes, "labeled");
  check_labels(pseudo.y, pseudo.size(), classes, "pseudo");
  LossBreakdown out;
  out.tau = tau;
  if (!labeled.empty()) out.labeled = mean_cross_entropy(logits(params, labeled.x), labeled.y);
  if (!pseudo.empty()) out.unlabeled = mean_cross_entropy(logits(params, pseudo.x), pseudo.y);
  out.total = out.labeled + tau * out.unlabeled;
  if (!std::isfinite(out.total)) throw NumericError("non-finite loss");
  return out;
}

LossAndGrad loss_and_grad(const ParamVector& params, const LabeledBatch& labeled,
                          const LabeledBatch& pseudo, double tau) {
  const int classes = params.num_classes();
  check_labels(labeled.y, labeled.size(), classes, "labeled");
  check_labels(pseudo.y, pseudo.size(), classes, "pseudo");

  LossAndGrad out{LossBreakdown{}, ParamVector(params.widths())};
  out.loss.tau = tau;
  const Index nl = labeled.size();
  const Index nu = pseudo.size();
  if (nl + nu == 0) return out;

  const Matrix x = stack(labeled, pseudo);
  check_input(params, x);
  const std::vector<Matrix> acts = forward_trace(params, x);
  const Matrix& z = acts.back();

  std::vector<ClassId> y(labeled.y);
  y.insert(y.end(), pseudo.y.begin(), pseudo.y.end());
  out.loss.labeled = mean_cross_entropy(z.topRows(nl), std::span(y).first(nl));
  out.loss.unlabeled = mean_cross_entropy(z.bottomRows(nu), std::span(y).subspan(nl));
  out.loss.total = out.loss.labeled + tau * out.loss.unlabeled;
  if (!std::isfinite(out.loss.total)) throw NumericError("non-finite loss");

  // dL/dz = w_i * (softmax(z_i) - onehot(y_i)), w_i = 1/n_l or tau/n_u.
  Matrix delta = softmax_rows(z);
  for (Index i = 0; i < delta.rows(); ++i) {
    delta(i, y[i]) -= 1.0;
    delta.row(i) *= i < nl ? 1.0 / static_cast<double>(nl) : tau / static_cast<double>(nu);
  }

  ParamVector& grad = out.grad;
  for (int l = params.num_layers() - 1; l >= 0; --l) {
    const Matrix& in = l == 0 ? x : acts[l - 1];
    grad.weight(l).noalias() = delta.transpose() * in;
    grad.bias(l) = delta.colwise().sum().transpose();
    if (l > 0) {
      Matrix back = delta * params.weight(l);
      back.array() *= (acts[l - 1].array() > 0.0).cast<double>();
      delta = std::move(back);
    }
  }
  if (!grad.all_finite()) throw NumericError("non-finite gradient");
  return out;
}

ParamVector sgd_step(const ParamVector& params, const ParamVector& grad, double lr) {
  if (!params.same_shape(grad)) throw ConfigError("gradient shape does not match parameters");
  ParamVector next = params;
  next.values() -= lr * grad.values();
  return next;
}

void save_checkpoint(const ParamVector& params, std::ostream& out) {
  nlohmann::json header = {{"format", "platinum-params"},
                           {"widths", params.widths()},
                           {"count", params.size()}};
  out << header.dump() << '\n';
  out.precision(std::numeric_limits<double>::max_digits10);
  for (Index i = 0; i < params.size(); ++i) out << params.values()[i] << '\n';
}

ParamVector load_checkpoint(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("checkpoint line 1: missing header");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("checkpoint line 1: ") + e.what());
  }
  if (header.value("format", "") != "platinum-params" || !header.contains("widths")) {
    throw DataError("checkpoint line 1: not a platinum parameter header");
  }
  const auto widths = header["widths"].get<std::vector<int>>();
  const Index count = ParamVector::parameter_count(widths);
  Vector values(count);
  for (Index i = 0; i < count; ++i) {
    if (!std::getline(in, line)) {
      throw DataError("checkpoint line " + std::to_string(i + 2) + ": unexpected end of file");
    }
    std::istringstream ss(line);
    if (!(ss >> values[i])) {
      throw DataError("checkpoint line " + std::to_string(i + 2) + ": not a number");
    }
  }
  return ParamVector(widths, std::move(values));
}

}  // namespace platinum
