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

#include "platinum/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "platinum/error.hpp"

namespace platinum {

namespace {

constexpr double kRangeSlack = 1e-12;

}  // namespace

Kernel::Kernel(Matrix values, std::vector<ClassId> row_class, std::vector<Index> col_index)
    : values_(std::move(values)),
      row_class_(std::move(row_class)),
      col_index_(std::move(col_index)) {
  if (static_cast<Index>(row_class_.size()) != values_.rows()) {
    throw InputError("kernel row_class length does not match row count");
  }
  if (static_cast<Index>(col_index_.size()) != values_.cols()) {
    throw InputError("kernel col_index length does not match column count");
  }
  for (Index i = 0; i < values_.rows(); ++i) {
    for (Index j = 0; j < values_.cols(); ++j) {
      const double v = values_(i, j);
      if (!std::isfinite(v) || v < -kRangeSlack || v > 1.0 + kRangeSlack) {
        throw InputError("kernel entry (" + std::to_string(i) + ", " + std::to_string(j) +
                         ") = " + std::to_string(v) + " outside [0, 1]");
      }
    }
  }
}

Kernel Kernel::square(Matrix values) {
  if (values.rows() != values.cols()) throw InputError("square kernel expected");
  std::vector<Index> cols(values.cols());
  std::iota(cols.begin(), cols.end(), Index{0});
  std::vector<ClassId> rows(values.rows(), 0);
  return Kernel(std::move(values), std::move(rows), std::move(cols));
}

Kernel Kernel::select_rows(std::span<const Index> rows) const {
  Matrix sub(static_cast<Index>(rows.size()), cols());
  std::vector<ClassId> cls;
  cls.reserve(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k] < 0 || rows[k] >= this->rows()) throw InputError("kernel row out of range");
    sub.row(static_cast<Index>(k)) = values_.row(rows[k]);
    cls.push_back(row_class_[rows[k]]);
  }
  Kernel out;
  out.values_ = std::move(sub);
  out.row_class_ = std::move(cls);
  out.col_index_ = col_index_;
  return out;
}

Kernel Kernel::rows_of_class(ClassId c) const {
  std::vector<Index> rows;
  for (Index i = 0; i < this->rows(); ++i) {
    if (row_class_[i] == c) rows.push_back(i);
  }
  return select_rows(rows);
}

bool Kernel::is_symmetric(double tol) const {
  if (!is_square()) return false;
  for (Index i = 0; i < rows(); ++i) {
    for (Index j = i + 1; j < cols(); ++j) {
      if (std::abs(values_(i, j) - values_(j, i)) > tol) return false;
    }
  }
  return true;
}

Embeddings prob_embed(const ParamVector& params, const Matrix& points) {
  if (!points.allFinite()) throw ConfigError("points contain non-finite features");
  Embeddings out{forward_batch(params, points), EmbeddingKind::kSoftmax};
  if (!out.vectors.allFinite()) throw NumericError("model produced non-finite class probabilities");
  return out;
}

Embeddings onehot_embed(std::span<const ClassId> labels, int classes) {
  if (classes <= 0) throw InputError("one-hot embedding needs at least one class");
  Embeddings out{Matrix::Zero(static_cast<Index>(labels.size()), classes), EmbeddingKind::kOneHot};
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= classes) {
      throw InputError("label " + std::to_string(labels[i]) + " out of range [0, " +
                       std::to_string(classes) + ")");
    }
    out.vectors(static_cast<Index>(i), labels[i]) = 1.0;
  }
  return out;
}

Kernel cosine_kernel(const Embeddings& rows, const Embeddings& cols,
                     std::vector<ClassId> row_class, std::vector<Index> col_index) {
  if (rows.size() > 0 && cols.size() > 0 && rows.dim() != cols.dim()) {
    throw InputError("embedding dimensions differ: " + std::to_string(rows.dim()) + " vs " +
                     std::to_string(cols.dim()));
  }
  const Vector row_norm = rows.vectors.rowwise().norm();
  const Vector col_norm = cols.vectors.rowwise().norm();
  if ((row_norm.array() <= 0.0).any() || (col_norm.array() <= 0.0).any()) {
    throw InputError("zero embedding vector");
  }
  Matrix values = rows.vectors * cols.vectors.transpose();
  values.array().colwise() /= row_norm.array();
  values.array().rowwise() /= col_norm.transpose().array();
  values = values.cwiseMax(0.0).cwiseMin(1.0);
  return Kernel(std::move(values), std::move(row_class), std::move(col_index));
}

Kernel cosine_kernel(const Embeddings& rows, const Embeddings& cols) {
  std::vector<Index> col_index(cols.size());
  std::iota(col_index.begin(), col_index.end(), Index{0});
  return cosine_kernel(rows, cols, std::vector<ClassId>(rows.size(), 0), std::move(col_index));
}

void write_kernel_csv(const Kernel& kernel, std::ostream& out) {
  out.precision(std::numeric_limits<double>::max_digits10);
  out << "row_class";
  for (Index c : kernel.col_index()) out << ',' << c;
  out << '\n';
  for (Index i = 0; i < kernel.rows(); ++i) {
    out << kernel.row_class()[i];
    for (Index j = 0; j < kernel.cols(); ++j) out << ',' << kernel(i, j);
    out << '\n';
  }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

template <typename T>
T parse_field(const std::string& text, int line, const char* what) {
  std::istringstream ss(text);
  T value{};
  ss >> value;
  if (ss.fail() || !(ss >> std::ws).eof()) {
    throw DataError("kernel csv line " + std::to_string(line) + ": bad " + what + " '" + text +
                    "'");
  }
  return value;
}

}  // namespace

Kernel read_kernel_csv(std::istream& in) {
  std::string line;
  int line_no = 1;
  if (!std::getline(in, line)) throw DataError("kernel csv line 1: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = split_csv_line(line);
  if (header.empty() || header.front() != "row_class") {
    throw DataError("kernel csv line 1: header must start with 'row_class'");
  }
  std::vector<Index> col_index;
  for (std::size_t k = 1; k < header.size(); ++k) {
    col_index.push_back(parse_field<Index>(header[k], line_no, "column index"));
  }
  std::vector<ClassId> row_class;
  std::vector<double> flat;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw DataError("kernel csv line " + std::to_string(line_no) + ": expected " +
                      std::to_string(header.size()) + " fields, got " +
                      std::to_string(fields.size()));
    }
    row_class.push_back(parse_field<ClassId>(fields[0], line_no, "row class"));
    for (std::size_t k = 1; k < fields.size(); ++k) {
      const double v = parse_field<double>(fields[k], line_no, "value");
      if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
        throw DataError("kernel csv line " + std::to_string(line_no) + ": value " + fields[k] +
                        " outside [0, 1]");
      }
      flat.push_back(v);
    }
  }
  const Index rows = static_cast<Index>(row_class.size());
  const Index cols = static_cast<Index>(col_index.size());
  Matrix values = rows * cols == 0 ? Matrix(rows, cols)
                                   : Matrix(Eigen::Map<const Matrix>(flat.data(), rows, cols));
  return Kernel(std::move(values), std::move(row_class), std::move(col_index));
}

}  // namespace platinum
