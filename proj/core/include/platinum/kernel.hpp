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

#include <iosfwd>
#include <span>
#include <vector>

#include "platinum/net.hpp"
#include "platinum/types.hpp"

namespace platinum {

enum class EmbeddingKind { kSoftmax, kOneHot };

// One embedding per row. Rows are points on the probability simplex: model
// class probabilities for unlabeled points, one-hot vectors for labeled ones.
struct Embeddings {
  Matrix vectors;
  EmbeddingKind kind = EmbeddingKind::kSoftmax;

  Index size() const { return vectors.rows(); }
  Index dim() const { return vectors.cols(); }
};

// Similarity between query-side rows and ground-set columns, stored
// row-major. row_class labels each row; col_index maps each column back to
// its index in the unlabeled pool.
class Kernel {
 public:
  Kernel() = default;
  Kernel(Matrix values, std::vector<ClassId> row_class, std::vector<Index> col_index);

  // Square kernel over a ground set; rows all class 0, col_index = 0..n-1.
  static Kernel square(Matrix values);

  Index rows() const { return values_.rows(); }
  Index cols() const { return values_.cols(); }
  double operator()(Index row, Index col) const { return values_(row, col); }

  const Matrix& values() const { return values_; }
  std::span<const ClassId> row_class() const { return row_class_; }
  std::span<const Index> col_index() const { return col_index_; }

  Kernel select_rows(std::span<const Index> rows) const;
  // The sub-kernel whose rows carry the given class.
  Kernel rows_of_class(ClassId c) const;

  bool is_square() const { return rows() == cols(); }
  bool is_symmetric(double tol) const;

 private:
  Matrix values_;
  std::vector<ClassId> row_class_;
  std::vector<Index> col_index_;
};

Embeddings prob_embed(const ParamVector& params, const Matrix& points);
Embeddings onehot_embed(std::span<const ClassId> labels, int classes);

// values(i, j) = <r_i, c_j> / (|r_i| |c_j|), clamped to [0, 1].
Kernel cosine_kernel(const Embeddings& rows, const Embeddings& cols,
                     std::vector<ClassId> row_class, std::vector<Index> col_index);
// Same, with row_class all zero and col_index = 0..cols-1.
Kernel cosine_kernel(const Embeddings& rows, const Embeddings& cols);

// CSV: header "row_class,<col_index>..." then one line per row,
// "<row_class>,<values>...".
void write_kernel_csv(const Kernel& kernel, std::ostream& out);
Kernel read_kernel_csv(std::istream& in);

}  // namespace platinum
