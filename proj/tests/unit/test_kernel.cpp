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

#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "platinum/error.hpp"
#include "platinum/kernel.hpp"
#include "platinum/net.hpp"

using namespace platinum;

namespace {

Embeddings softmax_rows_of(const Matrix& m) { return {m, EmbeddingKind::kSoftmax}; }

Matrix random_simplex(std::mt19937_64& rng, int n, int c) {
  std::uniform_real_distribution<double> u(0.01, 1.0);
  Matrix m(n, c);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < c; ++j) m(i, j) = u(rng);
    m.row(i) /= m.row(i).sum();
  }
  return m;
}

}  // namespace

TEST_CASE("prob_embed: zero logits give the uniform distribution") {
  ParamVector params(NetShape{4, {3}, 5}.widths());
  Matrix x = Matrix::Random(1, 4);
  const Embeddings e = prob_embed(params, x);
  CHECK(e.kind == EmbeddingKind::kSoftmax);
  for (int c = 0; c < 5; ++c) CHECK(e.vectors(0, c) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("prob_embed: saturated logit puts all mass on one class") {
  ParamVector params(NetShape{2, {}, 5}.widths());
  params.bias(0)[2] = 50.0;
  const Embeddings e = prob_embed(params, Matrix::Zero(1, 2));
  CHECK(std::abs(e.vectors(0, 2) - 1.0) < 1e-9);
  CHECK(std::abs(e.vectors.row(0).sum() - 1.0) < 1e-12);
}

TEST_CASE("prob_embed: random params yield simplex rows") {
  const ParamVector params = init_params(11, NetShape{8, {16}, 5});
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 2.0);
  Matrix x(10, 8);
  for (Index i = 0; i < x.size(); ++i) x.data()[i] = g(rng);
  const Embeddings e = prob_embed(params, x);
  REQUIRE(e.size() == 10);
  for (Index i = 0; i < e.size(); ++i) {
    CHECK(std::abs(e.vectors.row(i).sum() - 1.0) < 1e-9);
    CHECK(e.vectors.row(i).minCoeff() >= 0.0);
  }
}

TEST_CASE("prob_embed: dimension mismatch is a configuration error") {
  ParamVector params(NetShape{4, {3}, 5}.widths());
  CHECK_THROWS_AS(prob_embed(params, Matrix::Zero(2, 3)), ConfigError);
}

TEST_CASE("onehot_embed examples") {
  const std::vector<ClassId> a{0};
  CHECK(onehot_embed(a, 3).vectors == (Matrix(1, 3) << 1, 0, 0).finished());
  const std::vector<ClassId> b{2};
  CHECK(onehot_embed(b, 3).vectors == (Matrix(1, 3) << 0, 0, 1).finished());
  const std::vector<ClassId> c{0, 0, 1};
  const Embeddings e = onehot_embed(c, 2);
  CHECK(e.kind == EmbeddingKind::kOneHot);
  CHECK(e.vectors == (Matrix(3, 2) << 1, 0, 1, 0, 0, 1).finished());
  const std::vector<ClassId> bad{3};
  CHECK_THROWS_AS(onehot_embed(bad, 3), InputError);
}

TEST_CASE("cosine_kernel examples") {
  const std::vector<ClassId> zero{0};
  const std::vector<ClassId> one{1};
  SUBCASE("identical vectors") {
    const Matrix v = (Matrix(1, 3) << 0.2, 0.5, 0.3).finished();
    CHECK(cosine_kernel(softmax_rows_of(v), softmax_rows_of(v))(0, 0) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("orthogonal one-hots") {
    CHECK(cosine_kernel(onehot_embed(zero, 2), onehot_embed(one, 2))(0, 0) == 0.0);
  }
  SUBCASE("one-hot vs softmax") {
    const Matrix p = (Matrix(1, 2) << 0.8, 0.2).finished();
    CHECK(cosine_kernel(onehot_embed(zero, 2), softmax_rows_of(p))(0, 0) ==
          doctest::Approx(0.9701425001453319).epsilon(1e-12));
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(cosine_kernel(onehot_embed(zero, 2), onehot_embed(zero, 3)), InputError);
  }
}

TEST_CASE("cosine_kernel properties: symmetry, range, scale invariance") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix a = random_simplex(rng, 6, 4);
    const Matrix b = random_simplex(rng, 9, 4);
    const Kernel ab = cosine_kernel(softmax_rows_of(a), softmax_rows_of(b));
    const Kernel ba = cosine_kernel(softmax_rows_of(b), softmax_rows_of(a));
    for (Index i = 0; i < 6; ++i) {
      for (Index j = 0; j < 9; ++j) {
        CHECK(ab(i, j) == doctest::Approx(ba(j, i)).epsilon(1e-14));
        CHECK(ab(i, j) >= 0.0);
        CHECK(ab(i, j) <= 1.0);
      }
    }
    Matrix scaled = a;
    const Index row = trial % 6;
    scaled.row(row) *= scale(rng);
    const Kernel sk = cosine_kernel(softmax_rows_of(scaled), softmax_rows_of(b));
    for (Index j = 0; j < 9; ++j) CHECK(std::abs(sk(row, j) - ab(row, j)) < 1e-12);
  }
}

TEST_CASE("Kernel metadata and class sub-kernels") {
  Matrix v = (Matrix(3, 2) << 0.1, 0.2, 0.3, 0.4, 0.5, 0.6).finished();
  const Kernel k(v, {0, 1, 0}, {7, 9});
  const Kernel c0 = k.rows_of_class(0);
  CHECK(c0.rows() == 2);
  CHECK(c0(1, 1) == 0.6);
  CHECK(c0.col_index()[1] == 9);
  CHECK_THROWS_AS(Kernel(v, {0, 1}, {7, 9}), InputError);
  v(0, 0) = 1.5;
  CHECK_THROWS_AS(Kernel(v, {0, 1, 0}, {7, 9}), InputError);
}

TEST_CASE("kernel csv round trip and diagnostics") {
  const Matrix v = (Matrix(2, 3) << 0.9, 0.1, 0.5, 0.2, 0.8, 0.4).finished();
  const Kernel k(v, {0, 1}, {4, 5, 6});
  std::stringstream ss;
  write_kernel_csv(k, ss);
  CHECK(ss.str().rfind("row_class,4,5,6\n", 0) == 0);
  const Kernel back = read_kernel_csv(ss);
  CHECK(back.values() == k.values());
  CHECK(std::vector<ClassId>(back.row_class().begin(), back.row_class().end()) ==
        std::vector<ClassId>{0, 1});
  CHECK(std::vector<Index>(back.col_index().begin(), back.col_index().end()) ==
        std::vector<Index>{4, 5, 6});

  std::istringstream bad("row_class,0,1\n0,0.5,0.5\n1,0.5\n");
  try {
    read_kernel_csv(bad);
    FAIL("expected a data error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  std::istringstream nonnum("row_class,0\n0,abc\n");
  CHECK_THROWS_AS(read_kernel_csv(nonnum), DataError);
}
