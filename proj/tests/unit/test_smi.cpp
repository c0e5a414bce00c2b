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

#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "platinum/error.hpp"
#include "platinum/smi.hpp"

using namespace platinum;
using namespace platinum::testing;

namespace {

// Rows R = {r1, r2}, columns U = {u1, u2, u3}.
Kernel toy() {
  return to_kernel({{0.9, 0.1, 0.5}, {0.2, 0.8, 0.4}});
}

}  // namespace

TEST_CASE("flmi_eval on the toy kernel") {
  const Kernel k = toy();
  CHECK(flmi_eval(std::vector<Index>{}, k) == 0.0);
  CHECK(flmi_eval(std::vector<Index>{0}, k) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(flmi_eval(std::vector<Index>{0, 1}, k) == doctest::Approx(3.4).epsilon(1e-12));
  CHECK_THROWS_AS(flmi_eval(std::vector<Index>{3}, k), InputError);
}

TEST_CASE("gcmi_eval on the toy kernel") {
  const Kernel k = toy();
  CHECK(gcmi_eval(std::vector<Index>{}, k) == 0.0);
  CHECK(gcmi_eval(std::vector<Index>{0}, k) == doctest::Approx(2.2).epsilon(1e-12));
  CHECK(gcmi_eval(std::vector<Index>{0, 1}, k) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK_THROWS_AS(gcmi_eval(std::vector<Index>{-1}, k), InputError);
}

TEST_CASE("fl_eval") {
  CHECK(fl_eval(std::vector<Index>{}, Kernel::square(Matrix::Identity(3, 3))) == 0.0);
  CHECK_THROWS_AS(fl_eval(std::vector<Index>{}, toy()), InputError);

  SUBCASE("full set with unit diagonal covers every row") {
    std::mt19937_64 rng(5);
    Dense d = random_dense(rng, 5, 5);
    for (int i = 0; i < 5; ++i) d[i][i] = 1.0;
    CHECK(fl_eval(std::vector<Index>{0, 1, 2, 3, 4}, to_kernel(d)) >= 5.0 - 1e-12);
  }
  SUBCASE("monotone under inclusion on a random 4x4 kernel") {
    std::mt19937_64 rng(6);
    const Kernel k = to_kernel(random_dense(rng, 4, 4));
    for (std::uint32_t a = 1; a < 16; ++a) {
      for (std::uint32_t b = 1; b < 16; ++b) {
        if ((a & b) != a) continue;
        CHECK(fl_eval(members(a), k) <= fl_eval(members(b), k) + 1e-12);
      }
    }
  }
}

TEST_CASE("gc_eval") {
  std::mt19937_64 rng(9);
  const Dense d = random_symmetric(rng, 6);
  const Kernel k = to_kernel(d);
  CHECK(gc_eval(std::vector<Index>{}, k) == 0.0);

  SUBCASE("singleton") {
    double row = 0.0;
    for (double v : d[2]) row += v;
    CHECK(gc_eval(std::vector<Index>{2}, k) == doctest::Approx(row - d[2][2]).epsilon(1e-12));
  }
  SUBCASE("disjoint union identity") {
    const std::vector<Index> a{0, 3};
    const std::vector<Index> r{1, 4, 5};
    const std::vector<Index> ar{0, 1, 3, 4, 5};
    double cross = 0.0;
    for (Index i : a)
      for (Index j : r) cross += d[i][j];
    CHECK(gc_eval(a, k) + gc_eval(r, k) - gc_eval(ar, k) == doctest::Approx(2.0 * cross).epsilon(1e-12));
  }
  SUBCASE("asymmetric kernel rejected") {
    Dense asym = d;
    asym[0][1] += 0.01;
    CHECK_THROWS_AS(gc_eval(std::vector<Index>{0}, to_kernel(asym)), InputError);
  }
}

TEST_CASE("marginal_gain and commit on the toy kernel") {
  const Kernel k = toy();
  GainState flmi(SetFunctionKind::flmi(), k);
  CHECK(flmi.marginal_gain(0) == doctest::Approx(2.0).epsilon(1e-12));
  flmi.commit(0);
  CHECK(flmi.current_value() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(flmi.marginal_gain(1) == doctest::Approx(3.4 - 2.0).epsilon(1e-12));
  flmi.commit(1);
  CHECK(flmi.current_value() == doctest::Approx(3.4).epsilon(1e-12));
  CHECK(flmi.per_row_max() == std::vector<double>{0.9, 0.8});
  CHECK_THROWS_AS(flmi.commit(1), LogicError);
  CHECK_THROWS_AS(flmi.marginal_gain(0), LogicError);

  GainState gcmi(SetFunctionKind::gcmi(), k);
  CHECK(gcmi.marginal_gain(2) == doctest::Approx(1.8).epsilon(1e-12));
  gcmi.commit(0);
  CHECK(gcmi.marginal_gain(2) == doctest::Approx(1.8).epsilon(1e-12));
  gcmi.commit(1);
  CHECK(gcmi.marginal_gain(2) == doctest::Approx(1.8).epsilon(1e-12));
}

TEST_CASE("FLMI is monotone and submodular on random kernels") {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> rows_d(1, 4), cols_d(1, 8);
  for (int trial = 0; trial < 60; ++trial) {
    const Dense d = random_dense(rng, rows_d(rng), cols_d(rng));
    const Kernel k = to_kernel(d);
    const auto n = static_cast<std::uint32_t>(d[0].size());
    for (std::uint32_t b = 0; b < (1u << n); ++b) {
      for (std::uint32_t a = b;; a = (a - 1) & b) {
        CHECK(flmi_eval(members(a), k) <= flmi_eval(members(b), k) + 1e-9);
        for (std::uint32_t x = 0; x < n; ++x) {
          if (b >> x & 1u) continue;
          const double gain_a = flmi_oracle(d, a | 1u << x) - flmi_oracle(d, a);
          const double gain_b = flmi_oracle(d, b | 1u << x) - flmi_oracle(d, b);
          CHECK(gain_a >= gain_b - 1e-9);
        }
        if (a == 0) break;
      }
    }
  }
}

TEST_CASE("incremental state matches from-scratch evaluation") {
  std::mt19937_64 rng(33);
  for (const SetFunctionKind kind :
       {SetFunctionKind::flmi(), SetFunctionKind::gcmi(), SetFunctionKind::fl(), SetFunctionKind::gc()}) {
    for (int trial = 0; trial < 40; ++trial) {
      const bool square = kind.variant == SetFunction::kFacilityLocation ||
                          kind.variant == SetFunction::kGraphCut;
      const Dense d = kind.variant == SetFunction::kGraphCut ? random_symmetric(rng, 7)
                      : square                               ? random_dense(rng, 7, 7)
                                                             : random_dense(rng, 3, 7);
      const Kernel k = to_kernel(d);
      GainState state(kind, k);
      std::vector<Index> order{3, 0, 6, 1, 5, 2, 4};
      std::shuffle(order.begin(), order.end(), rng);
      for (Index x : order) {
        const double before = evaluate(kind, state.selected(), k);
        const double gain = state.marginal_gain(x);
        state.commit(x);
        const double after = evaluate(kind, state.selected(), k);
        CHECK(gain == doctest::Approx(after - before).epsilon(1e-9));
        CHECK(std::abs(state.current_value() - after) < 1e-9);
      }
    }
  }
}

TEST_CASE("set function names round trip") {
  for (const auto f : {SetFunction::kFacilityLocation, SetFunction::kGraphCut,
                       SetFunction::kFacilityLocationMI, SetFunction::kGraphCutMI}) {
    CHECK(parse_set_function(to_string(f)) == f);
  }
  CHECK(parse_set_function("FLMI") == SetFunction::kFacilityLocationMI);
  CHECK_THROWS_AS(parse_set_function("logdet"), ConfigError);
}
