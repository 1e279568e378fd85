// Copyright 2026 The ebmc Authors. All Rights Reserved.
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

#include <doctest.h>

#include "ebmc/errors.hpp"
#include "ebmc/observed_matrix.hpp"

using ebmc::Entry;
using ebmc::ObservedMatrix;
using ebmc::Index;

TEST_CASE("entries become canonical row-major and row slices match") {
  ObservedMatrix m(3, 4, {{2, 1, 5.0}, {0, 3, 1.0}, {0, 0, 2.0}, {2, 0, -1.0}});
  REQUIRE(m.size() == 4);
  CHECK(m.entries()[0] == Entry{0, 0, 2.0});
  CHECK(m.entries()[1] == Entry{0, 3, 1.0});
  CHECK(m.row_count(0) == 2);
  CHECK(m.row_count(1) == 0);
  CHECK(m.row(1).empty());
  REQUIRE(m.row(2).size() == 2);
  CHECK(m.row(2)[0].col == 0);
  CHECK(m.row(2)[1].col == 1);
  Index total = 0;
  for (Index i = 0; i < m.rows(); ++i) total += m.row_count(i);
  CHECK(total == m.size());
}

TEST_CASE("invalid observation sets are rejected") {
  CHECK_THROWS_AS(ObservedMatrix(2, 2, {{0, 0, 1.0}, {0, 0, 2.0}}), ebmc::InvalidInput);
  CHECK_THROWS_AS(ObservedMatrix(2, 2, {{2, 0, 1.0}}), ebmc::InvalidInput);
  CHECK_THROWS_AS(ObservedMatrix(2, 2, {{0, -1, 1.0}}), ebmc::InvalidInput);
  CHECK_THROWS_AS(ObservedMatrix(0, 2, {}), ebmc::InvalidInput);
  CHECK_THROWS_AS(ObservedMatrix(2, 2, {{0, 0, std::nan("")}}), ebmc::InvalidInput);
}

TEST_CASE("transpose, zero fill and mask") {
  ObservedMatrix m(2, 3, {{0, 2, 4.0}, {1, 0, -2.0}});
  ObservedMatrix t = m.transposed();
  CHECK(t.rows() == 3);
  CHECK(t.cols() == 2);
  CHECK(t.entries()[0] == Entry{0, 1, -2.0});
  CHECK(t.entries()[1] == Entry{2, 0, 4.0});
  Eigen::MatrixXd z = m.zero_filled();
  CHECK(z(0, 2) == 4.0);
  CHECK(z(1, 0) == -2.0);
  CHECK(z.cwiseAbs().sum() == 6.0);
  CHECK(m.mask().count() == 2);
  CHECK_FALSE(m.fully_observed());
}
