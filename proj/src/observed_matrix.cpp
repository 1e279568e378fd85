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

#include "ebmc/observed_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ebmc/errors.hpp"

namespace ebmc {

ObservedMatrix::ObservedMatrix(Index rows, Index cols,
                               std::vector<Entry> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows <= 0 || cols <= 0) {
    throw InvalidInput("observed matrix needs positive dimensions");
  }
  for (const Entry& e : entries_) {
    if (e.row < 0 || e.row >= rows || e.col < 0 || e.col >= cols) {
      throw InvalidInput("entry (" + std::to_string(e.row) + ", " +
                         std::to_string(e.col) + ") out of range");
    }
    if (!std::isfinite(e.value)) {
      throw InvalidInput("non-finite observed value");
    }
  }
  std::sort(entries_.begin(), entries_.end(),
            [](const Entry& a, const Entry& b) {
              return a.row != b.row ? a.row < b.row : a.col < b.col;
            });
  auto dup = std::adjacent_find(entries_.begin(), entries_.end(),
                                [](const Entry& a, const Entry& b) {
                                  return a.row == b.row && a.col == b.col;
                                });
  if (dup != entries_.end()) {
    throw InvalidInput("duplicate entry (" + std::to_string(dup->row) + ", " +
                       std::to_string(dup->col) + ")");
  }
  offsets_.assign(static_cast<std::size_t>(rows) + 1, 0);
  for (const Entry& e : entries_) ++offsets_[e.row + 1];
  for (Index i = 0; i < rows; ++i) offsets_[i + 1] += offsets_[i];
}

ObservedMatrix ObservedMatrix::transposed() const {
  std::vector<Entry> t;
  t.reserve(entries_.size());
  for (const Entry& e : entries_) t.push_back({e.col, e.row, e.value});
  return ObservedMatrix(cols_, rows_, std::move(t));
}

Eigen::MatrixXd ObservedMatrix::zero_filled() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows_, cols_);
  for (const Entry& e : entries_) m(e.row, e.col) = e.value;
  return m;
}

Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> ObservedMatrix::mask()
    const {
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> m =
      Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(
          rows_, cols_, false);
  for (const Entry& e : entries_) m(e.row, e.col) = true;
  return m;
}

}  // namespace ebmc
