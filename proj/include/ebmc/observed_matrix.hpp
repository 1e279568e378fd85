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

#ifndef EBMC_OBSERVED_MATRIX_HPP_
#define EBMC_OBSERVED_MATRIX_HPP_

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace ebmc {

using Index = Eigen::Index;

/// One observed cell, 0-based.
struct Entry {
  Index row;
  Index col;
  double value;

  friend bool operator==(const Entry&, const Entry&) = default;
};

/// A partially observed p x q matrix stored as coordinate triples.
///
/// Entries are kept in canonical row-major order, so the observed column set
/// of every row is a contiguous, ascending slice of `entries()`. Construction
/// rejects out-of-range indices, duplicate cells and non-finite values.
class ObservedMatrix {
 public:
  ObservedMatrix() = default;
  ObservedMatrix(Index rows, Index cols, std::vector<Entry> entries);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  /// |Omega|.
  Index size() const { return static_cast<Index>(entries_.size()); }
  bool empty() const { return entries_.empty(); }

  std::span<const Entry> entries() const { return entries_; }
  /// Observed entries of row `i`, ascending by column.
  std::span<const Entry> row(Index i) const {
    return std::span<const Entry>(entries_).subspan(
        offsets_[i], offsets_[i + 1] - offsets_[i]);
  }
  Index row_count(Index i) const { return offsets_[i + 1] - offsets_[i]; }

  /// True when every cell is observed.
  bool fully_observed() const { return size() == rows_ * cols_; }

  ObservedMatrix transposed() const;

  /// Observed values in place, zeros elsewhere.
  Eigen::MatrixXd zero_filled() const;

  /// Row-major 0/1 observation mask.
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> mask() const;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<Entry> entries_;
  std::vector<std::size_t> offsets_{0};
};

}  // namespace ebmc

#endif  // EBMC_OBSERVED_MATRIX_HPP_
