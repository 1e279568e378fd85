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

// Flat-file formats.
//
// Triple file: header line "row,col,value", then one 1-based "i,j,y" record
// per line. Duplicate cells are rejected. Dense CSV: one matrix row per line,
// no header. Doubles are written in shortest round-trip form.

#ifndef EBMC_TRIPLE_IO_HPP_
#define EBMC_TRIPLE_IO_HPP_

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ebmc/observed_matrix.hpp"

namespace ebmc {

inline constexpr const char* kTripleHeader = "row,col,value";
/// Largest matrix written by write_dense_csv.
inline constexpr Index kMaxDenseCells = 10'000'000;

/// Shortest decimal that parses back to the same double.
std::string format_double(double value);

/// Dimensions default to the largest indices present. Throws ParseError.
ObservedMatrix read_triples(std::istream& in, std::optional<Index> rows = std::nullopt,
                            std::optional<Index> cols = std::nullopt);
ObservedMatrix read_triples_file(const std::filesystem::path& path,
                                 std::optional<Index> rows = std::nullopt,
                                 std::optional<Index> cols = std::nullopt);

void write_triples(std::ostream& out, const ObservedMatrix& data);

/// Throws InvalidInput above kMaxDenseCells.
void write_dense_csv(std::ostream& out, const Eigen::MatrixXd& m);

/// 0-based cells read from a "row,col" file (1-based, header "row,col").
std::vector<std::pair<Index, Index>> read_cell_list(std::istream& in);

/// Writes "row,col,value" records for the requested cells of `m`.
void write_cells(std::ostream& out, const Eigen::MatrixXd& m,
                 const std::vector<std::pair<Index, Index>>& cells);

/// Writes through a temporary sibling and renames it over `path` only after
/// `writer` returns; no partial file is left behind on failure.
void write_file_atomic(const std::filesystem::path& path,
                       const std::function<void(std::ostream&)>& writer);

}  // namespace ebmc

#endif  // EBMC_TRIPLE_IO_HPP_
