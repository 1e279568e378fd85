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

#include "ebmc/triple_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <system_error>

#include "ebmc/errors.hpp"

namespace ebmc {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

Index parse_index(std::string_view field, long line_no, const char* what) {
  long long v = 0;
  if (!parse_number(field, v)) {
    throw ParseError(std::string("bad ") + what + " index '" + std::string(field) + "'", line_no);
  }
  if (v < 1) throw ParseError(std::string(what) + " index must be >= 1", line_no);
  return static_cast<Index>(v);
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) return std::to_string(value);
  return std::string(buf, ptr);
}

ObservedMatrix read_triples(std::istream& in, std::optional<Index> rows,
                            std::optional<Index> cols) {
  std::string line;
  long line_no = 0;
  if (!std::getline(in, line)) throw ParseError("empty input", 0);
  ++line_no;
  if (trim(line) != kTripleHeader) {
    throw ParseError(std::string("expected header '") + kTripleHeader + "'", line_no);
  }
  std::vector<Entry> entries;
  Index max_row = 0, max_col = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    const auto fields = split_commas(body);
    if (fields.size() != 3) throw ParseError("expected 3 fields", line_no);
    const Index i = parse_index(fields[0], line_no, "row");
    const Index j = parse_index(fields[1], line_no, "col");
    double y = 0.0;
    if (!parse_number(fields[2], y) || !std::isfinite(y)) {
      throw ParseError("bad value '" + std::string(fields[2]) + "'", line_no);
    }
    if (rows && i > *rows) throw ParseError("row index exceeds p", line_no);
    if (cols && j > *cols) throw ParseError("col index exceeds q", line_no);
    max_row = std::max(max_row, i);
    max_col = std::max(max_col, j);
    entries.push_back({i - 1, j - 1, y});
  }
  if (entries.empty()) throw ParseError("no entries", 0);
  try {
    return ObservedMatrix(rows.value_or(max_row), cols.value_or(max_col), std::move(entries));
  } catch (const InvalidInput& e) {
    throw ParseError(e.what(), 0);
  }
}

ObservedMatrix read_triples_file(const std::filesystem::path& path, std::optional<Index> rows,
                                 std::optional<Index> cols) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string(), 0);
  return read_triples(in, rows, cols);
}

void write_triples(std::ostream& out, const ObservedMatrix& data) {
  out << kTripleHeader << '\n';
  for (const Entry& e : data.entries()) {
    out << (e.row + 1) << ',' << (e.col + 1) << ',' << format_double(e.value) << '\n';
  }
}

void write_dense_csv(std::ostream& out, const Eigen::MatrixXd& m) {
  if (m.size() > kMaxDenseCells) {
    throw InvalidInput("dense output exceeds " + std::to_string(kMaxDenseCells) +
                       " cells; request cells explicitly");
  }
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

std::vector<std::pair<Index, Index>> read_cell_list(std::istream& in) {
  std::string line;
  long line_no = 0;
  if (!std::getline(in, line)) throw ParseError("empty cell list", 0);
  ++line_no;
  if (trim(line) != "row,col") throw ParseError("expected header 'row,col'", line_no);
  std::vector<std::pair<Index, Index>> cells;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    const auto fields = split_commas(body);
    if (fields.size() != 2) throw ParseError("expected 2 fields", line_no);
    cells.emplace_back(parse_index(fields[0], line_no, "row") - 1,
                       parse_index(fields[1], line_no, "col") - 1);
  }
  return cells;
}

void write_cells(std::ostream& out, const Eigen::MatrixXd& m,
                 const std::vector<std::pair<Index, Index>>& cells) {
  out << kTripleHeader << '\n';
  for (const auto& [i, j] : cells) {
    if (i < 0 || i >= m.rows() || j < 0 || j >= m.cols()) {
      throw InvalidInput("requested cell (" + std::to_string(i + 1) + ", " +
                         std::to_string(j + 1) + ") outside the matrix");
    }
    out << (i + 1) << ',' << (j + 1) << ',' << format_double(m(i, j)) << '\n';
  }
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::function<void(std::ostream&)>& writer) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  try {
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
      writer(out);
      out.flush();
      if (!out) throw std::runtime_error("write to " + tmp.string() + " failed");
    }
    std::filesystem::rename(tmp, path);
  } catch (...) {
    std::error_code ec;
    std::filesystem::remove(tmp, ec);
    throw;
  }
}

}  // namespace ebmc
