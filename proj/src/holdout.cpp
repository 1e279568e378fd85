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

#include "ebmc/holdout.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "ebmc/errors.hpp"

namespace ebmc {

HoldoutReport run_holdout(const ObservedMatrix& all, const HoldoutConfig& config) {
  const Index n = all.size();
  if (config.sample_size < 1 || config.sample_size >= n) {
    throw InvalidInput("holdout sample size must lie in [1, " + std::to_string(n - 1) + "]");
  }
  std::vector<std::size_t> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(config.seed);
  std::shuffle(order.begin(), order.end(), rng);

  const auto entries = all.entries();
  std::vector<unsigned char> in_train(entries.size(), 0);
  for (Index k = 0; k < config.sample_size; ++k) in_train[order[k]] = 1;
  std::vector<Entry> train_entries;
  train_entries.reserve(static_cast<std::size_t>(config.sample_size));
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (in_train[k]) train_entries.push_back(entries[k]);
  }

  HoldoutReport report;
  report.train = ObservedMatrix(all.rows(), all.cols(), std::move(train_entries));
  report.held_out = n - config.sample_size;

  SoftImputeConfig si = config.soft_impute;
  si.seed = config.seed;
  const auto start = std::chrono::steady_clock::now();
  Completion c = run_algorithm(report.train, config.algorithm, config.em, si);
  const auto stop = std::chrono::steady_clock::now();
  report.wall_time_s = std::chrono::duration<double>(stop - start).count();
  report.iterations = c.iterations;
  report.completed = std::move(c.completed);

  // Canonical entry order is row-major, so held-out cells are scored in
  // row-major order.
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (in_train[k]) continue;
    const Entry& e = entries[k];
    const double d = report.completed(e.row, e.col) - e.value;
    num += d * d;
    den += e.value * e.value;
  }
  if (!(den > 0.0)) throw InvalidInput("holdout entries are all zero");
  report.error = std::sqrt(num) / std::sqrt(den);
  return report;
}

}  // namespace ebmc
