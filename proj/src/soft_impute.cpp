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

#include "ebmc/soft_impute.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "ebmc/errors.hpp"

namespace ebmc {

void SoftImputeConfig::validate() const {
  if (grid_size < 1) throw InvalidInput("lambda grid size must be >= 1");
  if (!(validation_percent > 0.0 && validation_percent < 100.0)) {
    throw InvalidInput("validation percent must lie in (0, 100)");
  }
  if (!(tol > 0.0)) throw InvalidInput("soft-impute tol must be positive");
  if (max_iters < 1) throw InvalidInput("soft-impute max_iters must be >= 1");
}

namespace {

// Thresholding of a tall matrix through the eigendecomposition of its q x q
// Gram matrix; only directions with sigma > lambda are kept, so the division
// by sigma is safe.
Eigen::MatrixXd threshold_tall(const Eigen::MatrixXd& z, double lambda) {
  const Index q = z.cols();
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(q, q);
  gram.selfadjointView<Eigen::Lower>().rankUpdate(z.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram.selfadjointView<Eigen::Lower>());
  const Eigen::VectorXd& ev = eig.eigenvalues();  // ascending
  Index keep = 0;
  for (Index j = q - 1; j >= 0; --j) {
    if (std::sqrt(std::max(ev(j), 0.0)) > lambda) ++keep; else break;
  }
  if (keep == 0) return Eigen::MatrixXd::Zero(z.rows(), q);
  const Eigen::MatrixXd v = eig.eigenvectors().rightCols(keep);
  Eigen::VectorXd scale(keep);
  for (Index j = 0; j < keep; ++j) {
    const double s = std::sqrt(ev(q - keep + j));
    scale(j) = (s - lambda) / s;
  }
  return (z * v) * scale.asDiagonal() * v.transpose();
}

}  // namespace

Eigen::MatrixXd singular_value_threshold(const Eigen::MatrixXd& z, double lambda) {
  if (!(lambda >= 0.0)) throw InvalidInput("lambda must be nonnegative");
  if (lambda == 0.0) return z;
  if (z.rows() >= z.cols()) return threshold_tall(z, lambda);
  return threshold_tall(z.transpose(), lambda).transpose();
}

double nuclear_norm(const Eigen::MatrixXd& m) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues().sum();
}

double soft_impute_objective(const ObservedMatrix& data, const Eigen::MatrixXd& m,
                             double lambda) {
  double sse = 0.0;
  for (const Entry& e : data.entries()) {
    const double r = e.value - m(e.row, e.col);
    sse += r * r;
  }
  return 0.5 * sse + lambda * nuclear_norm(m);
}

SoftImputeRun soft_impute(const ObservedMatrix& data, double lambda, double tol,
                          int max_iters, const Eigen::MatrixXd& warm_start) {
  if (data.empty()) throw InvalidInput("soft_impute: no observed entries");
  if (!(tol > 0.0) || max_iters < 1) throw InvalidInput("soft_impute: bad tolerance");
  SoftImputeRun run;
  if (warm_start.size() > 0) {
    if (warm_start.rows() != data.rows() || warm_start.cols() != data.cols()) {
      throw InvalidInput("soft_impute: warm start shape mismatch");
    }
    run.completed = warm_start;
  } else {
    run.completed = Eigen::MatrixXd::Zero(data.rows(), data.cols());
  }
  Eigen::MatrixXd filled;
  for (int t = 1; t <= max_iters; ++t) {
    filled = run.completed;
    for (const Entry& e : data.entries()) filled(e.row, e.col) = e.value;
    Eigen::MatrixXd next = singular_value_threshold(filled, lambda);
    const double change = (next - run.completed).squaredNorm();
    const double base = run.completed.squaredNorm();
    run.completed = std::move(next);
    run.iterations = t;
    if (base > 0.0 ? change / base < tol : change == 0.0) break;
  }
  return run;
}

std::vector<double> lambda_grid(double top, int grid_size) {
  if (grid_size < 1) throw InvalidInput("lambda grid size must be >= 1");
  std::vector<double> grid(static_cast<std::size_t>(grid_size));
  if (grid_size == 1) {
    grid[0] = top;
    return grid;
  }
  const double lo = std::log(top / 1e3);
  const double hi = std::log(top);
  for (int k = 0; k < grid_size; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(grid_size - 1);
    grid[k] = top > 0.0 ? std::exp(hi + t * (lo - hi)) : 0.0;
  }
  grid.front() = top;
  return grid;
}

CvResult cv_select_lambda(const ObservedMatrix& data, const SoftImputeConfig& config) {
  config.validate();
  const auto entries = data.entries();
  const std::size_t n = entries.size();
  const auto n_val = static_cast<std::size_t>(
      std::llround(config.validation_percent / 100.0 * static_cast<double>(n)));
  if (n_val < 1 || n_val >= n) {
    throw InvalidInput("cv_select_lambda: split leaves an empty train or validation set");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(config.seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Entry> val_entries, train_entries;
  val_entries.reserve(n_val);
  train_entries.reserve(n - n_val);
  for (std::size_t k = 0; k < n; ++k) {
    (k < n_val ? val_entries : train_entries).push_back(entries[order[k]]);
  }
  const ObservedMatrix train(data.rows(), data.cols(), std::move(train_entries));
  const ObservedMatrix validation(data.rows(), data.cols(), std::move(val_entries));

  Eigen::BDCSVD<Eigen::MatrixXd> svd(train.zero_filled());
  CvResult result;
  result.grid = lambda_grid(svd.singularValues()(0), config.grid_size);

  Eigen::MatrixXd warm;
  Eigen::MatrixXd best_fit;
  double best_sse = std::numeric_limits<double>::infinity();
  for (double lambda : result.grid) {
    SoftImputeRun run = soft_impute(train, lambda, config.tol, config.max_iters, warm);
    result.iterations += run.iterations;
    double sse = 0.0;
    for (const Entry& e : validation.entries()) {
      const double r = e.value - run.completed(e.row, e.col);
      sse += r * r;
    }
    result.validation_sse.push_back(sse);
    if (sse < best_sse) {
      best_sse = sse;
      result.lambda = lambda;
      best_fit = run.completed;
    }
    warm = std::move(run.completed);
  }
  SoftImputeRun refit = soft_impute(data, result.lambda, config.tol, config.max_iters, best_fit);
  result.iterations += refit.iterations;
  result.completed = std::move(refit.completed);
  return result;
}

}  // namespace ebmc
