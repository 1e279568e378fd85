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

#include "ebmc/model.hpp"

#include <atomic>
#include <cmath>
#include <string>
#include <vector>

#include "ebmc/errors.hpp"

namespace ebmc {

namespace {

void check_shape(const Hyperparameters& params) {
  if (params.prior_cov.rows() != params.prior_cov.cols()) {
    throw InvalidInput("prior covariance must be square");
  }
  if (!(params.noise_var > 0.0) || !std::isfinite(params.noise_var)) {
    throw InvalidInput("noise variance must be positive");
  }
}

}  // namespace

void Hyperparameters::validate() const {
  check_shape(*this);
  const Eigen::MatrixXd& s = prior_cov;
  if (!s.allFinite()) throw InvalidInput("prior covariance not finite");
  const double scale = std::max(s.cwiseAbs().maxCoeff(), 1e-300);
  if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw InvalidInput("prior covariance not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s,
                                                     Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = eig.eigenvalues();
  if (ev.size() > 0 && ev(0) < -1e-10 * std::max(ev(ev.size() - 1), 0.0)) {
    throw InvalidInput("prior covariance not positive semidefinite");
  }
}

RowPosterior row_posterior(std::span<const Index> cols,
                           std::span<const double> values,
                           const Hyperparameters& params) {
  check_shape(params);
  if (cols.size() != values.size()) {
    throw InvalidInput("row_posterior: index/value length mismatch");
  }
  const Eigen::MatrixXd& sigma = params.prior_cov;
  const Index q = sigma.rows();
  const Index k = static_cast<Index>(cols.size());
  for (Index c : cols) {
    if (c < 0 || c >= q) throw InvalidInput("row_posterior: column out of range");
  }

  RowPosterior post;
  if (k == 0) {
    post.mean = Eigen::VectorXd::Zero(q);
    post.cov = sigma;
    return post;
  }

  // P[w,w] = (s2 I + Sigma[w,w])^-1 applied through its Cholesky factor.
  Eigen::MatrixXd shifted(k, k);
  Eigen::MatrixXd sigma_w(k, q);  // Sigma[w, :]
  Eigen::VectorXd b = Eigen::VectorXd::Zero(q);
  for (Index a = 0; a < k; ++a) {
    sigma_w.row(a) = sigma.row(cols[a]);
    for (Index c = 0; c < k; ++c) shifted(a, c) = sigma(cols[a], cols[c]);
    shifted(a, a) += params.noise_var;
    if (!std::isfinite(values[a])) throw InvalidInput("row_posterior: non-finite value");
    b(cols[a]) = values[a];
  }
  Eigen::LLT<Eigen::MatrixXd> llt(shifted);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("row_posterior: factorization of s2 I + Sigma[w,w] failed");
  }
  // Sigma P Sigma = X^T X with X = L^-1 Sigma[w, :].
  Eigen::MatrixXd x = llt.matrixL().solve(sigma_w);
  post.cov = sigma;
  post.cov.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose(), -1.0);
  post.cov = post.cov.selfadjointView<Eigen::Lower>();
  post.mean = post.cov * b / params.noise_var;
  return post;
}

RowPosterior row_posterior(std::span<const Entry> row,
                           const Hyperparameters& params) {
  std::vector<Index> cols;
  std::vector<double> values;
  cols.reserve(row.size());
  values.reserve(row.size());
  for (const Entry& e : row) {
    cols.push_back(e.col);
    values.push_back(e.value);
  }
  return row_posterior(cols, values, params);
}

double row_loglik(std::span<const Entry> row, const Hyperparameters& params) {
  const Index k = static_cast<Index>(row.size());
  if (k == 0) return 0.0;
  const Eigen::MatrixXd& sigma = params.prior_cov;
  Eigen::MatrixXd shifted(k, k);
  Eigen::VectorXd y(k);
  for (Index a = 0; a < k; ++a) {
    y(a) = row[a].value;
    for (Index c = 0; c < k; ++c) shifted(a, c) = sigma(row[a].col, row[c].col);
    shifted(a, a) += params.noise_var;
  }
  Eigen::LLT<Eigen::MatrixXd> llt(shifted);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("observed_loglik: factorization failed at row " +
                         std::to_string(row[0].row));
  }
  const double logdet = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  const Eigen::VectorXd half = llt.matrixL().solve(y);
  constexpr double kLog2Pi = 1.8378770664093454836;
  return -0.5 * (static_cast<double>(k) * kLog2Pi + logdet + half.squaredNorm());
}

double observed_loglik(const ObservedMatrix& data,
                       const Hyperparameters& params) {
  check_shape(params);
  if (params.dim() != data.cols()) {
    throw InvalidInput("observed_loglik: dimension mismatch");
  }
  const Index p = data.rows();
  std::vector<double> per_row(static_cast<std::size_t>(p), 0.0);
  std::atomic<Index> failed{-1};
#pragma omp parallel for schedule(dynamic, 16)
  for (Index i = 0; i < p; ++i) {
    try {
      per_row[i] = row_loglik(data.row(i), params);
    } catch (const NumericalError&) {
      Index expected = -1;
      failed.compare_exchange_strong(expected, i);
    }
  }
  if (failed.load() >= 0) {
    throw NumericalError("observed_loglik: factorization failed at row " +
                         std::to_string(failed.load()));
  }
  double total = 0.0;
  for (double v : per_row) total += v;
  return total;
}

}  // namespace ebmc
