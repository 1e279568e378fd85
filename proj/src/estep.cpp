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

#include "ebmc/estep.hpp"

#include <algorithm>
#include <atomic>
#include <string>
#include <vector>

#include "ebmc/errors.hpp"

namespace ebmc {

namespace {

void check_dims(const ObservedMatrix& data, const Hyperparameters& params) {
  if (params.prior_cov.rows() != data.cols() ||
      params.prior_cov.cols() != data.cols()) {
    throw InvalidInput("E-step: prior covariance must be q x q");
  }
  if (!(params.noise_var > 0.0)) {
    throw InvalidInput("E-step: noise variance must be positive");
  }
}

// Number of reduction blocks: a function of (p, q) only. Partial q x q sums
// are capped at roughly 32 MiB in total.
Index reduction_blocks(Index p, Index q) {
  const Index by_rows = (p + kEStepBlockRows - 1) / kEStepBlockRows;
  const Index by_memory = std::max<Index>(1, (Index{1} << 22) / std::max<Index>(q * q, 1));
  return std::max<Index>(1, std::min(by_rows, by_memory));
}

}  // namespace

EStepStats estep_reference(const ObservedMatrix& data,
                           const Hyperparameters& params,
                           bool want_cov_diagonals) {
  check_dims(data, params);
  const Index p = data.rows();
  const Index q = data.cols();
  EStepStats out;
  out.posterior_mean.resize(p, q);
  out.cov_sum = Eigen::MatrixXd::Zero(q, q);
  if (want_cov_diagonals) out.cov_diagonals.resize(p, q);
  for (Index i = 0; i < p; ++i) {
    auto row = data.row(i);
    RowPosterior post = row_posterior(row, params);
    out.posterior_mean.row(i) = post.mean.transpose();
    out.cov_sum += post.cov;
    for (const Entry& e : row) {
      const double r = e.value - post.mean(e.col);
      out.residual_sum += r * r + post.cov(e.col, e.col);
    }
    if (want_cov_diagonals) {
      out.cov_diagonals.row(i) = post.cov.diagonal().transpose();
    }
  }
  out.loglik = observed_loglik(data, params);
  return out;
}

EStepStats estep_parallel(const ObservedMatrix& data,
                          const Hyperparameters& params,
                          bool want_cov_diagonals) {
  check_dims(data, params);
  const Index p = data.rows();
  const Index q = data.cols();
  const Eigen::MatrixXd& sigma = params.prior_cov;
  const double s2 = params.noise_var;
  constexpr double kLog2Pi = 1.8378770664093454836;

  const Index nblocks = reduction_blocks(p, q);
  const Index rows_per_block = (p + nblocks - 1) / nblocks;

  EStepStats out;
  out.posterior_mean = Eigen::MatrixXd::Zero(p, q);
  if (want_cov_diagonals) out.cov_diagonals.resize(p, q);
  std::vector<double> row_ll(static_cast<std::size_t>(p), 0.0);
  std::vector<Eigen::MatrixXd> block_s(static_cast<std::size_t>(nblocks));
  std::vector<double> block_res(static_cast<std::size_t>(nblocks), 0.0);
  std::atomic<Index> failed_row{-1};

#pragma omp parallel for schedule(dynamic, 1)
  for (Index b = 0; b < nblocks; ++b) {
    Eigen::MatrixXd s_acc = Eigen::MatrixXd::Zero(q, q);
    double res_acc = 0.0;
    Eigen::MatrixXd shifted;
    Eigen::MatrixXd sigma_cols;  // Sigma[:, w]
    Eigen::VectorXd y;
    Eigen::LLT<Eigen::MatrixXd> llt;
    const Index begin = b * rows_per_block;
    const Index end = std::min(p, begin + rows_per_block);
    for (Index i = begin; i < end; ++i) {
      auto row = data.row(i);
      const Index k = static_cast<Index>(row.size());
      if (k == 0) {
        if (want_cov_diagonals) out.cov_diagonals.row(i) = sigma.diagonal().transpose();
        continue;
      }
      shifted.resize(k, k);
      sigma_cols.resize(q, k);
      y.resize(k);
      for (Index a = 0; a < k; ++a) {
        const Index ca = row[a].col;
        y(a) = row[a].value;
        sigma_cols.col(a) = sigma.col(ca);
        for (Index c = 0; c < k; ++c) shifted(c, a) = sigma(row[c].col, ca);
        shifted(a, a) += s2;
      }
      llt.compute(shifted);
      if (llt.info() != Eigen::Success) {
        Index expected = -1;
        failed_row.compare_exchange_strong(expected, i);
        break;
      }
      const Eigen::VectorXd half = llt.matrixL().solve(y);
      const double logdet = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
      row_ll[i] = -0.5 * (static_cast<double>(k) * kLog2Pi + logdet + half.squaredNorm());

      const Eigen::VectorXd alpha = llt.matrixU().solve(half);
      const Eigen::MatrixXd a_inv = llt.solve(Eigen::MatrixXd::Identity(k, k));
      Eigen::VectorXd mean = sigma_cols * alpha;
      out.posterior_mean.row(i) = mean.transpose();

      for (Index a = 0; a < k; ++a) {
        const Index ca = row[a].col;
        const double r = y(a) - mean(ca);
        res_acc += r * r + (s2 - s2 * s2 * a_inv(a, a));
        for (Index c = 0; c < k; ++c) s_acc(row[c].col, ca) += a_inv(c, a);
      }
      if (want_cov_diagonals) {
        const Eigen::MatrixXd x = llt.matrixL().solve(sigma_cols.transpose());
        out.cov_diagonals.row(i) =
            (sigma.diagonal() - x.colwise().squaredNorm().transpose()).transpose();
      }
    }
    block_s[b] = std::move(s_acc);
    block_res[b] = res_acc;
  }

  if (failed_row.load() >= 0) {
    throw NumericalError("E-step: factorization of s2 I + Sigma[w,w] failed at row " +
                         std::to_string(failed_row.load()));
  }

  Eigen::MatrixXd s_total = Eigen::MatrixXd::Zero(q, q);
  for (Index b = 0; b < nblocks; ++b) {
    s_total += block_s[b];
    out.residual_sum += block_res[b];
  }
  out.cov_sum = static_cast<double>(p) * sigma - sigma * s_total * sigma;
  out.cov_sum = 0.5 * (out.cov_sum + out.cov_sum.transpose()).eval();
  for (double v : row_ll) out.loglik += v;
  return out;
}

}  // namespace ebmc
