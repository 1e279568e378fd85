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

// Random generators and independent oracles shared by the test binaries.

#ifndef EBMC_TESTS_TEST_UTIL_HPP_
#define EBMC_TESTS_TEST_UTIL_HPP_

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "ebmc/model.hpp"
#include "ebmc/observed_matrix.hpp"

namespace ebmc::testing {

inline Eigen::MatrixXd random_normal(std::mt19937_64& rng, Index rows, Index cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = n(rng);
  return m;
}

/// A A^T / q + ridge I, strictly PD for ridge > 0.
inline Eigen::MatrixXd random_spd(std::mt19937_64& rng, Index q, double ridge = 0.1) {
  Eigen::MatrixXd a = random_normal(rng, q, q);
  Eigen::MatrixXd s = a * a.transpose() / static_cast<double>(q);
  s.diagonal().array() += ridge;
  return 0.5 * (s + s.transpose());
}

/// Rank-deficient PSD matrix of the given rank.
inline Eigen::MatrixXd random_psd_rank(std::mt19937_64& rng, Index q, Index rank) {
  Eigen::MatrixXd a = random_normal(rng, q, rank);
  Eigen::MatrixXd s = a * a.transpose();
  return 0.5 * (s + s.transpose());
}

inline Eigen::MatrixXd random_orthogonal(std::mt19937_64& rng, Index n) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(random_normal(rng, n, n));
  return qr.householderQ();
}

/// Random subset of {0..q-1}, ascending, each index kept with probability keep.
inline std::vector<Index> random_subset(std::mt19937_64& rng, Index q, double keep) {
  std::bernoulli_distribution b(keep);
  std::vector<Index> out;
  for (Index j = 0; j < q; ++j)
    if (b(rng)) out.push_back(j);
  return out;
}

/// Observation set with each cell kept independently with probability fill;
/// values drawn from rows m_i ~ N(0, Sigma) plus N(0, s2) noise.
inline ObservedMatrix random_model_data(std::mt19937_64& rng, Index p, Index q, double fill,
                                        const Eigen::MatrixXd& sigma, double s2) {
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  Eigen::MatrixXd rows = random_normal(rng, p, q) * Eigen::MatrixXd(llt.matrixL()).transpose();
  std::normal_distribution<double> n(0.0, std::sqrt(s2));
  std::bernoulli_distribution keep(fill);
  std::vector<Entry> entries;
  for (Index i = 0; i < p; ++i)
    for (Index j = 0; j < q; ++j)
      if (keep(rng)) entries.push_back({i, j, rows(i, j) + n(rng)});
  if (entries.empty()) entries.push_back({0, 0, n(rng)});
  return ObservedMatrix(p, q, std::move(entries));
}

/// Posterior by explicit inversion: R = (Sigma^-1 + s2^-1 D)^-1,
/// mean = s2^-1 R b. Requires Sigma strictly PD.
inline RowPosterior direct_inversion_posterior(const std::vector<Index>& cols,
                                               const std::vector<double>& values,
                                               const Eigen::MatrixXd& sigma, double s2) {
  const Index q = sigma.rows();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(q, q);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(q);
  for (std::size_t a = 0; a < cols.size(); ++a) {
    d(cols[a], cols[a]) = 1.0;
    b(cols[a]) = values[a];
  }
  const Eigen::MatrixXd precision = sigma.fullPivLu().inverse() + d / s2;
  RowPosterior post;
  post.cov = precision.fullPivLu().inverse();
  post.mean = post.cov * b / s2;
  return post;
}

/// Multivariate normal log-density of y under N(0, cov) by explicit
/// determinant and inverse.
inline double mvn_logpdf_dense(const Eigen::VectorXd& y, const Eigen::MatrixXd& cov) {
  const double k = static_cast<double>(y.size());
  const double logdet = std::log(cov.determinant());
  const double quad = y.dot(cov.fullPivLu().inverse() * y);
  return -0.5 * (k * std::log(2.0 * M_PI) + logdet + quad);
}

/// Dense-oracle observed-data log-likelihood, row by row.
inline double loglik_dense_oracle(const ObservedMatrix& data, const Hyperparameters& params) {
  double total = 0.0;
  for (Index i = 0; i < data.rows(); ++i) {
    auto row = data.row(i);
    const Index k = static_cast<Index>(row.size());
    if (k == 0) continue;
    Eigen::MatrixXd cov(k, k);
    Eigen::VectorXd y(k);
    for (Index a = 0; a < k; ++a) {
      y(a) = row[a].value;
      for (Index c = 0; c < k; ++c) cov(a, c) = params.prior_cov(row[a].col, row[c].col);
      cov(a, a) += params.noise_var;
    }
    total += mvn_logpdf_dense(y, cov);
  }
  return total;
}

inline double rel_err(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const double den = std::max(b.norm(), 1e-300);
  return (a - b).norm() / den;
}

inline double min_eigenvalue(const Eigen::MatrixXd& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (s + s.transpose()),
                                                     Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0);
}

}  // namespace ebmc::testing

#endif  // EBMC_TESTS_TEST_UTIL_HPP_
