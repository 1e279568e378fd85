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

#include "ebmc/shrinkage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ebmc/errors.hpp"

namespace ebmc {

namespace {

constexpr double kIllConditioned = 1e12;

double shrink_offset(Index p, Index q) {
  const Index d = p - q - 1;
  if (d <= 0) {
    throw DimensionError("Efron-Morris estimator needs p - q - 1 > 0 (p = " +
                         std::to_string(p) + ", q = " + std::to_string(q) + ")");
  }
  return static_cast<double>(d);
}

void check_finite(const Eigen::MatrixXd& y) {
  if (y.size() == 0) throw InvalidInput("empty matrix");
  if (!y.allFinite()) throw InvalidInput("matrix has non-finite entries");
}

// Relative singular value below which Y is treated as rank deficient.
double rank_tolerance(const Eigen::MatrixXd& y) {
  return static_cast<double>(std::max(y.rows(), y.cols())) *
         std::numeric_limits<double>::epsilon();
}

Eigen::MatrixXd svd_form_tall(const Eigen::MatrixXd& y, bool positive_part) {
  const double d = shrink_offset(y.rows(), y.cols());
  Eigen::BDCSVD<Eigen::MatrixXd> svd(y, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  if (s(s.size() - 1) <= rank_tolerance(y) * s(0)) {
    throw RankDeficient("Efron-Morris: Y is rank deficient");
  }
  Eigen::VectorXd shrunk(s.size());
  for (Index i = 0; i < s.size(); ++i) {
    shrunk(i) = s(i) - d / s(i);
    if (positive_part) shrunk(i) = std::max(shrunk(i), 0.0);
  }
  return svd.matrixU() * shrunk.asDiagonal() * svd.matrixV().transpose();
}

Eigen::MatrixXd direct_form_tall(const Eigen::MatrixXd& y) {
  const double d = shrink_offset(y.rows(), y.cols());
  Eigen::MatrixXd gram = y.transpose() * y;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues()(0);
  const double hi = eig.eigenvalues()(gram.rows() - 1);
  const double tol = rank_tolerance(y);
  if (!(hi > 0.0) || lo <= tol * tol * hi) {
    throw RankDeficient("Efron-Morris: Y^T Y is singular");
  }
  if (hi / lo > kIllConditioned) return svd_form_tall(y, false);
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) return svd_form_tall(y, false);
  // Y (Y^T Y)^-1 = (G^-1 Y^T)^T.
  return y - d * llt.solve(y.transpose()).transpose();
}

}  // namespace

Eigen::MatrixXd efron_morris(const Eigen::MatrixXd& y,
                             const ShrinkageOptions& options) {
  check_finite(y);
  const bool wide = y.rows() < y.cols();
  const Eigen::MatrixXd tall = wide ? Eigen::MatrixXd(y.transpose()) : y;
  Eigen::MatrixXd out = options.positive_part ? svd_form_tall(tall, true)
                                              : direct_form_tall(tall);
  if (wide) out.transposeInPlace();
  return out;
}

Eigen::MatrixXd efron_morris_svd_form(const Eigen::MatrixXd& y,
                                      const ShrinkageOptions& options) {
  check_finite(y);
  const bool wide = y.rows() < y.cols();
  const Eigen::MatrixXd tall = wide ? Eigen::MatrixXd(y.transpose()) : y;
  Eigen::MatrixXd out = svd_form_tall(tall, options.positive_part);
  if (wide) out.transposeInPlace();
  return out;
}

Eigen::MatrixXd bayes_given_sigma(const Eigen::MatrixXd& y,
                                  const Eigen::MatrixXd& sigma) {
  check_finite(y);
  const Index q = y.cols();
  if (sigma.rows() != q || sigma.cols() != q) {
    throw InvalidInput("bayes_given_sigma: Sigma must be q x q");
  }
  Eigen::MatrixXd shifted = Eigen::MatrixXd::Identity(q, q) + sigma;
  Eigen::LLT<Eigen::MatrixXd> llt(shifted);
  if (llt.info() != Eigen::Success) {
    throw InvalidInput("bayes_given_sigma: Sigma is not positive semidefinite");
  }
  // Y - Y (I + Sigma)^-1, with the solve applied on the transpose.
  return y - llt.solve(y.transpose()).transpose();
}

SvsLogDensity log_svs_prior(const Eigen::MatrixXd& m) {
  check_finite(m);
  const bool wide = m.rows() < m.cols();
  const Index p = wide ? m.cols() : m.rows();
  const Index q = wide ? m.rows() : m.cols();
  const double d = shrink_offset(p, q);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  const Eigen::VectorXd& s = svd.singularValues();
  if (s(s.size() - 1) <= rank_tolerance(m) * s(0)) {
    return {std::numeric_limits<double>::infinity(), true};
  }
  // log det(M^T M) = sum_i 2 log sigma_i.
  const double logdet = 2.0 * s.array().log().sum();
  return {-0.5 * d * logdet, false};
}

}  // namespace ebmc
