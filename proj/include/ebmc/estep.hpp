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

// E-step kernels. Both produce the sufficient statistics the M-step needs:
//
//   posterior_mean   rows m_i
//   cov_sum          sum_i R_i
//   residual_sum     sum_{(i,j) in Omega} (y_ij - (m_i)_j)^2 + (R_i)_jj
//   loglik           log p(Y_Omega | params)
//
// estep_reference is the serial, literal form: one row_posterior per row with
// the full q x q R_i materialised. estep_parallel is the production kernel.
// It works only with the k x k inverse A_i^-1 of s2 I + Sigma[w,w], using
//
//   m_i          = Sigma[:,w] A_i^-1 y_i
//   (R_i)_jj     = s2 - s2^2 (A_i^-1)_jj          for j in w
//   sum_i R_i    = p Sigma - Sigma S Sigma,   S = sum_i scatter(A_i^-1)
//
// Rows are split into fixed blocks whose partial sums are reduced in block
// order, so results do not depend on the thread count.

#ifndef EBMC_ESTEP_HPP_
#define EBMC_ESTEP_HPP_

#include <Eigen/Dense>

#include "ebmc/model.hpp"
#include "ebmc/observed_matrix.hpp"

namespace ebmc {

struct EStepStats {
  Eigen::MatrixXd posterior_mean;  // p x q
  Eigen::MatrixXd cov_sum;         // q x q, symmetric
  double residual_sum = 0.0;
  double loglik = 0.0;
  /// p x q diagonals of R_i; only filled when requested.
  Eigen::MatrixXd cov_diagonals;
};

EStepStats estep_reference(const ObservedMatrix& data,
                           const Hyperparameters& params,
                           bool want_cov_diagonals = false);

EStepStats estep_parallel(const ObservedMatrix& data,
                          const Hyperparameters& params,
                          bool want_cov_diagonals = false);

/// Rows per reduction block in estep_parallel.
inline constexpr Index kEStepBlockRows = 64;

}  // namespace ebmc

#endif  // EBMC_ESTEP_HPP_
