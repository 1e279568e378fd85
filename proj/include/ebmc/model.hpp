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

// Hierarchical Gaussian model for matrix completion:
//
//   m_i ~ N_q(0, Sigma)            (rows of the latent matrix M)
//   y_ij | m_i ~ N((m_i)_j, s2)    for (i, j) observed
//
// row_posterior and observed_loglik are the only closed-form inference
// kernels; the EM solver and the E-step kernels build on the same algebra.

#ifndef EBMC_MODEL_HPP_
#define EBMC_MODEL_HPP_

#include <span>

#include <Eigen/Dense>

#include "ebmc/observed_matrix.hpp"

namespace ebmc {

/// Model parameters (Sigma, sigma^2).
struct Hyperparameters {
  Eigen::MatrixXd prior_cov;  // Sigma, q x q symmetric PSD
  double noise_var = 1.0;     // sigma^2 > 0

  Index dim() const { return prior_cov.rows(); }

  /// Throws InvalidInput unless prior_cov is square, symmetric to 1e-12
  /// relative, numerically PSD, and noise_var > 0.
  void validate() const;
};

/// Gaussian posterior N(mean, cov) of one latent row.
struct RowPosterior {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

/// Posterior of a latent row given the values observed at `cols` (ascending,
/// may be empty). Applies (s2 I + Sigma[w,w])^-1 through a Cholesky
/// factorization; Sigma itself is never inverted, so it may be singular.
RowPosterior row_posterior(std::span<const Index> cols,
                           std::span<const double> values,
                           const Hyperparameters& params);

/// Convenience overload taking one row slice of an ObservedMatrix.
RowPosterior row_posterior(std::span<const Entry> row,
                           const Hyperparameters& params);

/// log p(Y_Omega | Sigma, sigma^2). Rows with no observations contribute 0;
/// per-row terms are summed in ascending row order.
double observed_loglik(const ObservedMatrix& data,
                       const Hyperparameters& params);

/// Single-row contribution to observed_loglik.
double row_loglik(std::span<const Entry> row, const Hyperparameters& params);

}  // namespace ebmc

#endif  // EBMC_MODEL_HPP_
