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

// Nuclear-norm regularized completion
//
//   minimize 1/2 sum_{(i,j) in Omega} (Y_ij - M_ij)^2 + lambda ||M||_*
//
// by the soft-impute iteration M <- SVT_lambda(P_Omega(Y) + P_Omega^perp(M)),
// with lambda chosen on a held-out part of Omega.

#ifndef EBMC_SOFT_IMPUTE_HPP_
#define EBMC_SOFT_IMPUTE_HPP_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "ebmc/observed_matrix.hpp"

namespace ebmc {

struct SoftImputeConfig {
  int grid_size = 20;                 // K
  double validation_percent = 20.0;   // eta, in (0, 100)
  double tol = 1e-4;
  int max_iters = 500;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Soft-thresholds the singular values of `z` by `lambda`. lambda == 0 returns
/// `z` unchanged.
Eigen::MatrixXd singular_value_threshold(const Eigen::MatrixXd& z, double lambda);

/// sum of singular values.
double nuclear_norm(const Eigen::MatrixXd& m);

/// 1/2 ||P_Omega(Y - M)||_F^2 + lambda ||M||_*.
double soft_impute_objective(const ObservedMatrix& data, const Eigen::MatrixXd& m,
                             double lambda);

struct SoftImputeRun {
  Eigen::MatrixXd completed;
  int iterations = 0;
};

/// Iterates until ||M_t - M_{t-1}||_F^2 / ||M_{t-1}||_F^2 < tol or
/// `max_iters`. `warm_start`, when non-empty, replaces the zero start.
SoftImputeRun soft_impute(const ObservedMatrix& data, double lambda, double tol,
                          int max_iters,
                          const Eigen::MatrixXd& warm_start = Eigen::MatrixXd());

/// K values log-spaced from top / 1e3 up to top (top itself when K == 1),
/// returned largest first.
std::vector<double> lambda_grid(double top, int grid_size);

struct CvResult {
  double lambda = 0.0;
  Eigen::MatrixXd completed;          // refit on all of Omega
  std::vector<double> grid;           // candidates, largest first
  std::vector<double> validation_sse; // per candidate
  int iterations = 0;                 // total soft-impute iterations
};

/// Seeded train/validation split of Omega, warm-started sweep down the
/// lambda grid, refit on the full Omega at the best lambda.
CvResult cv_select_lambda(const ObservedMatrix& data, const SoftImputeConfig& config);

}  // namespace ebmc

#endif  // EBMC_SOFT_IMPUTE_HPP_
