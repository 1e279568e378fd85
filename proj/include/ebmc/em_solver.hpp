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

#ifndef EBMC_EM_SOLVER_HPP_
#define EBMC_EM_SOLVER_HPP_

#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ebmc/model.hpp"
#include "ebmc/observed_matrix.hpp"

namespace ebmc {

/// Floors applied to the noise variance during initialization and updates.
inline constexpr double kAutoNoiseFloor = 1e-8;
inline constexpr double kNoiseUpdateFloor = 1e-12;
/// Log-likelihood drop beyond which the solver stops with kLoglikDecrease.
inline constexpr double kAscentSlack = 1e-8;

struct EmConfig {
  /// Initial noise variance; nullopt means the sample variance of Y_Omega.
  std::optional<double> sigma0_sq;
  double eps1 = 1e-3;  // log-likelihood increase tolerance
  double eps2 = 1e-4;  // relative squared change of M
  int max_iters = 500;
  double jitter = 1e-6;  // ridge on the initial Sigma, scaled with the data

  void validate() const;
};

enum class StopReason { kLoglikTol, kParamTol, kMaxIters, kLoglikDecrease };

std::string_view to_string(StopReason reason);

struct FitResult {
  Eigen::MatrixXd completed;  // M hat, p x q in the caller's orientation
  /// Fitted (Sigma, sigma^2). Sigma is indexed by the columns of the
  /// orientation that was fitted, i.e. by the input rows when `transposed`.
  Hyperparameters params;
  /// Log-likelihood at the initial parameters followed by one value per
  /// EM iteration.
  std::vector<double> loglik_trace;
  StopReason stop_reason = StopReason::kMaxIters;
  int iterations = 0;
  /// The input had p < q and was fitted as its transpose.
  bool transposed = false;
};

struct InitialState {
  Eigen::MatrixXd completed;  // Y_Omega zero-filled
  Hyperparameters params;
};

/// Zero-filled start, Sigma_0 = M_0^T M_0 / p plus scaled jitter, and
/// sigma_0^2 from the config or the observed-entry sample variance.
InitialState initialize(const ObservedMatrix& data, const EmConfig& config);

struct EmStep {
  Eigen::MatrixXd completed;  // posterior means, one row per data row
  Hyperparameters params;     // M-step maximizers
  Eigen::MatrixXd cov_diagonals;  // p x q diagonals of R_i
};

/// One E-step plus M-step from `params`.
EmStep em_iterate(const ObservedMatrix& data, const Hyperparameters& params);

/// Closed-form M-step from E-step statistics.
Hyperparameters m_step(const Eigen::MatrixXd& posterior_mean,
                       const Eigen::MatrixXd& cov_sum, double residual_sum,
                       Index num_observed);

/// Runs EM to convergence. Inputs with fewer rows than columns are fitted
/// transposed and the completion is transposed back.
FitResult fit(const ObservedMatrix& data, const EmConfig& config = {});

}  // namespace ebmc

#endif  // EBMC_EM_SOLVER_HPP_
