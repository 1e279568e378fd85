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

// Closed-form estimators of a fully observed matrix mean under unit noise,
// Y ~ N_{p,q}(M, I_p, I_q).
//
// The Efron-Morris estimator is defined for the tall orientation p > q + 1.
// Wide inputs are shrunk as their transpose. With p - q - 1 > sigma_i(Y)^2
// the per-singular-value factor is negative; it is applied as is unless
// `positive_part` is set.

#ifndef EBMC_SHRINKAGE_HPP_
#define EBMC_SHRINKAGE_HPP_

#include <Eigen/Dense>

namespace ebmc {

using Index = Eigen::Index;

struct ShrinkageOptions {
  /// Clamp each shrunk singular value at zero.
  bool positive_part = false;
};

/// Y (I - (p - q - 1) (Y^T Y)^-1). Falls back to the singular value form
/// when Y^T Y has condition number above 1e12.
Eigen::MatrixXd efron_morris(const Eigen::MatrixXd& y,
                             const ShrinkageOptions& options = {});

/// Same estimator computed by shrinking each singular value,
/// sigma_i -> (1 - (p - q - 1) / sigma_i^2) sigma_i, keeping singular vectors.
Eigen::MatrixXd efron_morris_svd_form(const Eigen::MatrixXd& y,
                                      const ShrinkageOptions& options = {});

/// Bayes estimator for a known row covariance: Y (I - (I + Sigma)^-1).
Eigen::MatrixXd bayes_given_sigma(const Eigen::MatrixXd& y,
                                  const Eigen::MatrixXd& sigma);

struct SvsLogDensity {
  double value;     // +inf when diverging
  bool divergent;   // M^T M singular
};

/// log det(M^T M)^{-(p - q - 1)/2}, unnormalized.
SvsLogDensity log_svs_prior(const Eigen::MatrixXd& m);

}  // namespace ebmc

#endif  // EBMC_SHRINKAGE_HPP_
