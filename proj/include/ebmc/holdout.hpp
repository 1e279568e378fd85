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

#ifndef EBMC_HOLDOUT_HPP_
#define EBMC_HOLDOUT_HPP_

#include <cstdint>

#include <Eigen/Dense>

#include "ebmc/em_solver.hpp"
#include "ebmc/observed_matrix.hpp"
#include "ebmc/soft_impute.hpp"
#include "ebmc/synth.hpp"

namespace ebmc {

struct HoldoutConfig {
  Index sample_size = 500'000;
  std::uint64_t seed = 0;
  Algorithm algorithm = Algorithm::kEB;
  EmConfig em;
  SoftImputeConfig soft_impute;
};

struct HoldoutReport {
  /// sqrt(sum_held (M_hat - Y)^2) / sqrt(sum_held Y^2), held-out cells in
  /// row-major order.
  double error = 0.0;
  double wall_time_s = 0.0;
  int iterations = 0;
  ObservedMatrix train;
  Index held_out = 0;
  Eigen::MatrixXd completed;
};

/// Trains on `sample_size` entries drawn uniformly without replacement
/// from `all` and scores the rest. Throws InvalidInput unless
/// 1 <= sample_size < |all|.
HoldoutReport run_holdout(const ObservedMatrix& all, const HoldoutConfig& config);

}  // namespace ebmc

#endif  // EBMC_HOLDOUT_HPP_
