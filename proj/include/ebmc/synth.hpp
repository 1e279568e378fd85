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

// Synthetic benchmark harness: M = U V with standard normal factors, additive
// Gaussian noise, a uniformly sampled observation set, and sweeps along one
// experimental axis at a time.

#ifndef EBMC_SYNTH_HPP_
#define EBMC_SYNTH_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ebmc/em_solver.hpp"
#include "ebmc/observed_matrix.hpp"
#include "ebmc/soft_impute.hpp"

namespace ebmc {

enum class Algorithm { kEB, kSoftImpute, kEfronMorris };

std::string_view to_string(Algorithm algorithm);
/// Accepts "eb", "soft-impute" / "soft_impute", "efron-morris" / "efron_morris".
std::optional<Algorithm> parse_algorithm(std::string_view name);

struct ExperimentSpec {
  Index p = 1000;
  Index q = 100;
  Index rank = 10;
  double noise_var = 1.0;
  double fill = 0.5;
  std::uint64_t seed = 0;
  Algorithm algorithm = Algorithm::kEB;
  int replicates = 10;
  EmConfig em;
  /// Start EB at the true noise variance (auto when it is zero) instead of
  /// em.sigma0_sq.
  bool sigma0_from_truth = true;
  SoftImputeConfig soft_impute;

  void validate() const;
  Index num_observed() const;
};

struct SyntheticInstance {
  Eigen::MatrixXd truth;  // M
  ObservedMatrix data;    // Y restricted to Omega
};

/// Draws U (p x r), V (r x q), E (p x q, row-major) and then Omega, in that
/// order, from one mt19937_64 stream seeded with `seed`.
SyntheticInstance gen_instance(const ExperimentSpec& spec, std::uint64_t seed);

/// ||M_hat - M||_F / ||M||_F.
double error1(const Eigen::MatrixXd& estimate, const Eigen::MatrixXd& truth);
/// Same ratio restricted to cells outside `observed`.
double error2(const Eigen::MatrixXd& estimate, const Eigen::MatrixXd& truth,
              const ObservedMatrix& observed);

struct Completion {
  Eigen::MatrixXd completed;
  int iterations = 0;
};

/// Runs one completion algorithm. Efron-Morris needs a fully observed matrix
/// and a noise variance; it shrinks Y / sigma and rescales.
Completion run_algorithm(const ObservedMatrix& data, Algorithm algorithm,
                         const EmConfig& em, const SoftImputeConfig& soft_impute,
                         double noise_var = 1.0);

struct ReplicateResult {
  std::uint64_t seed = 0;
  double error1 = 0.0;
  double error2 = 0.0;
  double wall_time_s = 0.0;
  int iterations = 0;
  std::optional<std::string> failure;
};

struct ExperimentResult {
  double error1 = 0.0;  // means over successful replicates
  double error2 = 0.0;
  double wall_time_s = 0.0;
  double iterations = 0.0;
  int n_succeeded = 0;
  std::vector<ReplicateResult> replicates;
};

/// Seed of replicate `k` for base seed `seed`.
std::uint64_t replicate_seed(std::uint64_t seed, int k);

/// Runs `spec.replicates` independent instances. Timing covers the
/// completion call only.
ExperimentResult run_experiment(const ExperimentSpec& spec);

enum class SweepAxis { kPLong, kPSquare, kRank, kFill, kNoise, kSigma0 };

std::string_view to_string(SweepAxis axis);
std::optional<SweepAxis> parse_axis(std::string_view name);

/// `base` with the axis coordinate set to `value`.
ExperimentSpec apply_axis(ExperimentSpec base, SweepAxis axis, double value);

struct SweepRow {
  double axis_value = 0.0;
  Algorithm algorithm = Algorithm::kEB;
  ExperimentResult result;
};

/// One row per (grid value, algorithm), in that order. Replicate seeds are
/// shared across grid points and algorithms.
std::vector<SweepRow> run_sweep(SweepAxis axis, std::span<const double> grid,
                                const ExperimentSpec& base,
                                std::span<const Algorithm> algorithms);

/// Header axis_value,algorithm,mean_error1,mean_error2,mean_time_s,n_replicates.
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);

}  // namespace ebmc

#endif  // EBMC_SYNTH_HPP_
