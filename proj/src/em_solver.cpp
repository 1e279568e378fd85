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

#include "ebmc/em_solver.hpp"

#include <algorithm>
#include <cmath>

#include "ebmc/errors.hpp"
#include "ebmc/estep.hpp"

namespace ebmc {

void EmConfig::validate() const {
  if (sigma0_sq && !(*sigma0_sq > 0.0 && std::isfinite(*sigma0_sq))) {
    throw InvalidInput("sigma0_sq must be positive");
  }
  if (!(eps1 > 0.0)) throw InvalidInput("eps1 must be positive");
  if (!(eps2 > 0.0)) throw InvalidInput("eps2 must be positive");
  if (max_iters < 1) throw InvalidInput("max_iters must be >= 1");
  if (!(jitter >= 0.0)) throw InvalidInput("jitter must be nonnegative");
}

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::kLoglikTol: return "loglik_tol";
    case StopReason::kParamTol: return "param_tol";
    case StopReason::kMaxIters: return "max_iters";
    case StopReason::kLoglikDecrease: return "loglik_decrease";
  }
  return "unknown";
}

InitialState initialize(const ObservedMatrix& data, const EmConfig& config) {
  config.validate();
  if (data.empty()) throw InvalidInput("initialize: no observed entries");
  const Index p = data.rows();
  const Index q = data.cols();

  InitialState init;
  init.completed = data.zero_filled();
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(q, q);
  gram.selfadjointView<Eigen::Lower>().rankUpdate(init.completed.transpose());
  gram = gram.selfadjointView<Eigen::Lower>();
  gram /= static_cast<double>(p);
  const double jitter_eff =
      config.jitter * std::max(1.0, gram.trace() / static_cast<double>(q));
  gram.diagonal().array() += jitter_eff;
  init.params.prior_cov = std::move(gram);

  if (config.sigma0_sq) {
    init.params.noise_var = *config.sigma0_sq;
  } else {
    const auto& entries = data.entries();
    const double n = static_cast<double>(entries.size());
    double mean = 0.0;
    for (const Entry& e : entries) mean += e.value;
    mean /= n;
    double ss = 0.0;
    for (const Entry& e : entries) ss += (e.value - mean) * (e.value - mean);
    const double var = entries.size() > 1 ? ss / (n - 1.0) : 0.0;
    init.params.noise_var = std::max(var, kAutoNoiseFloor);
  }
  return init;
}

Hyperparameters m_step(const Eigen::MatrixXd& posterior_mean,
                       const Eigen::MatrixXd& cov_sum, double residual_sum,
                       Index num_observed) {
  if (num_observed <= 0) throw InvalidInput("m_step: no observed entries");
  const double p = static_cast<double>(posterior_mean.rows());
  Hyperparameters next;
  const Index q = posterior_mean.cols();
  Eigen::MatrixXd mm = Eigen::MatrixXd::Zero(q, q);
  mm.selfadjointView<Eigen::Lower>().rankUpdate(posterior_mean.transpose());
  mm = mm.selfadjointView<Eigen::Lower>();
  Eigen::MatrixXd total = mm + cov_sum;
  next.prior_cov = 0.5 * (total + total.transpose()) / p;
  next.noise_var = std::max(residual_sum / static_cast<double>(num_observed),
                            kNoiseUpdateFloor);
  return next;
}

EmStep em_iterate(const ObservedMatrix& data, const Hyperparameters& params) {
  params.validate();
  if (data.empty()) throw InvalidInput("em_iterate: no observed entries");
  EStepStats stats = estep_parallel(data, params, /*want_cov_diagonals=*/true);
  EmStep step;
  step.params = m_step(stats.posterior_mean, stats.cov_sum, stats.residual_sum,
                       data.size());
  step.completed = std::move(stats.posterior_mean);
  step.cov_diagonals = std::move(stats.cov_diagonals);
  return step;
}

namespace {

FitResult fit_tall(const ObservedMatrix& data, const EmConfig& config) {
  InitialState init = initialize(data, config);
  init.params.validate();

  FitResult result;
  Hyperparameters params = std::move(init.params);
  Eigen::MatrixXd m_old = std::move(init.completed);

  EStepStats current;
  try {
    current = estep_parallel(data, params);
  } catch (const NumericalError& e) {
    throw NumericalError(e.what(), 0);
  }
  result.loglik_trace.push_back(current.loglik);

  for (int it = 1; it <= config.max_iters; ++it) {
    Hyperparameters next = m_step(current.posterior_mean, current.cov_sum,
                                  current.residual_sum, data.size());
    Eigen::MatrixXd m_new = std::move(current.posterior_mean);

    EStepStats upcoming;
    try {
      upcoming = estep_parallel(data, next);
    } catch (const NumericalError& e) {
      throw NumericalError(e.what(), it);
    }
    result.loglik_trace.push_back(upcoming.loglik);
    result.iterations = it;

    const double gain = upcoming.loglik - current.loglik;
    std::optional<StopReason> stop;
    if (gain < -kAscentSlack) {
      stop = StopReason::kLoglikDecrease;
    } else if (gain < config.eps1) {
      stop = StopReason::kLoglikTol;
    } else {
      const double old_norm = m_old.squaredNorm();
      if (old_norm > 0.0 && (m_new - m_old).squaredNorm() / old_norm < config.eps2) {
        stop = StopReason::kParamTol;
      } else if (it == config.max_iters) {
        stop = StopReason::kMaxIters;
      }
    }
    if (stop) {
      result.completed = std::move(m_new);
      result.params = std::move(next);
      result.stop_reason = *stop;
      return result;
    }
    m_old = std::move(m_new);
    params = std::move(next);
    current = std::move(upcoming);
  }
  // Unreachable: the last iteration always sets a stop reason.
  throw NumericalError("EM loop exited without a stop reason");
}

}  // namespace

FitResult fit(const ObservedMatrix& data, const EmConfig& config) {
  config.validate();
  if (data.empty()) throw InvalidInput("fit: no observed entries");
  if (data.rows() >= data.cols()) return fit_tall(data, config);
  FitResult result = fit_tall(data.transposed(), config);
  result.completed.transposeInPlace();
  result.transposed = true;
  return result;
}

}  // namespace ebmc
