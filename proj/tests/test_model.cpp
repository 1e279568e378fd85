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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "ebmc/errors.hpp"
#include "ebmc/model.hpp"
#include "test_util.hpp"

using namespace ebmc;
using namespace ebmc::testing;

TEST_CASE("row_posterior with no observations returns the prior") {
  std::mt19937_64 rng(1);
  Hyperparameters params{random_spd(rng, 4), 0.7};
  RowPosterior post = row_posterior(std::span<const Index>{}, std::span<const double>{}, params);
  CHECK(post.mean.isZero(0.0));
  CHECK(post.cov == params.prior_cov);
}

TEST_CASE("row_posterior with identity prior decouples coordinates") {
  Hyperparameters params{Eigen::MatrixXd::Identity(2, 2), 1.0};
  const std::vector<Index> cols{0};
  const std::vector<double> vals{3.0};
  RowPosterior post = row_posterior(cols, vals, params);
  CHECK(post.mean(0) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(post.mean(1) == 0.0);
  CHECK(post.cov(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(post.cov(1, 1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(post.cov(0, 1) == 0.0);
}

TEST_CASE("row_posterior matches the direct-inversion oracle on a q = 4 instance") {
  std::mt19937_64 rng(7);
  Hyperparameters params{random_spd(rng, 4), 0.5};
  const std::vector<Index> cols{0, 2};
  const std::vector<double> vals{1.25, -0.5};
  RowPosterior post = row_posterior(cols, vals, params);
  RowPosterior oracle = direct_inversion_posterior(cols, vals, params.prior_cov, params.noise_var);
  CHECK(rel_err(post.mean, oracle.mean) <= 1e-10);
  CHECK(rel_err(post.cov, oracle.cov) <= 1e-10);
}

TEST_CASE("property: Woodbury form agrees with direct inversion for random q <= 8") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> qdist(1, 8);
  std::uniform_real_distribution<double> s2dist(0.05, 3.0);
  std::normal_distribution<double> n(0.0, 2.0);
  for (int trial = 0; trial < 300; ++trial) {
    const Index q = qdist(rng);
    Hyperparameters params{random_spd(rng, q), s2dist(rng)};
    std::vector<Index> cols = random_subset(rng, q, 0.6);
    std::vector<double> vals;
    for (std::size_t a = 0; a < cols.size(); ++a) vals.push_back(n(rng));
    RowPosterior post = row_posterior(cols, vals, params);
    RowPosterior oracle = direct_inversion_posterior(cols, vals, params.prior_cov, params.noise_var);
    INFO("trial " << trial << " q " << q);
    if (oracle.mean.norm() > 0) CHECK(rel_err(post.mean, oracle.mean) <= 1e-10);
    CHECK(rel_err(post.cov, oracle.cov) <= 1e-10);
  }
}

TEST_CASE("property: posterior covariance never exceeds the prior") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const Index q = 1 + trial % 8;
    // Alternate strictly PD and rank-deficient priors.
    Eigen::MatrixXd sigma = trial % 2 ? random_spd(rng, q) : random_psd_rank(rng, q, 1 + q / 2);
    Hyperparameters params{sigma, 0.3};
    std::vector<Index> cols = random_subset(rng, q, 0.5);
    std::vector<double> vals(cols.size(), 1.0);
    RowPosterior post = row_posterior(cols, vals, params);
    CHECK(min_eigenvalue(post.cov) >= -1e-10);
    CHECK(min_eigenvalue(sigma - post.cov) >= -1e-10);
  }
}

TEST_CASE("full observation under isotropic prior shrinks by c / (1 + c)") {
  for (double c : {0.5, 1.0, 2.0}) {
    Hyperparameters params{c * Eigen::MatrixXd::Identity(3, 3), 1.0};
    const std::vector<Index> cols{0, 1, 2};
    const std::vector<double> vals{1.0, -2.0, 4.0};
    RowPosterior post = row_posterior(cols, vals, params);
    for (Index j = 0; j < 3; ++j) {
      CHECK(post.mean(j) == doctest::Approx(c / (1.0 + c) * vals[j]).epsilon(1e-14));
    }
  }
}

TEST_CASE("diagonal prior leaves unobserved coordinates at zero mean") {
  Eigen::MatrixXd sigma = Eigen::Vector4d(1.0, 2.0, 3.0, 4.0).asDiagonal();
  Hyperparameters params{sigma, 0.5};
  const std::vector<Index> cols{1, 3};
  const std::vector<double> vals{1.0, 1.0};
  RowPosterior post = row_posterior(cols, vals, params);
  CHECK(post.mean(0) == 0.0);
  CHECK(post.mean(2) == 0.0);
  CHECK(post.mean(1) == doctest::Approx(2.0 / 2.5));
}

TEST_CASE("row_posterior reports factorization failure") {
  Eigen::MatrixXd sigma(2, 2);
  sigma << -1.0, 0.0, 0.0, 1.0;
  Hyperparameters params{sigma, 0.5};
  const std::vector<Index> cols{0};
  const std::vector<double> vals{1.0};
  CHECK_THROWS_AS(row_posterior(cols, vals, params), NumericalError);
  CHECK_THROWS_AS(params.validate(), InvalidInput);
}

TEST_CASE("observed_loglik single-entry values") {
  constexpr double kLog2Pi = 1.8378770664093454836;
  {
    ObservedMatrix data(1, 1, {{0, 0, 0.0}});
    Hyperparameters params{Eigen::MatrixXd::Constant(1, 1, 0.75), 0.5};
    CHECK(observed_loglik(data, params) ==
          doctest::Approx(-0.5 * kLog2Pi - 0.5 * std::log(1.25)).epsilon(1e-14));
  }
  {
    // Univariate normal at variance 2: -1/2 log(2 pi) - 1/2 log 2 - y^2 / 4.
    ObservedMatrix data(1, 1, {{0, 0, 2.0}});
    Hyperparameters params{Eigen::MatrixXd::Constant(1, 1, 1.0), 1.0};
    const double oracle = -0.5 * std::log(2.0 * M_PI) - 0.5 * std::log(2.0) - 1.0;
    CHECK(observed_loglik(data, params) == doctest::Approx(oracle).epsilon(1e-14));
  }
}

TEST_CASE("observed_loglik adds over independent rows and ignores empty rows") {
  std::mt19937_64 rng(3);
  Hyperparameters params{random_spd(rng, 3), 0.4};
  ObservedMatrix a(1, 3, {{0, 0, 1.0}, {0, 2, -0.5}});
  ObservedMatrix b(1, 3, {{0, 1, 2.0}});
  ObservedMatrix both(3, 3, {{0, 0, 1.0}, {0, 2, -0.5}, {2, 1, 2.0}});
  CHECK(observed_loglik(both, params) ==
        doctest::Approx(observed_loglik(a, params) + observed_loglik(b, params)).epsilon(1e-14));
}

TEST_CASE("observed_loglik matches dense multivariate normal oracle") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Index q = 2 + trial % 6;
    Eigen::MatrixXd sigma = random_spd(rng, q);
    ObservedMatrix data = random_model_data(rng, 15, q, 0.6, sigma, 0.5);
    Hyperparameters params{sigma, 0.5};
    CHECK(observed_loglik(data, params) ==
          doctest::Approx(loglik_dense_oracle(data, params)).epsilon(1e-11));
  }
}

TEST_CASE("observed_loglik is invariant to entry order") {
  std::mt19937_64 rng(9);
  Eigen::MatrixXd sigma = random_spd(rng, 5);
  ObservedMatrix data = random_model_data(rng, 20, 5, 0.5, sigma, 1.0);
  std::vector<Entry> shuffled(data.entries().begin(), data.entries().end());
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  ObservedMatrix again(20, 5, shuffled);
  Hyperparameters params{sigma, 1.0};
  CHECK(observed_loglik(again, params) == observed_loglik(data, params));
}
