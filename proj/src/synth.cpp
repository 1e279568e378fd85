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

#include "ebmc/synth.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>

#include "ebmc/errors.hpp"
#include "ebmc/shrinkage.hpp"
#include "ebmc/triple_io.hpp"

namespace ebmc {

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kEB: return "eb";
    case Algorithm::kSoftImpute: return "soft-impute";
    case Algorithm::kEfronMorris: return "efron-morris";
  }
  return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  if (name == "eb" || name == "EB") return Algorithm::kEB;
  if (name == "soft-impute" || name == "soft_impute") return Algorithm::kSoftImpute;
  if (name == "efron-morris" || name == "efron_morris") return Algorithm::kEfronMorris;
  return std::nullopt;
}

void ExperimentSpec::validate() const {
  if (p < 1 || q < 1) throw InvalidInput("p and q must be positive");
  if (rank < 1 || rank > std::min(p, q)) throw InvalidInput("rank must lie in [1, min(p, q)]");
  if (!(noise_var >= 0.0)) throw InvalidInput("noise variance must be nonnegative");
  if (!(fill > 0.0 && fill <= 1.0)) throw InvalidInput("fill must lie in (0, 1]");
  if (num_observed() < 1) throw InvalidInput("fill * p * q must be at least 1");
  if (replicates < 1) throw InvalidInput("replicates must be >= 1");
  em.validate();
  soft_impute.validate();
}

Index ExperimentSpec::num_observed() const {
  return static_cast<Index>(std::llround(fill * static_cast<double>(p) * static_cast<double>(q)));
}

SyntheticInstance gen_instance(const ExperimentSpec& spec, std::uint64_t seed) {
  spec.validate();
  const Index p = spec.p, q = spec.q, r = spec.rank;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  Eigen::MatrixXd u(p, r), v(r, q);
  for (Index i = 0; i < p; ++i)
    for (Index k = 0; k < r; ++k) u(i, k) = normal(rng);
  for (Index k = 0; k < r; ++k)
    for (Index j = 0; j < q; ++j) v(k, j) = normal(rng);

  SyntheticInstance inst;
  inst.truth = u * v;
  const double sd = std::sqrt(spec.noise_var);
  Eigen::MatrixXd noisy(p, q);
  for (Index i = 0; i < p; ++i)
    for (Index j = 0; j < q; ++j) noisy(i, j) = inst.truth(i, j) + sd * normal(rng);

  // Floyd's sampling of |Omega| distinct cells out of p q.
  const Index total = p * q;
  const Index n = spec.num_observed();
  std::vector<unsigned char> picked(static_cast<std::size_t>(total), 0);
  for (Index j = total - n; j < total; ++j) {
    std::uniform_int_distribution<Index> pick(0, j);
    const Index t = pick(rng);
    if (picked[t]) picked[j] = 1; else picked[t] = 1;
  }
  std::vector<Entry> entries;
  entries.reserve(static_cast<std::size_t>(n));
  for (Index cell = 0; cell < total; ++cell) {
    if (!picked[cell]) continue;
    const Index i = cell / q, j = cell % q;
    entries.push_back({i, j, noisy(i, j)});
  }
  inst.data = ObservedMatrix(p, q, std::move(entries));
  return inst;
}

double error1(const Eigen::MatrixXd& estimate, const Eigen::MatrixXd& truth) {
  if (estimate.rows() != truth.rows() || estimate.cols() != truth.cols()) {
    throw InvalidInput("error1: shape mismatch");
  }
  const double den = truth.squaredNorm();
  if (!(den > 0.0)) throw InvalidInput("error1: true matrix is zero");
  return std::sqrt((estimate - truth).squaredNorm()) / std::sqrt(den);
}

double error2(const Eigen::MatrixXd& estimate, const Eigen::MatrixXd& truth,
              const ObservedMatrix& observed) {
  if (estimate.rows() != truth.rows() || estimate.cols() != truth.cols() ||
      observed.rows() != truth.rows() || observed.cols() != truth.cols()) {
    throw InvalidInput("error2: shape mismatch");
  }
  double num = 0.0, den = 0.0;
  for (Index i = 0; i < truth.rows(); ++i) {
    auto row = observed.row(i);
    std::size_t next = 0;
    for (Index j = 0; j < truth.cols(); ++j) {
      if (next < row.size() && row[next].col == j) {
        ++next;
        continue;
      }
      const double d = estimate(i, j) - truth(i, j);
      num += d * d;
      den += truth(i, j) * truth(i, j);
    }
  }
  if (!(den > 0.0)) throw InvalidInput("error2: no unobserved mass");
  return std::sqrt(num) / std::sqrt(den);
}

Completion run_algorithm(const ObservedMatrix& data, Algorithm algorithm,
                         const EmConfig& em, const SoftImputeConfig& soft_impute,
                         double noise_var) {
  Completion out;
  switch (algorithm) {
    case Algorithm::kEB: {
      FitResult fitted = fit(data, em);
      out.completed = std::move(fitted.completed);
      out.iterations = fitted.iterations;
      break;
    }
    case Algorithm::kSoftImpute: {
      CvResult cv = cv_select_lambda(data, soft_impute);
      out.completed = std::move(cv.completed);
      out.iterations = cv.iterations;
      break;
    }
    case Algorithm::kEfronMorris: {
      if (!data.fully_observed()) {
        throw InvalidInput("efron-morris needs a fully observed matrix");
      }
      const Eigen::MatrixXd y = data.zero_filled();
      if (noise_var > 0.0) {
        const double sd = std::sqrt(noise_var);
        out.completed = sd * efron_morris(y / sd);
      } else {
        out.completed = y;
      }
      break;
    }
  }
  return out;
}

std::uint64_t replicate_seed(std::uint64_t seed, int k) {
  // splitmix64 finalizer.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(k) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  EmConfig em = spec.em;
  if (spec.sigma0_from_truth) {
    em.sigma0_sq = spec.noise_var > 0.0 ? std::optional<double>(spec.noise_var) : std::nullopt;
  }
  ExperimentResult result;
  for (int k = 0; k < spec.replicates; ++k) {
    ReplicateResult rep;
    rep.seed = replicate_seed(spec.seed, k);
    try {
      SyntheticInstance inst = gen_instance(spec, rep.seed);
      SoftImputeConfig si = spec.soft_impute;
      si.seed = rep.seed;
      const auto start = std::chrono::steady_clock::now();
      Completion c = run_algorithm(inst.data, spec.algorithm, em, si, spec.noise_var);
      const auto stop = std::chrono::steady_clock::now();
      rep.wall_time_s = std::chrono::duration<double>(stop - start).count();
      rep.iterations = c.iterations;
      rep.error1 = error1(c.completed, inst.truth);
      rep.error2 = inst.data.fully_observed()
                       ? std::numeric_limits<double>::quiet_NaN()
                       : error2(c.completed, inst.truth, inst.data);
      result.error1 += rep.error1;
      result.error2 += rep.error2;
      result.wall_time_s += rep.wall_time_s;
      result.iterations += rep.iterations;
      ++result.n_succeeded;
    } catch (const std::exception& e) {
      rep.failure = e.what();
    }
    result.replicates.push_back(std::move(rep));
  }
  if (result.n_succeeded > 0) {
    const double n = result.n_succeeded;
    result.error1 /= n;
    result.error2 /= n;
    result.wall_time_s /= n;
    result.iterations /= n;
  } else {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    result.error1 = result.error2 = result.wall_time_s = result.iterations = nan;
  }
  return result;
}

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kPLong: return "p_long";
    case SweepAxis::kPSquare: return "p_square";
    case SweepAxis::kRank: return "rank";
    case SweepAxis::kFill: return "fill";
    case SweepAxis::kNoise: return "noise";
    case SweepAxis::kSigma0: return "sigma0";
  }
  return "unknown";
}

std::optional<SweepAxis> parse_axis(std::string_view name) {
  if (name == "p_long" || name == "p-long" || name == "p") return SweepAxis::kPLong;
  if (name == "p_square" || name == "p-square" || name == "square") return SweepAxis::kPSquare;
  if (name == "rank" || name == "r") return SweepAxis::kRank;
  if (name == "fill") return SweepAxis::kFill;
  if (name == "noise" || name == "sigma2") return SweepAxis::kNoise;
  if (name == "sigma0") return SweepAxis::kSigma0;
  return std::nullopt;
}

ExperimentSpec apply_axis(ExperimentSpec base, SweepAxis axis, double value) {
  auto as_index = [](double v) {
    if (!(v >= 1.0) || v != std::floor(v)) throw InvalidInput("axis value must be a positive integer");
    return static_cast<Index>(v);
  };
  switch (axis) {
    case SweepAxis::kPLong: base.p = as_index(value); break;
    case SweepAxis::kPSquare: base.p = base.q = as_index(value); break;
    case SweepAxis::kRank: base.rank = as_index(value); break;
    case SweepAxis::kFill: base.fill = value; break;
    case SweepAxis::kNoise: base.noise_var = value; break;
    case SweepAxis::kSigma0:
      base.sigma0_from_truth = false;
      base.em.sigma0_sq = value;
      break;
  }
  return base;
}

std::vector<SweepRow> run_sweep(SweepAxis axis, std::span<const double> grid,
                                const ExperimentSpec& base,
                                std::span<const Algorithm> algorithms) {
  if (grid.empty()) throw InvalidInput("sweep grid is empty");
  if (algorithms.empty()) throw InvalidInput("sweep needs at least one algorithm");
  // Validate every cell before running any of them.
  std::vector<ExperimentSpec> specs;
  for (double value : grid) {
    specs.push_back(apply_axis(base, axis, value));
    specs.back().validate();
  }
  std::vector<SweepRow> rows;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    for (Algorithm a : algorithms) {
      ExperimentSpec spec = specs[g];
      spec.algorithm = a;
      rows.push_back({grid[g], a, run_experiment(spec)});
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << "axis_value,algorithm,mean_error1,mean_error2,mean_time_s,n_replicates\n";
  for (const SweepRow& row : rows) {
    out << format_double(row.axis_value) << ',' << to_string(row.algorithm) << ','
        << format_double(row.result.error1) << ',' << format_double(row.result.error2) << ','
        << format_double(row.result.wall_time_s) << ',' << row.result.n_succeeded << '\n';
  }
}

}  // namespace ebmc
