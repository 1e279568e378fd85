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

// Times the serial reference E-step against the OpenMP kernel on one
// synthetic instance, for 1, 2, 4, ... threads up to omp_get_max_threads().

#include <algorithm>
#include <cstdio>
#include <vector>

#include <CLI11.hpp>
#include <omp.h>

#include "ebmc/em_solver.hpp"
#include "ebmc/estep.hpp"
#include "ebmc/synth.hpp"

int main(int argc, char** argv) {
  CLI::App app{"E-step kernel benchmark"};
  ebmc::ExperimentSpec spec;
  int repeats = 3;
  app.add_option("--p", spec.p)->capture_default_str();
  app.add_option("--q", spec.q)->capture_default_str();
  app.add_option("--rank", spec.rank)->capture_default_str();
  app.add_option("--fill", spec.fill)->capture_default_str();
  app.add_option("--repeats", repeats)->capture_default_str();
  CLI11_PARSE(app, argc, argv);
  spec.rank = std::min({spec.rank, spec.p, spec.q});

  const ebmc::SyntheticInstance inst = ebmc::gen_instance(spec, 1);
  ebmc::EmConfig cfg;
  cfg.sigma0_sq = 1.0;
  const ebmc::InitialState init = ebmc::initialize(inst.data, cfg);

  auto best_of = [&](auto&& kernel) {
    double best = 1e300;
    for (int k = 0; k < repeats; ++k) {
      const double t0 = omp_get_wtime();
      kernel();
      best = std::min(best, omp_get_wtime() - t0);
    }
    return best;
  };

  ebmc::EStepStats ref, par;
  const double t_ref = best_of([&] { ref = ebmc::estep_reference(inst.data, init.params); });
  std::printf("p=%ld q=%ld fill=%.2f\n", static_cast<long>(spec.p), static_cast<long>(spec.q),
              spec.fill);
  std::printf("%-22s %10.4f s\n", "reference (serial)", t_ref);

  const int max_threads = omp_get_max_threads();
  for (int threads = 1; threads <= max_threads; threads *= 2) {
    omp_set_num_threads(threads);
    const double t = best_of([&] { par = ebmc::estep_parallel(inst.data, init.params); });
    std::printf("parallel threads=%-5d %10.4f s  speedup %.2fx\n", threads, t, t_ref / t);
  }
  omp_set_num_threads(max_threads);

  const double mean_diff = (ref.posterior_mean - par.posterior_mean).cwiseAbs().maxCoeff();
  const double cov_diff = (ref.cov_sum - par.cov_sum).cwiseAbs().maxCoeff() /
                          std::max(ref.cov_sum.cwiseAbs().maxCoeff(), 1e-300);
  std::printf("max |mean diff| = %.3e, rel cov_sum diff = %.3e, loglik diff = %.3e\n", mean_diff,
              cov_diff, ref.loglik - par.loglik);
  return (mean_diff < 1e-8 && cov_diff < 1e-8) ? 0 : 1;
}
