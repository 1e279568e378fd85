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

// ebmc: command-line front end for fitting, benchmarking and holdout evaluation.
//
//   ebmc fit ratings.csv --out completed.csv [--report fit.txt]
//   ebmc bench --axis fill --grid 0.3,0.5,0.9 --algorithm eb --out sweep.csv
//   ebmc holdout ratings.csv --sample-size 500000 --sigma0 10
//
// Exit codes: 0 success, 1 I/O or unexpected failure, 2 input parse error,
// 3 invalid flags, 4 numerical failure.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Dense>

#include "ebmc/em_solver.hpp"
#include "ebmc/errors.hpp"
#include "ebmc/holdout.hpp"
#include "ebmc/soft_impute.hpp"
#include "ebmc/synth.hpp"
#include "ebmc/triple_io.hpp"

namespace {

constexpr int kExitIo = 1;
constexpr int kExitParse = 2;
constexpr int kExitFlags = 3;
constexpr int kExitNumerical = 4;

struct FlagError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolverFlags {
  std::string sigma0 = "auto";
  double eps1 = 1e-3;
  double eps2 = 1e-4;
  int max_iters = 500;
  double jitter = 1e-6;
  std::string algorithm = "eb";
  std::uint64_t seed = 0;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--sigma0", sigma0, "Initial noise variance, or 'auto'")->capture_default_str();
    cmd->add_option("--eps1", eps1, "Log-likelihood increase tolerance")->capture_default_str();
    cmd->add_option("--eps2", eps2, "Relative squared change tolerance on M")->capture_default_str();
    cmd->add_option("--max-iters", max_iters, "EM iteration cap")->capture_default_str();
    cmd->add_option("--jitter", jitter, "Ridge added to the initial Sigma")->capture_default_str();
    cmd->add_option("--seed", seed, "Seed for all sampling")->capture_default_str();
  }

  std::optional<double> sigma0_value() const {
    if (sigma0 == "auto") return std::nullopt;
    try {
      std::size_t used = 0;
      const double v = std::stod(sigma0, &used);
      if (used != sigma0.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      throw FlagError("--sigma0 must be a positive number or 'auto'");
    }
  }

  ebmc::EmConfig em_config() const {
    ebmc::EmConfig cfg;
    cfg.sigma0_sq = sigma0_value();
    cfg.eps1 = eps1;
    cfg.eps2 = eps2;
    cfg.max_iters = max_iters;
    cfg.jitter = jitter;
    cfg.validate();
    return cfg;
  }

  ebmc::Algorithm parsed_algorithm() const {
    auto a = ebmc::parse_algorithm(algorithm);
    if (!a) throw FlagError("unknown algorithm '" + algorithm + "'");
    return *a;
  }
};

std::optional<ebmc::Index> positive_or_none(long long v, const char* name) {
  if (v == 0) return std::nullopt;
  if (v < 0) throw FlagError(std::string(name) + " must be positive");
  return static_cast<ebmc::Index>(v);
}

void write_report(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  ebmc::write_file_atomic(path, [&](std::ostream& out) { out << text; });
}

std::string join_trace(const std::vector<double>& trace) {
  std::string s;
  for (std::size_t k = 0; k < trace.size(); ++k) {
    if (k > 0) s += ';';
    s += ebmc::format_double(trace[k]);
  }
  return s;
}

int cmd_fit(const std::string& input, long long p_flag, long long q_flag, const SolverFlags& flags,
            const std::string& out_path, const std::string& report_path,
            const std::string& predict_path) {
  const ebmc::EmConfig em = flags.em_config();
  const ebmc::Algorithm algorithm = flags.parsed_algorithm();
  if (algorithm == ebmc::Algorithm::kEfronMorris) {
    throw FlagError("fit supports --algorithm eb or soft-impute");
  }
  const auto p = positive_or_none(p_flag, "--p");
  const auto q = positive_or_none(q_flag, "--q");

  std::optional<std::vector<std::pair<ebmc::Index, ebmc::Index>>> cells;
  if (!predict_path.empty()) {
    std::ifstream in(predict_path);
    if (!in) throw ebmc::ParseError("cannot open " + predict_path, 0);
    cells = ebmc::read_cell_list(in);
  }
  const ebmc::ObservedMatrix data = ebmc::read_triples_file(input, p, q);
  if (!cells && data.rows() * data.cols() > ebmc::kMaxDenseCells) {
    throw FlagError("matrix has more than " + std::to_string(ebmc::kMaxDenseCells) +
                    " cells; pass --predict with a cell list");
  }
  if (cells) {
    for (const auto& [i, j] : *cells) {
      if (i >= data.rows() || j >= data.cols()) throw FlagError("--predict cell outside the matrix");
    }
  }

  std::ostringstream report;
  Eigen::MatrixXd completed;
  report << "algorithm=" << ebmc::to_string(algorithm) << '\n';
  report << "p=" << data.rows() << "\nq=" << data.cols() << "\nobserved=" << data.size() << '\n';
  if (algorithm == ebmc::Algorithm::kEB) {
    ebmc::FitResult result = ebmc::fit(data, em);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(result.params.prior_cov,
                                                       Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& ev = eig.eigenvalues();
    report << "iterations=" << result.iterations << '\n'
           << "stop_reason=" << ebmc::to_string(result.stop_reason) << '\n'
           << "sigma_sq_hat=" << ebmc::format_double(result.params.noise_var) << '\n'
           << "sigma_hat_eig_min=" << ebmc::format_double(ev(0)) << '\n'
           << "sigma_hat_eig_max=" << ebmc::format_double(ev(ev.size() - 1)) << '\n'
           << "sigma_hat_trace=" << ebmc::format_double(ev.sum()) << '\n'
           << "transposed=" << (result.transposed ? "true" : "false") << '\n'
           << "loglik_final=" << ebmc::format_double(result.loglik_trace.back()) << '\n'
           << "loglik_trace=" << join_trace(result.loglik_trace) << '\n';
    completed = std::move(result.completed);
  } else {
    ebmc::SoftImputeConfig si;
    si.seed = flags.seed;
    ebmc::CvResult cv = ebmc::cv_select_lambda(data, si);
    report << "iterations=" << cv.iterations << '\n'
           << "lambda=" << ebmc::format_double(cv.lambda) << '\n';
    completed = std::move(cv.completed);
  }

  if (!out_path.empty()) {
    ebmc::write_file_atomic(out_path, [&](std::ostream& out) {
      if (cells) ebmc::write_cells(out, completed, *cells);
      else ebmc::write_dense_csv(out, completed);
    });
  }
  std::string rpath = report_path;
  if (rpath.empty() && !out_path.empty()) rpath = out_path + ".report";
  write_report(rpath, report.str());
  return 0;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      grid.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw FlagError("bad grid value '" + item + "'");
    }
  }
  if (grid.empty()) throw FlagError("--grid is empty");
  return grid;
}

std::vector<ebmc::Algorithm> parse_algorithms(const std::string& text) {
  std::vector<ebmc::Algorithm> algs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto a = ebmc::parse_algorithm(item);
    if (!a) throw FlagError("unknown algorithm '" + item + "'");
    algs.push_back(*a);
  }
  if (algs.empty()) throw FlagError("--algorithm is empty");
  return algs;
}

struct BenchFlags {
  std::string axis = "fill";
  std::string grid;
  ebmc::ExperimentSpec base;
  bool sigma0_given = false;
};

int cmd_bench(const BenchFlags& bench, const SolverFlags& flags, int replicates,
              const std::string& out_path) {
  const auto axis = ebmc::parse_axis(bench.axis);
  if (!axis) throw FlagError("unknown axis '" + bench.axis + "'");
  const std::vector<double> grid = parse_grid(bench.grid);
  const std::vector<ebmc::Algorithm> algorithms = parse_algorithms(flags.algorithm);

  ebmc::ExperimentSpec base = bench.base;
  base.seed = flags.seed;
  base.replicates = replicates;
  base.em = flags.em_config();
  base.sigma0_from_truth = !bench.sigma0_given;
  for (double v : grid) ebmc::apply_axis(base, *axis, v).validate();

  const std::vector<ebmc::SweepRow> rows = ebmc::run_sweep(*axis, grid, base, algorithms);
  for (const ebmc::SweepRow& row : rows) {
    std::cout << ebmc::to_string(*axis) << '=' << ebmc::format_double(row.axis_value) << ' '
              << ebmc::to_string(row.algorithm)
              << " error1=" << ebmc::format_double(row.result.error1)
              << " error2=" << ebmc::format_double(row.result.error2)
              << " time_s=" << ebmc::format_double(row.result.wall_time_s)
              << " ok=" << row.result.n_succeeded << '/' << row.result.replicates.size();
    for (const auto& rep : row.result.replicates) {
      if (rep.failure) {
        std::cout << " [failed: " << *rep.failure << ']';
        break;
      }
    }
    std::cout << '\n';
  }
  if (!out_path.empty()) {
    ebmc::write_file_atomic(out_path, [&](std::ostream& out) { ebmc::write_sweep_csv(out, rows); });
  } else {
    ebmc::write_sweep_csv(std::cout, rows);
  }
  return 0;
}

int cmd_holdout(const std::string& input, long long p_flag, long long q_flag,
                long long sample_size, const SolverFlags& flags, const std::string& out_path) {
  ebmc::HoldoutConfig cfg;
  cfg.em = flags.em_config();
  cfg.algorithm = flags.parsed_algorithm();
  if (cfg.algorithm == ebmc::Algorithm::kEfronMorris) {
    throw FlagError("holdout supports --algorithm eb or soft-impute");
  }
  cfg.seed = flags.seed;
  const auto p = positive_or_none(p_flag, "--p");
  const auto q = positive_or_none(q_flag, "--q");
  const ebmc::ObservedMatrix all = ebmc::read_triples_file(input, p, q);
  if (sample_size < 1 || sample_size >= all.size()) {
    throw FlagError("--sample-size must lie in [1, " + std::to_string(all.size() - 1) + "]");
  }
  cfg.sample_size = static_cast<ebmc::Index>(sample_size);
  const ebmc::HoldoutReport r = ebmc::run_holdout(all, cfg);
  std::ostringstream report;
  report << "algorithm=" << ebmc::to_string(cfg.algorithm) << '\n'
         << "observed=" << all.size() << '\n'
         << "train_size=" << r.train.size() << '\n'
         << "held_out=" << r.held_out << '\n'
         << "iterations=" << r.iterations << '\n'
         << "error=" << ebmc::format_double(r.error) << '\n'
         << "wall_time_s=" << ebmc::format_double(r.wall_time_s) << '\n';
  write_report(out_path, report.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matrix completion under a row-wise Gaussian prior"};
  app.require_subcommand(1);

  // fit
  CLI::App* fit_cmd = app.add_subcommand("fit", "Complete a matrix from a triple file");
  std::string fit_input, fit_out, fit_report, fit_predict;
  long long fit_p = 0, fit_q = 0;
  SolverFlags fit_flags;
  fit_cmd->add_option("input", fit_input, "Triple file (row,col,value)")->required();
  fit_cmd->add_option("--p", fit_p, "Rows (default: largest row index)");
  fit_cmd->add_option("--q", fit_q, "Columns (default: largest column index)");
  fit_cmd->add_option("--algorithm", fit_flags.algorithm, "eb or soft-impute")->capture_default_str();
  fit_cmd->add_option("--out", fit_out, "Completed matrix (dense CSV, or triples with --predict)");
  fit_cmd->add_option("--report", fit_report, "Fit report path (default: <out>.report, or stdout)");
  fit_cmd->add_option("--predict", fit_predict, "Cell list (row,col) to write instead of the dense matrix");
  fit_flags.add_to(fit_cmd);

  // bench
  CLI::App* bench_cmd = app.add_subcommand("bench", "Synthetic experiment sweep");
  BenchFlags bench;
  SolverFlags bench_flags;
  int replicates = 10;
  std::string bench_out;
  std::string bench_sigma0;
  bench_cmd->add_option("--axis", bench.axis, "p_long, p_square, rank, fill, noise or sigma0")
      ->capture_default_str();
  bench_cmd->add_option("--grid", bench.grid, "Comma-separated axis values")->required();
  bench_cmd->add_option("--algorithm", bench_flags.algorithm, "Comma-separated: eb, soft-impute, efron-morris")
      ->capture_default_str();
  bench_cmd->add_option("--p", bench.base.p)->capture_default_str();
  bench_cmd->add_option("--q", bench.base.q)->capture_default_str();
  bench_cmd->add_option("--rank", bench.base.rank)->capture_default_str();
  bench_cmd->add_option("--noise", bench.base.noise_var, "True noise variance")->capture_default_str();
  bench_cmd->add_option("--fill", bench.base.fill, "Observed fraction")->capture_default_str();
  bench_cmd->add_option("--replicates", replicates)->capture_default_str();
  bench_cmd->add_option("--out", bench_out, "Sweep CSV (default: stdout)");
  bench_flags.add_to(bench_cmd);

  // holdout
  CLI::App* holdout_cmd = app.add_subcommand("holdout", "Held-out evaluation on observed entries");
  std::string holdout_input, holdout_out;
  long long holdout_p = 0, holdout_q = 0, sample_size = 500'000;
  SolverFlags holdout_flags;
  holdout_cmd->add_option("input", holdout_input, "Triple file (row,col,value)")->required();
  holdout_cmd->add_option("--p", holdout_p);
  holdout_cmd->add_option("--q", holdout_q);
  holdout_cmd->add_option("--sample-size", sample_size, "Training entries")->capture_default_str();
  holdout_cmd->add_option("--algorithm", holdout_flags.algorithm, "eb or soft-impute")->capture_default_str();
  holdout_cmd->add_option("--out", holdout_out, "Report path (default: stdout)");
  holdout_flags.add_to(holdout_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitFlags;
  }

  try {
    if (fit_cmd->parsed()) {
      return cmd_fit(fit_input, fit_p, fit_q, fit_flags, fit_out, fit_report, fit_predict);
    }
    if (bench_cmd->parsed()) {
      bench.sigma0_given = bench_cmd->count("--sigma0") > 0;
      return cmd_bench(bench, bench_flags, replicates, bench_out);
    }
    if (holdout_cmd->parsed()) {
      return cmd_holdout(holdout_input, holdout_p, holdout_q, sample_size, holdout_flags,
                         holdout_out);
    }
  } catch (const ebmc::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const FlagError& e) {
    std::cerr << "invalid flags: " << e.what() << '\n';
    return kExitFlags;
  } catch (const ebmc::InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitFlags;
  } catch (const ebmc::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const ebmc::RankDeficient& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitFlags;
}
