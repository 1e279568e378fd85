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

// Drives the ebmc binary end to end through the shell.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ebmc/synth.hpp"
#include "ebmc/triple_io.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path& workdir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "ebmc_cli_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

fs::path file(const std::string& name) { return workdir() / name; }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream(path) << text;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Runs the CLI with `args`, stdout to `stdout_name`; returns the exit status.
int run(const std::string& args, const std::string& stdout_name = "stdout.txt") {
  const std::string cmd = std::string("\"") + EBMC_CLI_PATH + "\" " + args + " > \"" +
                          file(stdout_name).string() + "\" 2> \"" + file("stderr.txt").string() +
                          "\"";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::map<std::string, std::string> parse_report(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

std::vector<double> split_doubles(const std::string& s, char sep) {
  std::vector<double> out;
  std::istringstream in(s);
  std::string tok;
  while (std::getline(in, tok, sep)) out.push_back(std::stod(tok));
  return out;
}

void write_synthetic(const fs::path& path, double fill) {
  ebmc::ExperimentSpec s;
  s.p = 60;
  s.q = 8;
  s.rank = 2;
  s.fill = fill;
  const ebmc::SyntheticInstance inst = ebmc::gen_instance(s, 4);
  std::ofstream out(path);
  ebmc::write_triples(out, inst.data);
}

int count_lines(const std::string& text) {
  int n = 0;
  for (char c : text) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("empty input file exits with the parse error code") {
  write_text(file("empty.csv"), "");
  CHECK(run("fit " + file("empty.csv").string()) == 2);
  write_text(file("dup.csv"), "row,col,value\n1,1,1\n1,1,2\n");
  CHECK(run("fit " + file("dup.csv").string()) == 2);
  CHECK(run("fit " + file("missing.csv").string()) == 2);
}

TEST_CASE("invalid flags exit with the flag error code") {
  write_synthetic(file("syn.csv"), 0.5);
  const std::string in = file("syn.csv").string();
  CHECK(run("fit " + in + " --eps1 -1") == 3);
  CHECK(run("fit " + in + " --algorithm bogus") == 3);
  CHECK(run("fit " + in + " --sigma0 nope") == 3);
  CHECK(run("fit " + in + " --p 3") == 2);
  CHECK(run("fit " + in + " --no-such-flag") == 3);
  CHECK(run("bench --axis fill --grid 0.5,abc --p 30 --q 5 --rank 2") == 3);
  CHECK(run("bench --axis fill --grid 0.5,1.5 --p 30 --q 5 --rank 2") == 3);
  CHECK(run("bench --axis nowhere --grid 1") == 3);
}

TEST_CASE("single-cell fit reports a monotone trace") {
  write_text(file("one.csv"), "row,col,value\n1,1,2.0\n");
  REQUIRE(run("fit " + file("one.csv").string() + " --sigma0 1 --out " +
              file("one_out.csv").string()) == 0);
  auto kv = parse_report(read_text(file("one_out.csv.report")));
  REQUIRE(kv.count("loglik_trace"));
  std::vector<double> trace = split_doubles(kv["loglik_trace"], ';');
  REQUIRE(trace.size() >= 2);
  for (std::size_t k = 1; k < trace.size(); ++k) CHECK(trace[k] >= trace[k - 1] - 1e-8);
  CHECK(kv["p"] == "1");
  CHECK(kv["q"] == "1");
  CHECK(std::stod(kv["loglik_final"]) == trace.back());
  CHECK(count_lines(read_text(file("one_out.csv"))) == 1);
}

TEST_CASE("repeated fits are byte-identical") {
  write_synthetic(file("syn.csv"), 0.5);
  const std::string in = file("syn.csv").string();
  for (const char* alg : {"eb", "soft-impute"}) {
    REQUIRE(run(std::string("fit ") + in + " --algorithm " + alg + " --seed 3 --out " +
                file("a.csv").string()) == 0);
    REQUIRE(run(std::string("fit ") + in + " --algorithm " + alg + " --seed 3 --out " +
                file("b.csv").string()) == 0);
    const std::string a = read_text(file("a.csv"));
    CHECK(!a.empty());
    CHECK(a == read_text(file("b.csv")));
    CHECK(count_lines(a) == 60);
  }
}

TEST_CASE("report goes to stdout without --out") {
  write_synthetic(file("syn.csv"), 0.5);
  REQUIRE(run("fit " + file("syn.csv").string(), "report.txt") == 0);
  auto kv = parse_report(read_text(file("report.txt")));
  CHECK(kv["algorithm"] == "eb");
  CHECK(kv["observed"] == "240");
  CHECK(kv.count("stop_reason") == 1);
  CHECK(kv["transposed"] == "false");
}

TEST_CASE("predict writes only the requested cells") {
  write_synthetic(file("syn.csv"), 0.5);
  write_text(file("cells.csv"), "row,col\n1,1\n60,8\n");
  REQUIRE(run("fit " + file("syn.csv").string() + " --predict " + file("cells.csv").string() +
              " --out " + file("pred.csv").string()) == 0);
  std::istringstream in(read_text(file("pred.csv")));
  ebmc::ObservedMatrix pred = ebmc::read_triples(in);
  CHECK(pred.size() == 2);
  CHECK(pred.rows() == 60);
  write_text(file("bad_cells.csv"), "row,col\n61,1\n");
  CHECK(run("fit " + file("syn.csv").string() + " --predict " + file("bad_cells.csv").string() +
            " --out " + file("pred2.csv").string()) == 3);
  CHECK(!fs::exists(file("pred2.csv")));
}

TEST_CASE("bench sweep writes one row per grid value") {
  REQUIRE(run("bench --axis fill --grid 0.3,0.5,0.9 --p 40 --q 6 --rank 2 --replicates 2 --out " +
              file("sweep.csv").string()) == 0);
  const std::string csv = read_text(file("sweep.csv"));
  CHECK(count_lines(csv) == 4);
  CHECK(csv.rfind("axis_value,algorithm,mean_error1,mean_error2,mean_time_s,n_replicates\n", 0) == 0);

  REQUIRE(run("bench --axis rank --grid 2 --p 40 --q 6 --replicates 1 --algorithm eb,soft-impute --out " +
              file("single.csv").string()) == 0);
  CHECK(count_lines(read_text(file("single.csv"))) == 3);
}

TEST_CASE("holdout enforces the sample size bound") {
  write_synthetic(file("full.csv"), 1.0);
  const std::string in = file("full.csv").string();
  CHECK(run("holdout " + in + " --sample-size 480") == 3);
  CHECK(run("holdout " + in + " --sample-size 1000") == 3);
  REQUIRE(run("holdout " + in + " --sample-size 479", "holdout.txt") == 0);
  auto kv = parse_report(read_text(file("holdout.txt")));
  CHECK(kv["held_out"] == "1");
  REQUIRE(run("holdout " + in + " --sample-size 300", "holdout.txt") == 0);
  kv = parse_report(read_text(file("holdout.txt")));
  CHECK(kv["train_size"] == "300");
  const double err = std::stod(kv["error"]);
  CHECK(err > 0.0);
  CHECK(err < 1.0);
}
