// Copyright 2026 The synthsel Authors.
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


#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>

#include <nlohmann/json.hpp>

#include "test_util.hpp"

namespace synthsel {
namespace {

namespace fs = std::filesystem;
using testing::read_text;
using testing::TempDir;

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string quote(const std::string& s) { return "'" + s + "'"; }

CliResult run_cli(const std::string& args, const TempDir& dir) {
  const fs::path out = dir.path() / "stdout.txt";
  const fs::path err = dir.path() / "stderr.txt";
  const std::string cmd = quote(SYNTHSEL_CLI_PATH) + " " + args + " >" + quote(out.string()) +
                          " 2>" + quote(err.string());
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_text(out);
  r.err = read_text(err);
  return r;
}

fs::path query(const char* name) { return testing::fixture_dir() / "queries" / name; }

// A corpus directory and outcome matrix written by the fixture generator.
class CliCorpus : public ::testing::Test {
 protected:
  void SetUp() override {
    const std::string cmd = quote(SYNTHSEL_MAKE_FIXTURE_PATH) + " " + quote(dir.path().string()) +
                            " >/dev/null";
    ASSERT_EQ(std::system(cmd.c_str()), 0);
  }
  std::string corpus_args() const {
    return quote((dir.path() / "queries").string()) + " --matrix " +
           quote((dir.path() / "matrix.json").string());
  }
  fs::path out(const char* name) const { return dir.path() / name; }

  TempDir dir{"cli"};
};

TEST(Cli, SolveWithTheEnumerator) {
  TempDir dir("cli");
  const CliResult r = run_cli("solve " + quote(query("max2.sl").string()) + " --solver enumerator", dir);
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.starts_with("(define-fun f ")) << r.out;
}

TEST(Cli, MalformedFileIsAUsageError) {
  TempDir dir("cli");
  const fs::path bad = dir.path() / "bad.sl";
  std::ofstream(bad) << "(set-logic LIA)\n(synth-fun f ((x Int)) Int\n";
  const CliResult r = run_cli("solve " + quote(bad.string()) + " --solver enumerator", dir);
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, UnsolvedWithinOneSecond) {
  TempDir dir("cli");
  const CliResult r = run_cli(
      "solve " + quote(query("max3.sl").string()) + " --solver enumerator --time-budget 1", dir);
  EXPECT_EQ(r.code, 1) << r.err;
  EXPECT_EQ(r.out, "UNSOLVED\n");
}

TEST(Cli, BadFlagsAreUsageErrors) {
  TempDir dir("cli");
  const std::string f = quote(query("max2.sl").string());
  EXPECT_EQ(run_cli("solve " + f + " --reward speed", dir).code, 2);
  EXPECT_EQ(run_cli("solve " + f + " --selector fixed-solver", dir).code, 2);
  EXPECT_EQ(run_cli("solve " + f + " --time-budget 0", dir).code, 2);
  EXPECT_EQ(run_cli("frobnicate", dir).code, 2);
  EXPECT_EQ(run_cli("solve " + f + " --model m", dir).code, 2);
}

TEST(Cli, EmptyCorpusIsAUsageError) {
  TempDir dir("cli");
  fs::create_directories(dir.path() / "empty");
  const CliResult r = run_cli("run " + quote((dir.path() / "empty").string()), dir);
  EXPECT_EQ(r.code, 2);
}

TEST_F(CliCorpus, RunIsDeterministic) {
  const std::string base = "run " + corpus_args() + " --seed 4 --out ";
  ASSERT_EQ(run_cli(base + quote(out("a").string()), dir).code, 0);
  ASSERT_EQ(run_cli(base + quote(out("b").string()), dir).code, 0);
  for (const char* f : {"summary.csv", "cumulative_par2.csv", "report.json"}) {
    EXPECT_EQ(read_text(out("a") / f), read_text(out("b") / f)) << f;
  }
  const std::string csv = read_text(out("a") / "summary.csv");
  EXPECT_TRUE(csv.starts_with("selector,reward_kind,percent_solved"));
  const auto report = nlohmann::json::parse(read_text(out("a") / "report.json"));
  EXPECT_EQ(report["runs"][0]["records"].size(), 60u);
}

TEST_F(CliCorpus, MultipleRunsReportMeanAndStddev) {
  const CliResult r = run_cli("run " + corpus_args() + " --runs 3 --out " + quote(out("m").string()), dir);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find(" +- "), std::string::npos);
  EXPECT_NE(r.out.find("over 3 runs"), std::string::npos);
  const auto report = nlohmann::json::parse(read_text(out("m") / "report.json"));
  EXPECT_EQ(report["summary"]["runs"], 3);
  EXPECT_TRUE(report["summary"].contains("stddev_solved"));
  EXPECT_TRUE(fs::exists(out("m") / "cumulative_par2_2.csv"));
}

TEST_F(CliCorpus, LinearSingleSplitsEvenly) {
  const CliResult r = run_cli("run " + corpus_args() + " --selector linear-single --out " +
                            quote(out("l").string()),
                        dir);
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream events(out("l") / "events.jsonl");
  std::string line;
  std::size_t lines = 0;
  while (std::getline(events, line)) {
    ++lines;
    const auto entries = nlohmann::json::parse(line)["record"]["schedule"];
    ASSERT_EQ(entries.size(), 13u);
    for (const auto& e : entries) {
      EXPECT_NEAR(e["time"].get<double>(), 100.0 / 13, 1e-9);
      EXPECT_NEAR(e["cost"].get<double>(), 100000.0 / 13, 1e-6);
    }
  }
  EXPECT_EQ(lines, 60u);
}

TEST_F(CliCorpus, RescoreFromTheCommandLine) {
  ASSERT_EQ(run_cli("run " + corpus_args() + " --reward time --out " + quote(out("t").string()),
                    dir)
                .code,
            0);
  const std::string report = quote((out("t") / "report.json").string());
  const CliResult same = run_cli("rescore " + report + " --reward time", dir);
  EXPECT_EQ(same.code, 0);
  EXPECT_EQ(same.out, read_text(out("t") / "summary.csv"));
  const CliResult cost = run_cli("rescore " + report + " --reward cost --out " +
                               quote(out("c").string()),
                           dir);
  EXPECT_EQ(cost.code, 0);
  EXPECT_TRUE(cost.out.find("\nsingle,cost,") != std::string::npos) << cost.out;
  // the stored per-outcome values already carry the cost reward
  const auto j = nlohmann::json::parse(read_text(out("t") / "report.json"));
  EXPECT_NEAR(j["runs"][0]["summary"]["reward_cost"].get<double>(),
              nlohmann::json::parse(read_text(out("c") / "report.json"))["summary"]["mean"]
                                   ["reward_cost"]
                                       .get<double>(),
              1e-9);

  const fs::path corrupt = dir.path() / "corrupt.json";
  std::ofstream(corrupt) << "{\"runs\": 7";
  EXPECT_EQ(run_cli("rescore " + quote(corrupt.string()), dir).code, 2);
}

TEST_F(CliCorpus, FlagBeatsConfigBeatsDefault) {
  const fs::path cfg = dir.path() / "config.json";
  std::ofstream(cfg) << R"({"selector": "linear-single", "time_budget": 50})";
  ASSERT_EQ(run_cli("run " + corpus_args() + " --config " + quote(cfg.string()) + " --out " +
                        quote(out("cfg").string()),
                    dir)
                .code,
            0);
  auto j = nlohmann::json::parse(read_text(out("cfg") / "report.json"));
  EXPECT_EQ(j["runs"][0]["label"], "linear-single");
  EXPECT_EQ(j["runs"][0]["time_budget"], 50.0);
  EXPECT_EQ(j["runs"][0]["cost_budget"], 100000.0);

  ASSERT_EQ(run_cli("run " + corpus_args() + " --config " + quote(cfg.string()) +
                        " --time-budget 70 --out " + quote(out("flag").string()),
                    dir)
                .code,
            0);
  j = nlohmann::json::parse(read_text(out("flag") / "report.json"));
  EXPECT_EQ(j["runs"][0]["label"], "linear-single");
  EXPECT_EQ(j["runs"][0]["time_budget"], 70.0);
}

}  // namespace
}  // namespace synthsel
