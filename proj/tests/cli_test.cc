// Copyright 2026 The riskcert Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "riskcert/json_util.h"
#include "riskcert/report.h"
#include "test_problems.h"

namespace riskcert {
namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome RunCli(std::vector<std::string> args) {
  args.insert(args.begin(), "riskcert");
  std::ostringstream out, err;
  const int code = cli::Run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string Temp(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("riskcert_cli_test_" + name))
      .string();
}

std::string Slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int CountLines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

TEST(CliPlanTest, PlanarReportCarriesConfidence) {
  const std::string path = Temp("plan_planar.json");
  const Outcome o = RunCli({"plan", "--env", "planar", "--n", "1000",
                            "--epsilon", "0.01", "--seed", "7", "--out", path});
  ASSERT_EQ(o.code, cli::kExitOk) << o.err;
  EXPECT_EQ(o.err, "");
  EXPECT_EQ(CountLines(o.out), 2);
  EXPECT_EQ(o.out.substr(0, o.out.find('\n')), path);
  const CampaignReport r = ReadReport(path);
  EXPECT_EQ(r.kind, "percentile");
  EXPECT_EQ(r.seed, 7u);
  ASSERT_TRUE(r.bound.has_value());
  EXPECT_GE(r.bound->confidence, 0.99995);
  EXPECT_EQ(r.records.size(), 1000u);
}

TEST(CliPlanTest, UnicycleReportCarriesConfidence) {
  const std::string path = Temp("plan_unicycle.json");
  const Outcome o = RunCli({"plan", "--env", "unicycle", "--n", "100",
                            "--epsilon", "0.05", "--out", path});
  ASSERT_EQ(o.code, cli::kExitOk) << o.err;
  EXPECT_GE(ReadReport(path).bound->confidence, 0.994);
}

TEST(CliPlanTest, InvalidEpsilonIsConfigError) {
  const Outcome o = RunCli({"plan", "--epsilon", "2", "--out", Temp("x.json")});
  EXPECT_EQ(o.code, cli::kExitConfigError);
  EXPECT_EQ(o.out, "");
  EXPECT_NE(o.err, "");
}

TEST(CliPlanTest, ConfigErrorsAreRejectedBeforeWork) {
  EXPECT_EQ(RunCli({"plan", "--env", "mars"}).code, cli::kExitConfigError);
  EXPECT_EQ(RunCli({"plan", "--workers", "0"}).code, cli::kExitConfigError);
  EXPECT_EQ(RunCli({"plan", "--seed", "abc"}).code, cli::kExitConfigError);
  EXPECT_EQ(RunCli({"plan", "--n", "-3"}).code, cli::kExitConfigError);
  EXPECT_EQ(RunCli({"plan", "--bogus"}).code, cli::kExitConfigError);
  EXPECT_EQ(RunCli({}).code, cli::kExitConfigError);
}

TEST(CliPlanTest, HelpExitsCleanly) {
  const Outcome o = RunCli({"--help"});
  EXPECT_EQ(o.code, cli::kExitOk);
  EXPECT_NE(o.out.find("verify-feasibility"), std::string::npos);
}

TEST(CliPlanTest, InfeasibleStartExitsTwo) {
  const std::string env = Temp("blocked_env.json");
  std::ofstream(env) << R"({"obstacles": [[2.0, 2.0]], "start": [2.05, 2.0]})";
  const Outcome o = RunCli({"plan", "--env", env, "--n", "10", "--draw-budget",
                            "100", "--out", Temp("blocked.json")});
  EXPECT_EQ(o.code, cli::kExitInfeasible);
  EXPECT_NE(o.err, "");
}

TEST(CliPlanTest, EnvironmentFilesAreAccepted) {
  const Outcome planar =
      RunCli({"plan", "--env", testing::DataPath("planar_example.json"),
              "--n", "50", "--out", Temp("planar_file.json")});
  EXPECT_EQ(planar.code, cli::kExitOk) << planar.err;
  const CampaignReport r = ReadReport(Temp("planar_file.json"));
  EXPECT_EQ(r.summary["scenario"]["state"], Json::parse("[0.6, 2.0]"));

  const Outcome grid =
      RunCli({"plan", "--env", testing::DataPath("gridworld_example.json"),
              "--out", Temp("grid_file.json")});
  EXPECT_EQ(grid.code, cli::kExitOk) << grid.err;
}

TEST(CliPlanTest, SeedFallsBackToEnvironmentVariable) {
  const std::string a = Temp("seed_flag.json");
  const std::string b = Temp("seed_env.json");
  ASSERT_EQ(RunCli({"plan", "--n", "20", "--seed", "99", "--out", a}).code, 0);
  ::setenv("RISKCERT_SEED", "99", 1);
  const Outcome o = RunCli({"plan", "--n", "20", "--out", b});
  ::unsetenv("RISKCERT_SEED");
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(Slurp(a), Slurp(b));
}

TEST(CliPlanTest, WorkerCountDoesNotChangeReport) {
  const std::string a = Temp("w1.json");
  const std::string b = Temp("w3.json");
  ASSERT_EQ(RunCli({"plan", "--n", "200", "--refine", "--out", a}).code, 0);
  ASSERT_EQ(RunCli({"plan", "--n", "200", "--refine", "--workers", "3",
                    "--out", b})
                .code,
            0);
  EXPECT_EQ(Slurp(a), Slurp(b));
}

TEST(CliPlanTest, ValidationAndHistogram) {
  const std::string path = Temp("plan_validated.json");
  const std::string csv = Temp("plan_validated.csv");
  const Outcome o = RunCli({"plan", "--n", "200", "--validate-n", "1000",
                            "--histogram", csv, "--bins", "12", "--out", path});
  ASSERT_EQ(o.code, 0) << o.err;
  const CampaignReport r = ReadReport(path);
  ASSERT_TRUE(r.validation.has_value());
  EXPECT_EQ(r.validation->n_validation, 1000);
  const std::string text = Slurp(csv);
  EXPECT_EQ(CountLines(text), 1 + 12 + 1);
  EXPECT_NE(text.find("threshold,"), std::string::npos);
}

TEST(CliFeasibilityTest, TrapFileIsRefusedWithCounterexample) {
  const std::string path = Temp("trap.json");
  const Outcome o =
      RunCli({"verify-feasibility", "--env", testing::DataPath("trap_planar.json"),
              "--n", "200", "--controller-n", "50", "--out", path});
  EXPECT_EQ(o.code, cli::kExitCounterexample) << o.err;
  const CampaignReport r = ReadReport(path);
  EXPECT_FALSE(r.certified);
  EXPECT_GE(r.summary["n_counterexamples"].get<int>(), 1);
  ASSERT_GE(r.summary["counterexamples"].size(), 1u);
  EXPECT_TRUE(r.summary["counterexamples"][0].contains("state"));
}

TEST(CliFeasibilityTest, UnicycleCertificate) {
  const std::string path = Temp("feas_unicycle.json");
  const Outcome o = RunCli({"verify-feasibility", "--env", "unicycle", "--n",
                            "460", "--epsilon", "0.01", "--out", path});
  ASSERT_EQ(o.code, cli::kExitOk) << o.err;
  const CampaignReport r = ReadReport(path);
  EXPECT_TRUE(r.certified);
  EXPECT_NEAR(r.bound->confidence, 0.99, 1e-3);
  EXPECT_EQ(r.bound->epsilon, 0.01);
}

TEST(CliRuntimeTest, ZeroSamplesIsConfigError) {
  EXPECT_EQ(RunCli({"verify-runtime", "--n", "0"}).code, cli::kExitConfigError);
  EXPECT_EQ(RunCli({"verify-runtime", "--warmup", "-1"}).code,
            cli::kExitConfigError);
}

TEST(CliRuntimeTest, RepeatedRunsMatchOutsideTimingFields) {
  const std::string a = Temp("rt_a.json");
  const std::string b = Temp("rt_b.json");
  const std::vector<std::string> args{"verify-runtime", "--env", "unicycle",
                                      "--n", "30", "--validate-n", "40",
                                      "--warmup", "2"};
  auto with_out = [&](const std::string& p) {
    auto v = args;
    v.push_back("--out");
    v.push_back(p);
    return v;
  };
  ASSERT_EQ(RunCli(with_out(a)).code, 0);
  ASSERT_EQ(RunCli(with_out(b)).code, 0);
  const Json ja = ReadJsonFile(a);
  const Json jb = ReadJsonFile(b);
  EXPECT_EQ(StripTimingFields(ja), StripTimingFields(jb));
  EXPECT_EQ(ja["records"].size(), 32u);
  for (const auto& r : ja["records"]) EXPECT_GT(r["wall_seconds"].get<double>(), 0.0);
}

TEST(CliSelfTest, PrintsOneLinePerProperty) {
  const Outcome o = RunCli({"selftest", "--trials", "1000"});
  EXPECT_EQ(o.code, cli::kExitOk);
  EXPECT_EQ(CountLines(o.out), 3);
  EXPECT_EQ(o.out.find("FAIL"), std::string::npos);
}

}  // namespace
}  // namespace riskcert
