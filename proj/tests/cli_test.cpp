// Copyright 2026 The fedchi2 Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// End-to-end checks of the command-line binary: exit-code contract (0
// success, 2 usage/config error, 3 runtime/acceptance failure), CSV shape,
// fingerprint headers, and byte-level determinism under a fixed seed.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include <sys/wait.h>

namespace {

struct CommandResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr combined
};

std::string temp_path(const std::string& name) {
  return testing::TempDir() + "fedchi2_cli_" + name;
}

CommandResult run_tool(const std::string& args, const std::string& tag) {
  const std::string log = temp_path(tag + ".log");
  const std::string cmd = std::string(FEDCHI2_TOOL_PATH) + " " + args + " > " + log + " 2>&1";
  const int status = std::system(cmd.c_str());
  CommandResult res;
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(log, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  res.output = buf.str();
  return res;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  ASSERT_TRUE(out.is_open()) << path;
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  EXPECT_TRUE(in.is_open()) << path;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> data_rows(const std::vector<std::string>& lines) {
  std::vector<std::string> rows;
  for (std::size_t i = 2; i < lines.size(); ++i)  // skip fingerprint + header
    if (!lines[i].empty() && lines[i][0] != '#') rows.push_back(lines[i]);
  return rows;
}

int count_fields(const std::string& row) {
  int fields = 1;
  for (char c : row) fields += c == ',' ? 1 : 0;
  return fields;
}

TEST(CliUsage, ExitCodeTwoOnUsageErrors) {
  EXPECT_EQ(run_tool("", "noargs").exit_code, 2);
  EXPECT_EQ(run_tool("frobnicate", "badsub").exit_code, 2);
  EXPECT_EQ(run_tool("accuracy-sweep", "noout").exit_code, 2);
  EXPECT_EQ(run_tool("accept --suite no-such-suite", "badsuite").exit_code, 2);
  EXPECT_EQ(run_tool("fdr --out " + temp_path("x.csv") + " --config /no/such/file.cfg", "badcfg")
                .exit_code,
            2);
}

TEST(CliUsage, HelpExitsZero) {
  const auto res = run_tool("--help", "help");
  EXPECT_EQ(res.exit_code, 0);
  EXPECT_NE(res.output.find("accuracy-sweep"), std::string::npos);
  EXPECT_NE(res.output.find("rank-check"), std::string::npos);
}

TEST(CliUsage, UnknownConfigKeyRejected) {
  const std::string cfg = temp_path("unknown_key.cfg");
  write_file(cfg, "trails = 3\n");  // typo for `trials`
  const auto res = run_tool("rank-check --config " + cfg + " --out " + temp_path("uk.csv"), "uk");
  EXPECT_EQ(res.exit_code, 2);
  EXPECT_NE(res.output.find("unknown config key"), std::string::npos);
}

TEST(CliAccuracy, DeterministicCsvWithFingerprint) {
  const std::string cfg = temp_path("acc.cfg");
  write_file(cfg,
             "# tiny grid for the integration test\n"
             "datasets = linear\n"
             "n_list = 5\n"
             "ell_list = 10, 20\n"
             "runs = 2\n"
             "m_x = 8\n"
             "m_y = 8\n"
             "samples = 2000\n");
  const std::string out1 = temp_path("acc1.csv");
  const std::string out2 = temp_path("acc2.csv");
  ASSERT_EQ(run_tool("accuracy-sweep --config " + cfg + " --seed 7 --out " + out1, "acc1")
                .exit_code,
            0);
  ASSERT_EQ(run_tool("accuracy-sweep --config " + cfg + " --seed 7 --out " + out2, "acc2")
                .exit_code,
            0);
  const std::string csv = read_file(out1);
  EXPECT_EQ(csv, read_file(out2));  // identical seed, identical bytes

  const auto lines = lines_of(csv);
  ASSERT_GE(lines.size(), 4u);
  EXPECT_EQ(lines[0].rfind("# fedchi2 command=accuracy-sweep", 0), 0u);
  EXPECT_NE(lines[0].find("seed=7"), std::string::npos);
  EXPECT_NE(lines[0].find("ell_list=10,20"), std::string::npos);
  EXPECT_EQ(lines[1], "dataset,n,ell,runs,mean_rel_error,std_rel_error");
  const auto rows = data_rows(lines);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].rfind("linear,5,10,2,", 0), 0u);
  EXPECT_EQ(rows[1].rfind("linear,5,20,2,", 0), 0u);
}

TEST(CliAccuracy, HidingViolationRefusedBeforeOutput) {
  const std::string cfg = temp_path("hiding.cfg");
  write_file(cfg, "datasets = linear\nn_list = 5\nell_list = 50\nm_x = 4\nm_y = 4\n");
  const std::string out = temp_path("hiding.csv");
  const auto res = run_tool("accuracy-sweep --config " + cfg + " --out " + out, "hiding");
  EXPECT_EQ(res.exit_code, 2);
  EXPECT_NE(res.output.find("hiding"), std::string::npos);
  std::ifstream check(out);
  EXPECT_FALSE(check.is_open());  // refused before any output was written
}

TEST(CliAccuracy, ZeroMarginalAbortsWithExitThree) {
  const std::string cfg = temp_path("zero.cfg");
  // 30 samples over a 20x20 grid leave some bin empty on each axis.
  write_file(cfg, "datasets = independent\nn_list = 2\nell_list = 50\nruns = 1\nsamples = 30\n");
  const auto res =
      run_tool("accuracy-sweep --config " + cfg + " --seed 1 --out " + temp_path("zero.csv"),
               "zero");
  EXPECT_EQ(res.exit_code, 3);
  EXPECT_NE(res.output.find("protocol abort"), std::string::npos);
}

TEST(CliRankCheck, CsvShape) {
  const std::string cfg = temp_path("rank.cfg");
  write_file(cfg, "m_x = 8\nm_y = 8\nell = 10\ntrials = 3\nsamples = 2000\n");
  const std::string out = temp_path("rank.csv");
  ASSERT_EQ(run_tool("rank-check --config " + cfg + " --out " + out, "rank").exit_code, 0);
  const auto lines = lines_of(read_file(out));
  ASSERT_GE(lines.size(), 5u);
  EXPECT_EQ(lines[0].rfind("# fedchi2 command=rank-check", 0), 0u);
  EXPECT_EQ(lines[1], "trial,projection_seed,rank,nullspace_dim,margin_dev,sketch_dev");
  const auto rows = data_rows(lines);
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& row : rows) {
    EXPECT_EQ(count_fields(row), 6) << row;
    int trial = -1, rank = -1, null_dim = -1;
    unsigned long long pseed = 0;
    ASSERT_EQ(std::sscanf(row.c_str(), "%d,%llu,%d,%d", &trial, &pseed, &rank, &null_dim), 4);
    EXPECT_LE(rank, 10 + 8 + 8);
    EXPECT_EQ(rank + null_dim, 64);
  }
}

TEST(CliFdr, CsvShapeAndColumns) {
  const std::string cfg = temp_path("fdr.cfg");
  write_file(cfg,
             "replicates = 1\n"
             "steps = 2\n"
             "per_step = 6\n"
             "samples = 300\n");
  const std::string out = temp_path("fdr.csv");
  ASSERT_EQ(run_tool("fdr --config " + cfg + " --seed 5 --out " + out, "fdr").exit_code, 0);
  const auto lines = lines_of(read_file(out));
  ASSERT_GE(lines.size(), 4u);
  EXPECT_EQ(lines[0].rfind("# fedchi2 command=fdr", 0), 0u);
  EXPECT_NE(lines[0].find("ell=300"), std::string::npos);
  EXPECT_EQ(lines[1], "seed,ell,step,rejections,false_rejections,fdr");
  const auto rows = data_rows(lines);
  ASSERT_EQ(rows.size(), 2u);  // one row per step, cumulative
  for (const auto& row : rows) EXPECT_EQ(count_fields(row), 6) << row;
  EXPECT_NE(lines.back().find("# mean_final_fdr="), std::string::npos);
}

TEST(CliCaesar, RecoversShiftOnSmallRun) {
  const std::string cfg = temp_path("caesar.cfg");
  write_file(cfg, "trials = 1\nlength = 2000\nell = 12\nshift = 19\n");
  const std::string out = temp_path("caesar.csv");
  ASSERT_EQ(run_tool("caesar --config " + cfg + " --out " + out, "caesar").exit_code, 0);
  const auto lines = lines_of(read_file(out));
  EXPECT_EQ(lines[1],
            "trial,length,ell,n_clients,true_shift,recovered_shift,success,stat_true,"
            "stat_best_other");
  const auto rows = data_rows(lines);
  ASSERT_EQ(rows.size(), 1u);
  int trial = 0;
  long long length = 0;
  int ell = 0, n_clients = 0, true_shift = 0, recovered = 0, success = 0;
  ASSERT_EQ(std::sscanf(rows[0].c_str(), "%d,%lld,%d,%d,%d,%d,%d", &trial, &length, &ell,
                        &n_clients, &true_shift, &recovered, &success),
            7);
  EXPECT_EQ(true_shift, 19);
  EXPECT_EQ(recovered, 19);
  EXPECT_EQ(success, 1);
  EXPECT_NE(lines.back().find("# success_rate=1.0000"), std::string::npos);
}

TEST(CliFeatsel, OverlapSummaryPresent) {
  const std::string cfg = temp_path("featsel.cfg");
  write_file(cfg,
             "n_features = 8\n"
             "n_correlated = 3\n"
             "n_classes = 10\n"
             "levels = 10\n"
             "docs = 600\n"
             "n_clients = 5\n"
             "ell = 50\n");
  const std::string out = temp_path("featsel.csv");
  ASSERT_EQ(run_tool("featsel --config " + cfg + " --out " + out, "featsel").exit_code, 0);
  const auto lines = lines_of(read_file(out));
  EXPECT_EQ(lines[1],
            "feature,centralized_score,federated_score,in_centralized_top,in_federated_top");
  EXPECT_EQ(data_rows(lines).size(), 8u);
  EXPECT_NE(lines.back().find("# top_k=3 overlap="), std::string::npos);
}

TEST(CliCostSweep, FitsReported) {
  const std::string cfg = temp_path("cost.cfg");
  write_file(cfg, "n_list = 10, 20\nell_list = 50, 100\nm_list = 8, 16\nsamples = 5000\n");
  const std::string out = temp_path("cost.csv");
  ASSERT_EQ(run_tool("cost-sweep --config " + cfg + " --out " + out, "cost").exit_code, 0);
  const std::string csv = read_file(out);
  const auto lines = lines_of(csv);
  EXPECT_EQ(data_rows(lines).size(), 6u);  // 2x2 bytes grid + 2 encode rows
  EXPECT_NE(csv.find("# fit_bytes "), std::string::npos);
  EXPECT_NE(csv.find("# fit_encode "), std::string::npos);
  // Per-client upload volume grows by exactly one field element per unit of
  // sketch width.
  EXPECT_NE(csv.find("# per_ell_vs_field_width ratio=1.000000"), std::string::npos);
}

TEST(CliAccept, SingleSuitePassesAndWritesReport) {
  const std::string out = temp_path("accept.csv");
  const auto res = run_tool("accept --suite mask-cancel --out " + out, "accept");
  EXPECT_EQ(res.exit_code, 0);
  EXPECT_NE(res.output.find("mask-cancel"), std::string::npos);
  EXPECT_NE(res.output.find("PASS"), std::string::npos);
  const auto lines = lines_of(read_file(out));
  ASSERT_GE(lines.size(), 3u);
  EXPECT_EQ(lines[1], "id,name,passed,property_ok,seconds,budget_seconds,detail");
  EXPECT_EQ(lines[2].rfind("2,mask-cancel,1,1,", 0), 0u);
}

}  // namespace
