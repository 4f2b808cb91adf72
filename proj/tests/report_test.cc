// Copyright 2026 The Gridshade Authors
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


#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "gridshade/errors.h"
#include "gridshade/report.h"
#include "gridshade/scenario.h"
#include "gridshade/sim.h"
#include "test_util.h"

namespace gridshade {
namespace {

namespace fs = std::filesystem;
using testing::DataPath;
using testing::MakeTopology;

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

std::string ReadFile(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Two nodes, one 24 h slot; node 1 is blacked out and idle on its battery.
DayResult OneSlotDay(double gbps, double node1_battery_kwh) {
  Topology t = MakeTopology(2, {{0, 1, 160.0}});
  t.nodes[1].equipment.battery_kwh = node1_battery_kwh;
  Scenario s;
  s.name = "one-slot";
  s.weights = Weso1Weights();
  s.profile = DiurnalProfile{24.0, {1.0}};
  s.solver = SolverMode::kExact;
  TrafficMatrix d;
  if (gbps > 0.0) d.set(0, 1, gbps);
  s.busy_hour_demands = d;
  s.blackouts = {{1, 0.0, 24.0}};
  return RunDay(t, s);
}

TEST(WritePowerCsv, OneRowPerSlotAndNode) {
  const DayResult day = OneSlotDay(0.0, 10.0);
  std::ostringstream os;
  WritePowerCsv(day, os);
  const auto lines = Lines(os.str());
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0], kPowerCsvHeader);
  EXPECT_EQ(lines[1], "0.000000,0,0.000000,0.167500,0.000000,0.000000");
  EXPECT_EQ(lines[2], "0.000000,1,0.000000,0.000000,0.167500,5.980000");
}

TEST(WritePowerCsv, UnpoweredNodeRowIsZeroWithResidualKept) {
  // 1 kWh over 24 h cannot light node 1, so nothing is drawn from it.
  const DayResult day = OneSlotDay(10.0, 1.0);
  std::ostringstream os;
  WritePowerCsv(day, os);
  EXPECT_EQ(Lines(os.str())[2], "0.000000,1,0.000000,0.000000,0.000000,1.000000");
}

TEST(WriteMetricsCsv, Shape) {
  const DayResult day = OneSlotDay(10.0, 20.0);
  std::ostringstream os;
  WriteMetricsCsv(day, os);
  const auto lines = Lines(os.str());
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0], kMetricsCsvHeader);
  EXPECT_EQ(lines[1], "0.000000,0,0.000000,0.000000,1.000000,1");
}

TEST(WriteCsv, ByteIdenticalAcrossRuns) {
  std::ostringstream a, b, c, d;
  WritePowerCsv(OneSlotDay(25.0, 20.0), a);
  WritePowerCsv(OneSlotDay(25.0, 20.0), b);
  WriteMetricsCsv(OneSlotDay(25.0, 20.0), c);
  WriteMetricsCsv(OneSlotDay(25.0, 20.0), d);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(c.str(), d.str());
  EXPECT_THROW(WritePowerCsv(OneSlotDay(0.0, 1.0), "/nonexistent/dir/power.csv"),
               InputError);
}

TEST(Summarize, BlockingLines) {
  const std::string idle = Summarize(OneSlotDay(0.0, 10.0));
  EXPECT_NE(idle.find("day volume blocking 0.000"), std::string::npos);
  EXPECT_NE(idle.find("day count blocking 0.000"), std::string::npos);

  const std::string blocked = Summarize(OneSlotDay(10.0, 1.0));
  EXPECT_NE(blocked.find("day volume blocking 1.000"), std::string::npos);
  EXPECT_NE(blocked.find("day count blocking 1.000"), std::string::npos);
}

TEST(Summarize, BatteryUsedIsInitialMinusFinal) {
  const DayResult day = OneSlotDay(0.0, 10.0);
  const std::string text = Summarize(day);
  // 167.5 W for 24 h.
  EXPECT_NE(text.find("   1             4.020               5.980"), std::string::npos)
      << text;
}

TEST(Sha256, KnownDigest) {
  EXPECT_EQ(Sha256Hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(Sha256Hex(""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::path(::testing::TempDir()) /
            ("gridshade_cli_" +
             std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  int Run(std::vector<std::string> args) {
    args.insert(args.begin(), "gridshade");
    std::vector<const char*> argv;
    for (const std::string& a : args) argv.push_back(a.c_str());
    out_.str("");
    err_.str("");
    return CliMain(static_cast<int>(argv.size()), argv.data(), out_, err_);
  }

  fs::path root_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST_F(Cli, WritesAllOutputs) {
  const fs::path out = root_ / "run";
  ASSERT_EQ(Run({"--topology", DataPath("italy21.json"), "--scenario",
                 DataPath("scenarios/weso1.json"), "--out", out.string()}),
            0)
      << err_.str();
  for (const char* f : {"power.csv", "metrics.csv", "summary.txt", "manifest.json",
                        "timing.json"}) {
    EXPECT_TRUE(fs::exists(out / f)) << f;
  }
  EXPECT_EQ(Lines(ReadFile(out / "power.csv")).size(), 1u + 12u * 21u);
  const auto manifest = nlohmann::json::parse(ReadFile(out / "manifest.json"));
  EXPECT_EQ(manifest["topology"]["sha256"], Sha256File(DataPath("italy21.json")));
  EXPECT_EQ(manifest["outputs"]["power.csv"], Sha256File((out / "power.csv").string()));
  EXPECT_EQ(manifest["solver_mode"], "heuristic");
  EXPECT_EQ(manifest["version"], ToolVersion());
}

TEST_F(Cli, MissingScenarioExitsOneNamingTheFile) {
  EXPECT_EQ(Run({"--topology", DataPath("italy21.json"), "--scenario",
                 (root_ / "absent.json").string(), "--out", (root_ / "x").string()}),
            1);
  EXPECT_NE(err_.str().find("absent.json"), std::string::npos);
}

TEST_F(Cli, ExactOnLargeTopologyRefuses) {
  EXPECT_EQ(Run({"--topology", DataPath("italy21.json"), "--scenario",
                 DataPath("scenarios/weso1.json"), "--solver", "exact", "--out",
                 (root_ / "x").string()}),
            1);
  EXPECT_NE(err_.str().find("--force"), std::string::npos);
  EXPECT_FALSE(fs::exists(root_ / "x" / "power.csv"));
}

TEST_F(Cli, BadArgumentsExitOne) {
  EXPECT_EQ(Run({"--solver", "quantum"}), 1);
  EXPECT_EQ(Run({"--no-such-flag"}), 1);
  EXPECT_EQ(Run({"--topology", DataPath("italy21.json")}), 1);
  EXPECT_EQ(Run({"--version"}), 0);
  EXPECT_NE(out_.str().find(ToolVersion()), std::string::npos);
}

TEST_F(Cli, RunsAreByteIdentical) {
  const std::vector<std::string> base{"--topology", DataPath("fixtures/ring4.json"),
                                      "--scenario", DataPath("fixtures/weso2.json")};
  std::vector<std::string> a = base, b = base;
  a.insert(a.end(), {"--out", (root_ / "a").string()});
  b.insert(b.end(), {"--out", (root_ / "b").string()});
  ASSERT_EQ(Run(a), 0) << err_.str();
  ASSERT_EQ(Run(b), 0) << err_.str();
  for (const char* f : {"power.csv", "metrics.csv", "summary.txt", "manifest.json"}) {
    EXPECT_EQ(ReadFile(root_ / "a" / f), ReadFile(root_ / "b" / f)) << f;
  }
}

TEST_F(Cli, SeedCheckPasses) {
  EXPECT_EQ(Run({"--seed-check"}), 0) << out_.str();
  EXPECT_NE(out_.str().find("negative control (corrupted lightpath count): detected"),
            std::string::npos);
}

}  // namespace
}  // namespace gridshade
