// Copyright 2026 The fishsim Authors.
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

#include "fishsim/cli.h"
#include "fishsim/config.h"
#include "fishsim/data.h"
#include "json.hpp"

namespace fishsim {
namespace {

struct CliRun {
  int code;
  std::string out, err;
};

CliRun Cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string TempPath(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("fishsim_cli_test_" + name)).string();
}

std::string Slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

TEST(CliTest, UnknownSubcommandIsUsageError) {
  const CliRun r = Cli({"swim-fast"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("simulate"), std::string::npos);
  EXPECT_EQ(Cli({"--seed", "3", "bogus"}).code, kExitUsage);
}

TEST(CliTest, BadFlagFails) {
  EXPECT_NE(Cli({"simulate", "--no-such-flag"}).code, kExitOk);
  EXPECT_NE(Cli({"simulate", "--medium", "honey"}).code, kExitOk);
}

TEST(CliTest, ParseRange) {
  const auto v = ParseRange("0.4:0.1:1.3");
  ASSERT_EQ(v.size(), 10u);
  EXPECT_DOUBLE_EQ(v.front(), 0.4);
  EXPECT_NEAR(v.back(), 1.3, 1e-12);
  EXPECT_EQ(ParseRange("2").size(), 1u);
  EXPECT_THROW(ParseRange("1:0:2"), Error);
  EXPECT_THROW(ParseRange("2:0.1:1"), Error);
}

TEST(ConfigTest, JsonRoundTrip) {
  SwimmerConfig c;
  c.joints.stiffness = 3.25;
  c.fluid.kutta = 1.5;
  c.geometry.segment_count = 4;
  const SwimmerConfig back = ConfigFromJson(ConfigToJson(c));
  EXPECT_EQ(ConfigToJson(back), ConfigToJson(c));
  EXPECT_EQ(ConfigHash(back), ConfigHash(c));
  EXPECT_NE(ConfigHash(c), ConfigHash(SwimmerConfig{}));
}

TEST(ConfigTest, SchemaErrorsNameTheField) {
  auto doc = nlohmann::json::parse(ConfigToJson(SwimmerConfig{}));
  doc["joints"]["stiffnes"] = 1.0;
  try {
    ConfigFromJson(doc.dump());
    FAIL() << "unknown key accepted";
  } catch (const SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find("stiffnes"), std::string::npos);
  }
  doc = nlohmann::json::parse(ConfigToJson(SwimmerConfig{}));
  doc["dt"] = -1.0;
  EXPECT_THROW(ConfigFromJson(doc.dump()), SchemaError);
  doc = nlohmann::json::parse(ConfigToJson(SwimmerConfig{}));
  doc["total_mass"] = "heavy";
  EXPECT_THROW(ConfigFromJson(doc.dump()), SchemaError);
  EXPECT_THROW(ConfigFromJson("{not json"), Error);
}

TEST(CliTest, PrintDefaultParses) {
  const CliRun r = Cli({"config", "print-default"});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_EQ(ConfigHash(ConfigFromJson(r.out)), ConfigHash(SwimmerConfig{}));
}

TEST(CliTest, BadConfigFileFails) {
  const std::string path = TempPath("bad.json");
  auto doc = nlohmann::json::parse(ConfigToJson(SwimmerConfig{}));
  doc["dt"] = 0.5;
  std::ofstream(path) << doc.dump();
  const CliRun r = Cli({"--config", path, "simulate", "--duration", "0.1", "--out", TempPath("x.txt")});
  EXPECT_EQ(r.code, kExitError);
  EXPECT_NE(r.err.find("dt"), std::string::npos);
}

TEST(CliTest, SimulateWritesTrajectoryAndManifest) {
  const std::string path = TempPath("sim.txt");
  const CliRun r = Cli({"--seed", "7", "simulate", "--freq", "1.19", "--duration", "2", "--out", path});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const MarkerTrajectory t = load_trajectory(path);
  EXPECT_EQ(t.size(), 121u);
  const auto m = nlohmann::json::parse(Slurp(path + ".manifest.json"));
  EXPECT_EQ(m["command"], "simulate");
  EXPECT_EQ(m["seed"], 7);
  EXPECT_EQ(m["config_hash"], ConfigHash(SwimmerConfig{}));
  for (const char* key : {"args", "config", "versions", "started", "artifacts", "realtime_factor"}) {
    EXPECT_TRUE(m.contains(key)) << key;
  }
}

TEST(CliTest, SweepHasOneRowPerFrequency) {
  const std::string path = TempPath("sweep.csv");
  const CliRun r = Cli({"sweep", "--freqs", "0.4:0.1:1.3", "--duration", "1.5", "--warmup", "0.5", "--out", path});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::istringstream table(Slurp(path));
  std::string line;
  int rows = -1;
  while (std::getline(table, line)) rows += line.empty() ? 0 : 1;
  EXPECT_EQ(rows, 10);
}

}  // namespace
}  // namespace fishsim
