// Copyright 2026 The qprelax Authors
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


// Runs the qprelax executable end to end.

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"
#include "support.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using qprelax::testing::CommandResult;
using qprelax::testing::runCommand;

const std::string kCli = QPRELAX_CLI_PATH;

class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = fs::temp_directory_path() / "qprelax-cli-test";
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    ASSERT_EQ(run("generate horn --out " + dir_.string()).exit_code, 0);
  }

  static CommandResult run(const std::string& args, const std::string& env = "") {
    return runCommand(env + (env.empty() ? "" : " ") + kCli + " " + args + " 2>/dev/null");
  }

  static std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  static std::string horn() { return (dir_ / "horn5.json").string(); }

  static fs::path dir_;
};

fs::path Cli::dir_;

TEST_F(Cli, GenerateHornWritesInstanceAndMetadata) {
  std::ifstream in(horn());
  const json inst = json::parse(in);
  EXPECT_EQ(inst["n"], 5);
  EXPECT_EQ(inst["A"][0][0], -12);
  std::ifstream min(dir_ / "horn5.meta.json");
  const json meta = json::parse(min);
  EXPECT_EQ(meta["q_dot_d"], -5);
  EXPECT_EQ(meta["certificate_D"][0][0], 7);
}

TEST_F(Cli, SolveJson) {
  CommandResult r = run("--json solve --cone dnn " + horn());
  ASSERT_EQ(r.exit_code, 0);
  json j = json::parse(r.out);
  EXPECT_EQ(j["status"], "OPTIMAL");
  EXPECT_NEAR(j["value"].get<double>(), 171.0 / 49.0, 1e-5);

  r = run("--json solve --cone psd0 " + horn());
  ASSERT_EQ(r.exit_code, 0);
  j = json::parse(r.out);
  EXPECT_EQ(j["status"], "UNBOUNDED");
  EXPECT_EQ(j["value"], "-inf");
  EXPECT_TRUE(j["certificate"]["verified_negative_rate"].get<bool>());
}

TEST_F(Cli, SolvePinned) {
  const std::string x = write("xt.json", R"({"x": [0, 1, 1, 1, 0]})");
  const CommandResult r = run("--json solve --cone dnn --at " + x + " " + horn());
  ASSERT_EQ(r.exit_code, 0);
  const json j = json::parse(r.out);
  EXPECT_EQ(j["status"], "OPTIMAL");
  EXPECT_EQ(j["x"].size(), 5u);
  EXPECT_NEAR(j["x"][1].get<double>(), 1.0, 1e-8);
  EXPECT_LE(j["value"].get<double>(), 7.0 + 1e-5);
}

TEST_F(Cli, OracleAndAnalyze) {
  CommandResult r = run("--json oracle " + horn());
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_NEAR(json::parse(r.out)["value"].get<double>(), 225.0 / 64.0, 1e-9);

  r = run("analyze " + horn());
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_NE(r.out.find("copositivity"), std::string::npos);
  EXPECT_NE(r.out.find("simplex_min"), std::string::npos);
}

TEST_F(Cli, CompareAndCertificate) {
  CommandResult r = run("--json compare " + horn());
  ASSERT_EQ(r.exit_code, 0);
  const json j = json::parse(r.out);
  EXPECT_TRUE(j.contains("checks"));
  EXPECT_TRUE(j.contains("relaxations"));

  r = run("--json certificate --cone psd0 --mode objective " + horn());
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(json::parse(r.out)["outcome"], "found");
}

TEST_F(Cli, LocalMinAndEnvelope) {
  const std::string v = write("vertex.json", "[0, 1.125, 0, 0, 0]");
  CommandResult r = run("--json localmin --at " + v + " " + horn());
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_TRUE(json::parse(r.out).contains("is_local_min"));

  const std::string a = write("a.json", "[1, 0]");
  const std::string b = write("b.json", "[0, 1]");
  const std::string inst = write("bilinear.json", R"({"name": "bilinear", "n": 2, "m": 1,
      "Q": [[0, 1], [1, 0]], "c": [0, 0], "A": [[1, 1]], "b": [1]})");
  const std::string csv = (dir_ / "env.csv").string();
  r = run("envelope --cone dnn --from " + a + " --to " + b + " --samples 5 --out " + csv + " " +
          inst);
  ASSERT_EQ(r.exit_code, 0);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "t,q,lK,status");
  int rows = 0;
  for (std::string line; std::getline(in, line);) rows += line.empty() ? 0 : 1;
  EXPECT_EQ(rows, 5);
}

TEST_F(Cli, GenerateRandomAndFamily) {
  const fs::path out = dir_ / "gen";
  ASSERT_EQ(run("generate random --kind bounded --n 4 --m 1 --seed 3 --out " + out.string())
                .exit_code,
            0);
  EXPECT_TRUE(fs::exists(out / "bounded-n4-m1-s3.json"));
  EXPECT_TRUE(fs::exists(out / "bounded-n4-m1-s3.meta.json"));
  ASSERT_EQ(run("generate horn-family --n 6 --seed 0 --out " + out.string()).exit_code, 0);
  EXPECT_TRUE(fs::exists(out / "horn-family-n6-s0.json"));

  // Directory target with a worker pool; metadata files are skipped.
  const CommandResult r = run("--jobs 2 oracle " + out.string());
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_NE(r.out.find("== " + (out / "bounded-n4-m1-s3.json").string()), std::string::npos);
  EXPECT_NE(r.out.find("== " + (out / "horn-family-n6-s0.json").string()), std::string::npos);
  EXPECT_EQ(r.out.find(".meta.json"), std::string::npos);
}

TEST_F(Cli, InputErrorsExitTwo) {
  EXPECT_EQ(run("oracle " + (dir_ / "missing.json").string()).exit_code, 2);
  EXPECT_EQ(run("oracle " + write("broken.json", "{\"n\": 2,")).exit_code, 2);
  const std::string asym = write("asym.json", R"({"n": 2, "m": 1, "Q": [[1, 1], [0, 1]],
      "c": [0, 0], "A": [[1, 1]], "b": [1]})");
  EXPECT_EQ(run("oracle " + asym).exit_code, 2);
  EXPECT_EQ(run("--symmetrize oracle " + asym).exit_code, 0);
  EXPECT_EQ(run("solve --cone nope " + horn()).exit_code, 2);
  EXPECT_EQ(run("frobnicate").exit_code, 2);
  const std::string outside = write("outside.json", "[1, 1, 1, 1, 1]");
  EXPECT_EQ(run("solve --at " + outside + " " + horn()).exit_code, 2);
}

TEST_F(Cli, DeskScaleExitsThree) {
  EXPECT_EQ(run("oracle " + horn(), "QPRELAX_ENUM_CAP=3").exit_code, 3);
  // The structural report records the limit per section and still completes.
  EXPECT_EQ(run("analyze " + horn(), "QPRELAX_ENUM_CAP=3").exit_code, 0);
}

TEST_F(Cli, HelpExitsZero) { EXPECT_EQ(run("--help").exit_code, 0); }

}  // namespace
