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


#include <gtest/gtest.h>

#include "json.hpp"
#include "qprelax/generators.hpp"
#include "qprelax/report.hpp"
#include "support.hpp"

namespace qprelax {
namespace {

using nlohmann::json;
using testing::simplex2;

json compare(const QpInstance& inst, const ReportOptions& o = {}) {
  return json::parse(compareReport(inst, o));
}

// Every applicable check passed and every numeric section names a tolerance.
void expectChecksPass(const json& r) {
  for (const json& c : r["checks"]) {
    EXPECT_TRUE(c.contains("tolerance")) << c.dump();
    if (c["applicable"].get<bool>()) EXPECT_TRUE(c["passed"].get<bool>()) << c.dump();
  }
}

TEST(Compare, ConvexSimplexIsExact) {
  const json r = compare(simplex2({1, 0, 0, 1}));
  EXPECT_EQ(r["oracle"]["status"], "OPTIMAL");
  EXPECT_NEAR(r["oracle"]["value"].get<double>(), 0.5, 1e-12);
  for (const char* cone : {"dnn", "psd0"}) {
    EXPECT_EQ(r["relaxations"][cone]["status"], "OPTIMAL");
    EXPECT_NEAR(r["relaxations"][cone]["value"].get<double>(), 0.5, 1e-6);
  }
  expectChecksPass(r);
  bool exact_checked = false;
  for (const json& c : r["checks"]) {
    if (c["claim"].get<std::string>().find("exact") != std::string::npos) {
      exact_checked = c["applicable"].get<bool>();
    }
  }
  EXPECT_TRUE(exact_checked);
}

TEST(Compare, InfeasibleInstanceRows) {
  const json r = compare(randomInstance(InstanceKind::kInfeasible, 3, 1, 1).instance);
  EXPECT_EQ(r["oracle"]["status"], "INFEASIBLE");
  EXPECT_EQ(r["oracle"]["value"], "inf");
  EXPECT_EQ(r["relaxations"]["dnn"]["status"], "INFEASIBLE");
  EXPECT_EQ(r["relaxations"]["psd0"]["status"], "INFEASIBLE");
  EXPECT_FALSE(r["feasibility"]["nonempty"].get<bool>());
  expectChecksPass(r);
}

TEST(Compare, HornReport) {
  const json r = compare(hornInstance().instance);
  EXPECT_TRUE(r["copositivity"]["copositive"].get<bool>());
  EXPECT_TRUE(r["copositivity"]["c_nonnegative"].get<bool>());
  EXPECT_NEAR(r["oracle"]["value"].get<double>(), 225.0 / 64.0, 1e-9);
  EXPECT_EQ(r["relaxations"]["psd0"]["status"], "UNBOUNDED");
  EXPECT_TRUE(r["relaxations"]["psd0"]["certificate"]["verified_negative_rate"].get<bool>());
  EXPECT_EQ(r["relaxations"]["dnn"]["status"], "OPTIMAL");
  expectChecksPass(r);
}

TEST(Analyze, DeskScaleSectionsAreSkipped) {
  ReportOptions o;
  o.enumeration.cap = 2;
  const json r = json::parse(analyzeReport(randomInstance(InstanceKind::kBounded, 4, 1, 0).instance, o));
  for (const char* key : {"feasibility", "recession", "copositivity", "unboundedness"}) {
    EXPECT_TRUE(r[key]["skipped"].get<bool>()) << key;
    EXPECT_EQ(r[key]["error"], "DeskScaleLimit") << key;
  }
  EXPECT_FALSE(r["nullspace_curvature"].contains("skipped"));
}

TEST(Analyze, Deterministic) {
  const QpInstance inst = randomInstance(InstanceKind::kBounded, 4, 2, 5).instance;
  EXPECT_EQ(compareReport(inst, {}), compareReport(inst, {}));
}

TEST(Render, TextMentionsSections) {
  const std::string text = renderReportText(compareReport(simplex2({1, 0, 0, 1}), {}));
  for (const char* word : {"oracle", "relaxations", "checks", "dnn", "psd0", "OPTIMAL"}) {
    EXPECT_NE(text.find(word), std::string::npos) << word;
  }
}

TEST(Json, ResultCarriesLiftedPoint) {
  const QpInstance inst = simplex2({1, 0, 0, 1});
  const RelaxationResult res = solveRelaxation(inst, Cone::kDnn);
  const json r = json::parse(relaxationResultJson(inst, Cone::kDnn, res, {}));
  EXPECT_EQ(r["Y"].size(), 3u);
  EXPECT_TRUE(r["point_valid"].get<bool>());
  EXPECT_EQ(r["tolerance"]["primal"], 1e-7);
}

}  // namespace
}  // namespace qprelax
