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

#include <sstream>

#include "qprelax/analysis.hpp"
#include "qprelax/conic.hpp"
#include "qprelax/generators.hpp"
#include "support.hpp"

namespace qprelax {
namespace {

using testing::instanceFrom;
using testing::simplex2;

TEST(NullspaceCurvature, Examples) {
  EXPECT_TRUE(checkPsdOnNullspace(simplex2({1, 0, 0, 1})).holds);

  const QpInstance bad = simplex2({1, 0, 0, -3});
  const NullspaceCurvatureReport r = checkPsdOnNullspace(bad);
  EXPECT_FALSE(r.holds);
  ASSERT_TRUE(r.witness.has_value());
  const Vector& d = *r.witness;
  EXPECT_NEAR(d(0), -d(1), 1e-12);
  // Unit witness (1,-1)/sqrt(2): d'Qd = (1 - 3) / 2.
  EXPECT_NEAR(d.dot(bad.Q * d) / d.squaredNorm(), -1.0, 1e-12);
  EXPECT_NEAR((bad.A * d).norm(), 0.0, 1e-12);

  const QpInstance full = instanceFrom(2, {1, 0, 0, 1}, {1, 1}, {-1, 0, 0, -1}, {0, 0});
  EXPECT_TRUE(checkPsdOnNullspace(full).holds);
}

TEST(Recession, Examples) {
  EXPECT_FALSE(analyzeRecessionCone(simplex2({1, 0, 0, 1})).l_nontrivial);

  const RecessionReport horn = analyzeRecessionCone(hornInstance().instance);
  EXPECT_TRUE(horn.l_nontrivial);
  EXPECT_GE(horn.min_curvature, -horn.tolerance);
  EXPECT_FALSE(horn.neg_direction.has_value());

  const QpInstance concave = instanceFrom(2, {1, -1}, {0}, {-1, 0, 0, -1}, {0, 0});
  const RecessionReport r = analyzeRecessionCone(concave);
  EXPECT_LT(r.min_curvature, 0.0);
  ASSERT_TRUE(r.neg_direction.has_value());
  const Vector& d = *r.neg_direction;
  EXPECT_TRUE(inRecessionCone(concave, d));
  EXPECT_NEAR(d(0), d(1), 1e-12);
  EXPECT_LT(d.dot(concave.Q * d), 0.0);
}

TEST(Unbounded, CaseOne) {
  const QpInstance inst = instanceFrom(2, {1, -1}, {1}, {-1, 0, 0, -1}, {0, 0});
  const UnboundednessVerdict v = detectUnbounded(inst);
  EXPECT_EQ(v.status, UnboundednessStatus::kCase1);
  ASSERT_TRUE(v.direction.has_value());
  EXPECT_TRUE(inRecessionCone(inst, *v.direction));
  EXPECT_LT(v.direction->dot(inst.Q * *v.direction), 0.0);
}

TEST(Unbounded, CaseTwo) {
  const QpInstance inst = instanceFrom(2, {1, -1}, {0}, {0, 0, 0, 0}, {-1, -1});
  const UnboundednessVerdict v = detectUnbounded(inst);
  EXPECT_EQ(v.status, UnboundednessStatus::kCase2);
  ASSERT_TRUE(v.direction && v.point);
  const Vector& d = *v.direction;
  const Vector& x = *v.point;
  EXPECT_TRUE(inRecessionCone(inst, d));
  EXPECT_TRUE(isFeasible(inst, x));
  EXPECT_NEAR(d.dot(inst.Q * d), 0.0, 1e-12);
  EXPECT_LT((inst.Q * x + inst.c).dot(d), 0.0);
}

TEST(Unbounded, BoundedRegionNotDetected) {
  EXPECT_EQ(detectUnbounded(simplex2({-1, 0, 0, -1})).status, UnboundednessStatus::kNotDetected);
  EXPECT_EQ(detectUnbounded(hornInstance().instance).status, UnboundednessStatus::kNotDetected);
}

TEST(Copositivity, Examples) {
  CopositivityResult r = checkCopositivityDeskScale(Matrix::Identity(4, 4));
  EXPECT_NEAR(r.min_value, 0.25, 1e-12);
  EXPECT_LE((r.minimizer - Vector::Constant(4, 0.25)).norm(), 1e-9);

  r = checkCopositivityDeskScale(hornInstance().instance.Q);
  EXPECT_NEAR(r.min_value, 0.0, 1e-12);

  Matrix q(2, 2);
  q << 1, -2, -2, 1;
  r = checkCopositivityDeskScale(q);
  EXPECT_NEAR(r.min_value, -0.5, 1e-12);
  EXPECT_LE((r.minimizer - Vector::Constant(2, 0.5)).norm(), 1e-9);
}

TEST(Copositivity, DeskScaleLimit) {
  EnumerationOptions o;
  o.cap = 4;
  try {
    checkCopositivityDeskScale(Matrix::Identity(5, 5), o);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDeskScaleLimit);
  }
}

TEST(Envelope, BilinearEdgeIsFlat) {
  const QpInstance inst = simplex2({0, 1, 1, 0});
  const auto rows = sampleEnvelope(inst, Cone::kDnn, Vector::Unit(2, 0), Vector::Unit(2, 1), 9);
  ASSERT_EQ(rows.size(), 9u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double t = rows[i].t;
    EXPECT_NEAR(rows[i].q, 2 * t * (1 - t), 1e-12);
    EXPECT_EQ(rows[i].status, SolveStatus::kOptimal);
    EXPECT_NEAR(rows[i].lk, 0.0, 1e-6);
  }
  EXPECT_DOUBLE_EQ(rows.front().t, 0.0);
  EXPECT_DOUBLE_EQ(rows.back().t, 1.0);
}

TEST(Envelope, ConvexInstanceMatchesObjective) {
  const QpInstance inst = instanceFrom(3, {1, 1, 1}, {2}, {2, 1, 0, 1, 2, 0, 0, 0, 1},
                                       {-1, 0, 1});
  Vector a(3), b(3);
  a << 2, 0, 0;
  b << 0, 0.5, 1.5;
  for (const EnvelopeSample& s : sampleEnvelope(inst, Cone::kPsd0, a, b, 6)) {
    EXPECT_EQ(s.status, SolveStatus::kOptimal);
    EXPECT_NEAR(s.lk, s.q, 1e-6 * (1 + std::abs(s.q)));
  }
}

TEST(Envelope, CsvFormat) {
  std::vector<EnvelopeSample> rows = {{0.0, 1.0, 0.5, SolveStatus::kOptimal},
                                      {1.0, 2.0, -INFINITY, SolveStatus::kUnbounded}};
  std::ostringstream out;
  writeEnvelopeCsv(out, rows);
  const std::string text = out.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "t,q,lK,status");
  EXPECT_NE(text.find("0,1,0.5,OPTIMAL"), std::string::npos);
  EXPECT_NE(text.find("UNBOUNDED"), std::string::npos);
}

// Generator-checker round trip on the structured kinds.
TEST(RoundTrip, GeneratedKindsVerify) {
  for (int seed = 0; seed < 5; ++seed) {
    EXPECT_TRUE(checkPsdOnNullspace(
                    randomInstance(InstanceKind::kConvexOnNullspace, 4, 2, seed).instance)
                    .holds);
    const RecessionReport rec = analyzeRecessionCone(
        randomInstance(InstanceKind::kUnboundedSafe, 4, 1, seed).instance);
    EXPECT_TRUE(rec.l_nontrivial);
    EXPECT_GT(rec.min_curvature, 0.0);
    EXPECT_FALSE(
        analyzeRecessionCone(randomInstance(InstanceKind::kBounded, 4, 2, seed).instance)
            .l_nontrivial);
  }
}

}  // namespace
}  // namespace qprelax
