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

// Structural checks on an instance: curvature of Q on null(A), curvature on
// the recession cone L = {Ad = 0, d >= 0}, unboundedness witnesses,
// copositivity at desk scale, and sampling of the underestimator along a
// segment.

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qprelax/conic.hpp"
#include "qprelax/core.hpp"
#include "qprelax/oracle.hpp"

namespace qprelax {

struct NullspaceCurvatureReport {
  bool holds = true;
  // Smallest eigenvalue of N'QN; +inf when null(A) = {0}.
  double min_eigenvalue = 0.0;
  std::optional<Vector> witness;  // Ad = 0, d'Qd < 0
};

NullspaceCurvatureReport checkPsdOnNullspace(const QpInstance& inst,
                                             double tol = 1e-9);

struct RecessionReport {
  bool l_nontrivial = false;
  // min d'Qd over {Ad = 0, e'd = 1, d >= 0}; +inf when L = {0}.
  double min_curvature = 0.0;
  std::optional<Vector> neg_direction;
  std::vector<Vector> zero_directions;
  double tolerance = 0.0;
};

RecessionReport analyzeRecessionCone(const QpInstance& inst,
                                     const EnumerationOptions& options = {});

enum class UnboundednessStatus { kCase1, kCase2, kNotDetected };
std::string_view unboundednessStatusName(UnboundednessStatus status);

struct UnboundednessVerdict {
  UnboundednessStatus status = UnboundednessStatus::kNotDetected;
  std::optional<Vector> direction;
  std::optional<Vector> point;  // case 2 only
};

// Sound but incomplete for the zero-curvature case: only zero-curvature
// directions found by the recession analysis are tried.
UnboundednessVerdict detectUnbounded(const QpInstance& inst,
                                     const EnumerationOptions& options = {});

struct CopositivityResult {
  double min_value = 0.0;  // min x'Qx over the standard simplex
  Vector minimizer;
};

CopositivityResult checkCopositivityDeskScale(const Matrix& q,
                                              const EnumerationOptions& options = {});

struct EnvelopeSample {
  double t = 0.0;
  double q = 0.0;
  double lk = 0.0;
  SolveStatus status = SolveStatus::kMaxIter;
};

// k evaluations of the underestimator at (1 - t) from + t to, t evenly
// spaced in [0, 1].
std::vector<EnvelopeSample> sampleEnvelope(const QpInstance& inst, Cone cone,
                                           const Vector& from, const Vector& to,
                                           int k, const SolveOptions& options = {});

// Header `t,q,lK,status`, 12 significant digits.
void writeEnvelopeCsv(std::ostream& out, const std::vector<EnvelopeSample>& samples);

}  // namespace qprelax
