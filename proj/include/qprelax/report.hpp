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

// JSON reports. Non-finite values are written as the strings "inf" and
// "-inf". The text form is rendered from the JSON so both carry the same
// content.

#pragma once

#include <string>

#include "qprelax/analysis.hpp"
#include "qprelax/conic.hpp"
#include "qprelax/oracle.hpp"

namespace qprelax {

struct ReportOptions {
  SolveOptions solve;
  EnumerationOptions enumeration;
  // Tolerance for the cross-checks between relaxation and oracle values.
  double tol = 1e-5;
};

std::string relaxationResultJson(const QpInstance& inst, Cone cone,
                                 const RelaxationResult& result,
                                 const SolveOptions& options);
std::string certificateSearchJson(const QpInstance& inst, Cone cone,
                                  CertificateMode mode,
                                  const CertificateSearchResult& result,
                                  const SolveOptions& options);
std::string oracleResultJson(const QpInstance& inst, const OracleResult& result);
std::string localMinJson(const LocalMinVerdict& verdict, double tol);

// Structural verdicts only: feasibility, recession cone, curvature on
// null(A), copositivity, unboundedness.
std::string analyzeReport(const QpInstance& inst, const ReportOptions& options);
// Structural verdicts, both relaxations, the oracle, and cross-checks.
std::string compareReport(const QpInstance& inst, const ReportOptions& options);

std::string renderReportText(const std::string& json_text);

}  // namespace qprelax
