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

#include "qprelax/analysis.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

#include "qprelax/numerics.hpp"

namespace qprelax {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool containsDirection(const std::vector<Vector>& list, const Vector& d) {
  for (const Vector& e : list) {
    if ((e - d).cwiseAbs().maxCoeff() <= 1e-8) return true;
  }
  return false;
}

}  // namespace

NullspaceCurvatureReport checkPsdOnNullspace(const QpInstance& inst, double tol) {
  NullspaceCurvatureReport report;
  const Matrix null = nullspaceBasis(inst.A);
  if (null.cols() == 0) {
    report.min_eigenvalue = kInf;
    return report;
  }
  const Matrix reduced = null.transpose() * inst.Q * null;
  const EigenDecomposition eig = symEigen(0.5 * (reduced + reduced.transpose()));
  report.min_eigenvalue = eig.values(0);
  report.holds = eig.values(0) >= -tol * std::max(1.0, inst.Q.norm());
  if (!report.holds) report.witness = null * eig.vectors.col(0);
  return report;
}

RecessionReport analyzeRecessionCone(const QpInstance& inst,
                                     const EnumerationOptions& options) {
  const int n = inst.n();
  requireDeskScale(n, options);
  RecessionReport report;
  report.tolerance = 1e-9 * scaleOf(inst.Q);
  const std::vector<Vector> extreme = recessionVertices(inst.A, options);
  report.l_nontrivial = !extreme.empty();
  if (!report.l_nontrivial) {
    report.min_curvature = kInf;
    return report;
  }

  Matrix a(inst.m() + 1, n);
  a << inst.A, Matrix::Ones(1, n);
  Vector rhs = Vector::Zero(inst.m() + 1);
  rhs(inst.m()) = 1.0;
  const OracleResult curv =
      minimizeQuadOverPolytope(inst.Q, Vector::Zero(n), a, rhs, std::nullopt, options);
  report.min_curvature = curv.value;
  if (curv.value < -report.tolerance && !curv.minimizers.empty()) {
    report.neg_direction = curv.minimizers.front();
    return report;
  }
  if (curv.value <= report.tolerance) {
    for (const Vector& d : curv.minimizers) report.zero_directions.push_back(d);
  }
  for (const Vector& d : extreme) {
    if (std::abs(d.dot(inst.Q * d)) <= report.tolerance &&
        !containsDirection(report.zero_directions, d)) {
      report.zero_directions.push_back(d);
    }
  }
  return report;
}

std::string_view unboundednessStatusName(UnboundednessStatus status) {
  switch (status) {
    case UnboundednessStatus::kCase1: return "UNBOUNDED_CASE1";
    case UnboundednessStatus::kCase2: return "UNBOUNDED_CASE2";
    case UnboundednessStatus::kNotDetected: return "NOT_DETECTED";
  }
  return "UNKNOWN";
}

UnboundednessVerdict detectUnbounded(const QpInstance& inst,
                                     const EnumerationOptions& options) {
  UnboundednessVerdict verdict;
  if (enumerateVertices(inst, options).empty()) return verdict;
  const RecessionReport rec = analyzeRecessionCone(inst, options);
  if (rec.neg_direction) {
    verdict.status = UnboundednessStatus::kCase1;
    verdict.direction = rec.neg_direction;
    return verdict;
  }
  const double tol = 1e-9 * std::max(1.0, scaleOf(inst.Q) + inst.c.cwiseAbs().maxCoeff());
  for (const Vector& d : rec.zero_directions) {
    // (Qx + c)'d = (Qd)'x + c'd, linear in x over S.
    const LinearMinimum lin = minimizeLinear(inst.Q * d, inst.A, inst.b, options);
    if (!std::isfinite(lin.value)) continue;
    if (lin.value + inst.c.dot(d) < -tol) {
      verdict.status = UnboundednessStatus::kCase2;
      verdict.direction = d;
      verdict.point = lin.argmin;
      return verdict;
    }
  }
  return verdict;
}

CopositivityResult checkCopositivityDeskScale(const Matrix& q,
                                              const EnumerationOptions& options) {
  const auto n = q.rows();
  const OracleResult r = minimizeQuadOverPolytope(q, Vector::Zero(n), Matrix::Ones(1, n),
                                                  Vector::Ones(1), std::nullopt, options);
  CopositivityResult out;
  out.min_value = r.value;
  out.minimizer = r.minimizers.empty() ? Vector::Zero(n) : r.minimizers.front();
  return out;
}

std::vector<EnvelopeSample> sampleEnvelope(const QpInstance& inst, Cone cone,
                                           const Vector& from, const Vector& to,
                                           int k, const SolveOptions& options) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "sample count must be positive");
  if (from.size() != inst.n() || to.size() != inst.n()) {
    throw Error(ErrorCode::kDimensionMismatch, "segment endpoints have wrong length");
  }
  if (!isFeasible(inst, from) || !isFeasible(inst, to)) {
    throw Error(ErrorCode::kPointInfeasible, "segment endpoints must lie in S");
  }
  RelaxationSolver solver(inst, cone, options);
  std::vector<EnvelopeSample> samples;
  samples.reserve(k);
  for (int i = 0; i < k; ++i) {
    EnvelopeSample s;
    s.t = k == 1 ? 0.0 : static_cast<double>(i) / (k - 1);
    const Vector x = (1.0 - s.t) * from + s.t * to;
    s.q = evaluateObjective(inst, x);
    const RelaxationResult r = solver.evaluate(x);
    s.lk = r.value;
    s.status = r.status;
    samples.push_back(s);
  }
  return samples;
}

void writeEnvelopeCsv(std::ostream& out, const std::vector<EnvelopeSample>& samples) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::setprecision(12);
  out.unsetf(std::ios::floatfield);
  out << "t,q,lK,status\n";
  for (const EnvelopeSample& s : samples) {
    out << s.t << ',' << s.q << ',' << s.lk << ',' << solveStatusName(s.status) << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

}  // namespace qprelax
