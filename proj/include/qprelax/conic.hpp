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

// Operator-splitting solver for the lifted relaxations
//
//   min <Qhat, Y>  s.t.  <Ahat, Y> = 0,  Y00 = 1,  [Y[0,1:n] = xt,]  Y in K
//
// with K the doubly nonnegative cone or the PSD cone with a nonnegative
// 0th row, plus searches for recession matrices D (D in K, D00 = 0,
// <Ahat, D> = 0, trace D = 1) that prove the relaxation unbounded or its
// feasible region unbounded.

#pragma once

#include <memory>
#include <optional>
#include <string_view>

#include "qprelax/core.hpp"
#include "qprelax/numerics.hpp"

namespace qprelax {

struct SolveOptions {
  int max_iterations = 200000;
  double tol_primal = 1e-7;
  double tol_dual = 1e-7;
  double penalty = 1.0;  // initial rho; adapted during the run
  // Backstop: an objective below this (times the objective scale) is
  // treated as divergence.
  double unbounded_threshold = -1e12;
  double tol_cert = 1e-6;  // certificate rate threshold on trace-1 D
  double over_relaxation = 1.6;
  // Feasibility-mode "none" verdict: best residual must improve by
  // stall_factor within each window of stall_window iterations; after
  // stall_windows consecutive failures the search gives up.
  int stall_window = 5000;
  int stall_windows = 3;
  double stall_factor = 0.9;
};

enum class SolveStatus { kOptimal, kUnbounded, kInfeasible, kMaxIter };
std::string_view solveStatusName(SolveStatus status);

struct Residuals {
  double primal = 0.0;
  double dual = 0.0;
};

struct RecessionCertificate {
  Matrix d;
  double objective_rate = 0.0;  // <Qhat, D>
  double trace_norm = 1.0;
};

struct RelaxationResult {
  SolveStatus status = SolveStatus::kMaxIter;
  double value = 0.0;  // -inf when unbounded, +inf when infeasible
  std::optional<LiftedPoint> point;
  Residuals residuals;
  int iterations = 0;
  std::optional<RecessionCertificate> certificate;
  // Short human-readable account of how the status was reached.
  std::string note;
};

enum class CertificateMode { kObjective, kFeasibility };
enum class SearchOutcome { kFound, kNone, kInconclusive };
std::string_view searchOutcomeName(SearchOutcome outcome);

struct CertificateSearchResult {
  SearchOutcome outcome = SearchOutcome::kInconclusive;
  std::optional<RecessionCertificate> certificate;
  // Objective mode: best <Qhat, D> reached by the splitting run.
  double best_rate = 0.0;
  int iterations = 0;
  Residuals residuals;
  std::string note;
};

struct CertificateCheck {
  bool in_cone = false;
  bool corner_zero = false;
  bool annihilated = false;  // <Ahat, D> = 0
  bool trace_normalized = false;
  bool negative_rate = false;
  double rate = 0.0;
  double cone_violation = 0.0;

  bool recessionOk() const {
    return in_cone && corner_zero && annihilated && trace_normalized;
  }
  bool unboundedOk() const { return recessionOk() && negative_rate; }
};

// Re-verifies a certificate from raw instance data.
CertificateCheck verifyCertificate(const QpInstance& inst, Cone cone,
                                   const RecessionCertificate& cert,
                                   double tol = 1e-6, double tol_cert = 1e-6);

// Solves one instance/cone pair repeatedly. The instance-level pre-pass
// (feasibility of S and the objective-mode certificate search) runs once
// and is shared by every subsequent solve.
class RelaxationSolver {
 public:
  RelaxationSolver(QpInstance inst, Cone cone, SolveOptions options = {});
  ~RelaxationSolver();
  RelaxationSolver(RelaxationSolver&&) noexcept;
  RelaxationSolver& operator=(RelaxationSolver&&) noexcept;

  // Value of P(K).
  RelaxationResult solve();
  // Value of P(K, xt). Throws kPointInfeasible when xt is not in S.
  RelaxationResult evaluate(const Vector& xt);

  const QpInstance& instance() const;
  Cone cone() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

RelaxationResult solveRelaxation(const QpInstance& inst, Cone cone,
                                 const SolveOptions& options = {});
RelaxationResult evaluateUnderestimator(const QpInstance& inst, Cone cone,
                                        const Vector& xt,
                                        const SolveOptions& options = {});
CertificateSearchResult recessionCertificateSearch(
    const QpInstance& inst, Cone cone, CertificateMode mode,
    const SolveOptions& options = {});

// ||rows Z(xt) of (X - xt xt')||_F for a lifted point.
double zeroBlockResidual(const LiftedPoint& point, const Vector& xt,
                         double tol = 1e-9);

}  // namespace qprelax
