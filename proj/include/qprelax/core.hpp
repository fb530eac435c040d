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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace qprelax {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class ErrorCode {
  kParse,
  kIo,
  kDimensionMismatch,
  kAsymmetricQ,
  kNonFinite,
  kNegativeComponent,
  kInfeasibleMixturePoint,
  kRayNotInRecessionCone,
  kWeightsNotSimplex,
  kPointInfeasible,
  kDeskScaleLimit,
  kInvalidDimension,
  kGenerationFailed,
  kInvalidArgument,
  kNumeric,
};

std::string_view errorCodeName(ErrorCode code);

// All failures in the library surface as this exception type. The C API
// translates the code into its status enum.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Lifted cone selector. kDnn is the doubly nonnegative cone on S^{n+1};
// kPsd0 is the PSD cone with a nonnegative 0th row and column.
enum class Cone { kDnn, kPsd0 };

std::string_view coneName(Cone cone);
Cone parseCone(std::string_view text);

// min x'Qx + 2c'x  s.t.  Ax = b, x >= 0.
struct QpInstance {
  std::string name;
  Matrix Q;
  Vector c;
  Matrix A;
  Vector b;
  // Non-fatal notes attached during loading (e.g. symmetrization).
  std::vector<std::string> warnings;

  int n() const { return static_cast<int>(c.size()); }
  int m() const { return static_cast<int>(b.size()); }
};

struct LoadOptions {
  // Replace Q by (Q + Q') / 2 instead of rejecting an asymmetric Q.
  bool symmetrize = false;
};

// Validates dimensions, finiteness and exact symmetry, then returns the
// instance. Throws Error on violation.
QpInstance makeInstance(std::string name, Matrix Q, Vector c, Matrix A,
                        Vector b, const LoadOptions& options = {});

QpInstance parseInstance(std::string_view json_text,
                         const LoadOptions& options = {});
QpInstance loadInstance(const std::string& path,
                        const LoadOptions& options = {});
std::string instanceToJson(const QpInstance& inst);
void saveInstance(const QpInstance& inst, const std::string& path);

// q(x) = x'Qx + 2c'x.
double evaluateObjective(const QpInstance& inst, const Vector& x);

// Scaled feasibility test: ||Ax - b||_inf <= tol (1 + ||b||_inf), x >= -tol.
inline constexpr double kFeasibilityTol = 1e-8;
bool isFeasible(const QpInstance& inst, const Vector& x,
                double tol = kFeasibilityTol);
// Recession cone membership: ||Ad||_inf <= tol (1 + ||A||_inf ||d||_inf),
// d >= -tol.
bool inRecessionCone(const QpInstance& inst, const Vector& d,
                     double tol = kFeasibilityTol);

struct LiftedProblem {
  Matrix qhat;  // [0 c'; c Q]
  Matrix ahat;  // factor * factor'
  // Columns [b_i; -A_i'] for each constraint row i, so ahat = factor factor'.
  Matrix factor;
  Cone cone = Cone::kDnn;
  int n = 0;
};

LiftedProblem liftInstance(const QpInstance& inst, Cone cone);

// Symmetric (n+1)x(n+1) matrix; row/column 0 is the homogenizing index.
struct LiftedPoint {
  Matrix y;

  int n() const { return static_cast<int>(y.rows()) - 1; }
  Vector x() const { return y.row(0).tail(y.cols() - 1).transpose(); }
  // X - x x', the part of the lift beyond the rank-one term.
  Matrix gap() const;
};

LiftedPoint rankOneLift(const Vector& x);
std::string liftedPointToJson(const LiftedPoint& point,
                              const std::string& name);
LiftedPoint parseLiftedPoint(std::string_view json_text);

// Indices are 0-based. positive = {j : x_j > tol}, zero = the rest.
struct IndexSets {
  std::vector<int> positive;
  std::vector<int> zero;
  double tolerance = 0.0;
};

IndexSets indexSets(const Vector& x, double tol);

struct ValidationReport {
  bool unit_corner = false;      // Y00 = 1
  bool point_feasible = false;   // x = Y[0,1:n] in S
  bool gap_psd = false;          // X - xx' PSD
  bool gap_in_nullspace = false; // A (X - xx') = 0
  bool cone_member = false;      // Y in the selected cone
  double corner_error = 0.0;
  double feasibility_error = 0.0;
  double gap_min_eigenvalue = 0.0;
  double gap_nullspace_error = 0.0;
  double cone_violation = 0.0;
  double tolerance = 0.0;

  bool ok() const {
    return unit_corner && point_feasible && gap_psd && gap_in_nullspace &&
           cone_member;
  }
};

ValidationReport validateLiftedPoint(const QpInstance& inst,
                                     const LiftedPoint& point, Cone cone,
                                     double tol);

// Convex combination of feasible points plus recession rays.
struct MixtureCertificate {
  std::vector<double> weights;
  std::vector<Vector> points;
  std::vector<Vector> rays;
};

LiftedPoint constructLiftedFromMixture(const QpInstance& inst,
                                       const MixtureCertificate& mix,
                                       double tol = kFeasibilityTol);

// Max-abs entry, with 1 as the floor. Used to scale tolerances.
double scaleOf(const Matrix& m);

}  // namespace qprelax
