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

// Exact desk-scale ground truth for quadratic programs over polyhedra.
//
// Every routine here enumerates: basic solutions for vertices, and faces
// (zero/upper/free patterns) for quadratic minimization. A global minimizer
// of a quadratic over a polyhedron lies in the relative interior of some
// face, where it is a stationary point of the restriction to the face's
// affine hull with a PSD reduced Hessian; collecting those candidates over
// all faces and taking the smallest value is therefore exact whenever the
// minimum is attained.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qprelax/core.hpp"

namespace qprelax {

inline constexpr int kDefaultEnumerationCap = 16;

// The cap in effect: QPRELAX_ENUM_CAP when set to a positive integer,
// kDefaultEnumerationCap otherwise.
int enumerationCap();

struct EnumerationOptions {
  int cap = enumerationCap();
  // Tolerance for bound membership and PSD tests, relative to data scale.
  double tol = 1e-9;
};

// All basic feasible solutions of {Ax = b, x >= 0}, deduplicated at 1e-8.
std::vector<Vector> enumerateVertices(const Matrix& a, const Vector& b,
                                      const EnumerationOptions& options = {});
std::vector<Vector> enumerateVertices(const QpInstance& inst,
                                      const EnumerationOptions& options = {});

// Vertices of {Ad = 0, e'd = 1, d >= 0}; empty iff the recession cone of
// {Ax = b, x >= 0} is {0}.
std::vector<Vector> recessionVertices(const Matrix& a,
                                      const EnumerationOptions& options = {});

enum class OracleStatus { kOptimal, kInfeasible, kUnbounded, kInconclusive };

std::string_view oracleStatusName(OracleStatus status);

struct OracleResult {
  OracleStatus status = OracleStatus::kInconclusive;
  // +inf when infeasible, -inf when unbounded below.
  double value = 0.0;
  std::vector<Vector> minimizers;
  bool attained = false;
  long long faces_explored = 0;
  // Recession direction proving unboundedness (and the anchor point for the
  // zero-curvature case), when status is kUnbounded.
  std::optional<Vector> direction;
  std::optional<Vector> anchor;
  // How a finite value on an unbounded region was certified.
  std::string certificate;
};

// min x'Qx + 2c'x over {Ax = b, 0 <= x <= upper}. Entries of upper may be
// +inf. Returns kOptimal with the enumerated minimum, kInfeasible when no
// face carries a candidate and no vertex exists, and kUnbounded when the
// region is unbounded with a negative-curvature recession direction.
OracleResult minimizeQuadOverPolytope(const Matrix& q, const Vector& c,
                                      const Matrix& a, const Vector& b,
                                      const std::optional<Vector>& upper = {},
                                      const EnumerationOptions& options = {});

// Optimal value of the instance: +inf if S is empty, -inf with a witness
// when unbounded below is detected, otherwise the face-enumeration minimum.
// On an unbounded S the finite value is kOptimal only when boundedness
// below is certified; kInconclusive otherwise.
OracleResult globalSolve(const QpInstance& inst,
                         const EnumerationOptions& options = {});

struct LinearMinimum {
  double value = 0.0;  // -inf when unbounded, +inf when infeasible
  Vector argmin;
  std::optional<Vector> ray;  // descent ray when unbounded
};

// min g'x over {Ax = b, x >= 0} by vertex and extreme-ray enumeration.
LinearMinimum minimizeLinear(const Vector& g, const Matrix& a, const Vector& b,
                             const EnumerationOptions& options = {});

struct KktCertificate {
  Vector y;  // equality multipliers
  Vector s;  // bound multipliers
  double stationarity_residual = 0.0;  // ||Qx + c - A'y - s||_inf
  double min_multiplier = 0.0;         // min_j s_j
  double complementarity = 0.0;        // max_j |x_j s_j|
};

struct LocalMinVerdict {
  bool is_local_min = false;
  std::optional<KktCertificate> kkt;
  // min d'Qd over the critical cone intersected with [-box, box]^n.
  double second_order_min = 0.0;
  std::optional<Vector> descent_direction;
};

LocalMinVerdict verifyLocalMinimizer(const QpInstance& inst, const Vector& x,
                                     double tol = 1e-7, double box = 1.0,
                                     const EnumerationOptions& options = {});

// Thrown as kDeskScaleLimit when variables exceed the cap.
void requireDeskScale(int variables, const EnumerationOptions& options);

}  // namespace qprelax
