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

#include "qprelax/oracle.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

#include "qprelax/analysis.hpp"
#include "qprelax/numerics.hpp"

namespace qprelax {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDedupTol = 1e-8;

Matrix selectColumns(const Matrix& a, const std::vector<int>& cols) {
  Matrix out(a.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) out.col(k) = a.col(cols[k]);
  return out;
}

int numericRank(const Matrix& a) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(a);
  const Vector& sigma = svd.singularValues();
  if (sigma.size() == 0 || sigma(0) == 0.0) return 0;
  int r = 0;
  while (r < sigma.size() && sigma(r) > 1e-10 * sigma(0)) ++r;
  return r;
}

void pushUnique(std::vector<Vector>& points, const Vector& p) {
  const double scale = std::max(1.0, p.cwiseAbs().maxCoeff());
  for (const Vector& q : points) {
    if ((q - p).cwiseAbs().maxCoeff() <= kDedupTol * scale) return;
  }
  points.push_back(p);
}

// Least-norm solution of a x = rhs; nullopt when inconsistent.
std::optional<Vector> solveConsistent(const Matrix& a, const Vector& rhs,
                                      double tol) {
  if (a.cols() == 0) {
    if (rhs.size() == 0 || rhs.cwiseAbs().maxCoeff() <= tol) return Vector(0);
    return std::nullopt;
  }
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(a);
  cod.setThreshold(1e-11);
  Vector x = cod.solve(rhs);
  const double scale = 1.0 + rhs.cwiseAbs().maxCoeff() +
                       a.cwiseAbs().maxCoeff() * x.cwiseAbs().maxCoeff();
  if (rhs.size() && (a * x - rhs).cwiseAbs().maxCoeff() > tol * scale) {
    return std::nullopt;
  }
  return x;
}

// Advances a mixed-radix counter; false once it wraps.
bool nextPattern(std::vector<int>& digits, const std::vector<int>& radix) {
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (++digits[i] < radix[i]) return true;
    digits[i] = 0;
  }
  return false;
}

bool nextCombination(std::vector<int>& comb, int n) {
  const int k = static_cast<int>(comb.size());
  int i = k - 1;
  while (i >= 0 && comb[i] == n - k + i) --i;
  if (i < 0) return false;
  ++comb[i];
  for (int j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
  return true;
}

struct FaceScan {
  std::vector<Vector> candidates;
  std::vector<double> values;
  long long faces = 0;
};

enum FaceState { kAtLower = 0, kFree = 1, kAtUpper = 2 };

// Stationary candidates with PSD reduced Hessian on every face of
// {Ax = b, 0 <= x <= upper}.
FaceScan scanFaces(const Matrix& q, const Vector& c, const Matrix& a,
                   const Vector& b, const Vector& upper, double tol) {
  const int n = static_cast<int>(c.size());
  FaceScan scan;
  std::vector<int> radix(n), digits(n, 0);
  for (int j = 0; j < n; ++j) radix[j] = std::isfinite(upper(j)) ? 3 : 2;

  const double qscale = scaleOf(q);
  const double bound_tol = 1e-8;

  do {
    ++scan.faces;
    std::vector<int> free;
    Vector fixed = Vector::Zero(n);
    for (int j = 0; j < n; ++j) {
      if (digits[j] == kFree) free.push_back(j);
      if (digits[j] == kAtUpper) fixed(j) = upper(j);
    }
    const Vector rhs = b - a * fixed;
    const Matrix af = selectColumns(a, free);
    auto particular = solveConsistent(af, rhs, 1e-9);
    if (!particular) continue;

    Vector xf = *particular;
    if (!free.empty()) {
      Matrix qff(free.size(), free.size());
      Vector lin(free.size());
      for (std::size_t i = 0; i < free.size(); ++i) {
        for (std::size_t k = 0; k < free.size(); ++k) qff(i, k) = q(free[i], free[k]);
        lin(i) = c(free[i]) + q.row(free[i]).dot(fixed);
      }
      const Matrix basis = nullspaceBasis(af);
      if (basis.cols() > 0) {
        const Matrix h = basis.transpose() * qff * basis;
        if (minEigenvalue(h) < -tol * qscale) continue;
        const Vector g = basis.transpose() * (qff * xf + lin);
        auto step = solveConsistent(h, -g, 1e-9);
        if (!step) continue;
        xf += basis * (*step);
      }
    }

    Vector x = fixed;
    bool inside = true;
    for (std::size_t i = 0; i < free.size(); ++i) {
      const int j = free[i];
      const double hi = upper(j);
      const double scale = std::isfinite(hi) ? std::max(1.0, hi) : 1.0;
      if (xf(i) < -bound_tol * scale || xf(i) > hi + bound_tol * scale) {
        inside = false;
        break;
      }
      x(j) = std::clamp(xf(i), 0.0, hi);
    }
    if (!inside) continue;
    scan.candidates.push_back(x);
    scan.values.push_back(x.dot(q * x) + 2.0 * c.dot(x));
  } while (nextPattern(digits, radix));
  return scan;
}

}  // namespace

int enumerationCap() {
  if (const char* env = std::getenv("QPRELAX_ENUM_CAP")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v < 64) return static_cast<int>(v);
  }
  return kDefaultEnumerationCap;
}

void requireDeskScale(int variables, const EnumerationOptions& options) {
  if (variables > options.cap) {
    throw Error(ErrorCode::kDeskScaleLimit,
                std::to_string(variables) + " variables exceed the enumeration cap of " +
                    std::to_string(options.cap));
  }
}

std::string_view oracleStatusName(OracleStatus status) {
  switch (status) {
    case OracleStatus::kOptimal: return "OPTIMAL";
    case OracleStatus::kInfeasible: return "INFEASIBLE";
    case OracleStatus::kUnbounded: return "UNBOUNDED";
    case OracleStatus::kInconclusive: return "INCONCLUSIVE";
  }
  return "UNKNOWN";
}

std::vector<Vector> enumerateVertices(const Matrix& a, const Vector& b,
                                      const EnumerationOptions& options) {
  const int n = static_cast<int>(a.cols());
  requireDeskScale(n, options);
  std::vector<Vector> vertices;
  const int r = numericRank(a);
  if (r == 0) {
    if (b.size() == 0 || b.cwiseAbs().maxCoeff() <= 1e-12) vertices.push_back(Vector::Zero(n));
    return vertices;
  }
  std::vector<int> comb(r);
  for (int i = 0; i < r; ++i) comb[i] = i;
  do {
    const Matrix basis = selectColumns(a, comb);
    if (numericRank(basis) < r) continue;
    auto xb = solveConsistent(basis, b, 1e-9);
    if (!xb) continue;
    if (xb->size() && xb->minCoeff() < -1e-9 * std::max(1.0, xb->cwiseAbs().maxCoeff())) continue;
    Vector x = Vector::Zero(n);
    for (int i = 0; i < r; ++i) x(comb[i]) = std::max(0.0, (*xb)(i));
    pushUnique(vertices, x);
  } while (nextCombination(comb, n));
  return vertices;
}

std::vector<Vector> enumerateVertices(const QpInstance& inst,
                                      const EnumerationOptions& options) {
  return enumerateVertices(inst.A, inst.b, options);
}

std::vector<Vector> recessionVertices(const Matrix& a,
                                      const EnumerationOptions& options) {
  const auto n = a.cols();
  Matrix stacked(a.rows() + 1, n);
  stacked << a, Matrix::Ones(1, n);
  Vector rhs = Vector::Zero(a.rows() + 1);
  rhs(a.rows()) = 1.0;
  return enumerateVertices(stacked, rhs, options);
}

OracleResult minimizeQuadOverPolytope(const Matrix& q, const Vector& c,
                                      const Matrix& a, const Vector& b,
                                      const std::optional<Vector>& upper,
                                      const EnumerationOptions& options) {
  const int n = static_cast<int>(c.size());
  requireDeskScale(n, options);
  const Vector hi = upper ? *upper : Vector::Constant(n, kInf);
  if (hi.size() != n) throw Error(ErrorCode::kDimensionMismatch, "upper bound has wrong length");

  OracleResult result;

  // Recession directions of the region: free (unbounded-above) columns only.
  std::vector<int> unbounded_cols;
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(hi(j))) unbounded_cols.push_back(j);
  }
  std::vector<Vector> rays;
  if (!unbounded_cols.empty()) {
    for (const Vector& r : recessionVertices(selectColumns(a, unbounded_cols), options)) {
      Vector d = Vector::Zero(n);
      for (std::size_t k = 0; k < unbounded_cols.size(); ++k) d(unbounded_cols[k]) = r(k);
      rays.push_back(d);
    }
  }

  FaceScan scan = scanFaces(q, c, a, b, hi, options.tol);
  result.faces_explored = scan.faces;
  if (scan.candidates.empty()) {
    // Every nonempty region has a candidate on some vertex face.
    result.status = OracleStatus::kInfeasible;
    result.value = kInf;
    return result;
  }

  const double qscale = scaleOf(q);
  const double curvature_tol = 1e-9 * qscale;
  if (!rays.empty()) {
    // Unbounded region. Negative curvature along an extreme ray, or a
    // zero-curvature ray along which some candidate descends, proves -inf.
    for (const Vector& d : rays) {
      const double curv = d.dot(q * d);
      if (curv < -curvature_tol) {
        // Extreme rays alone need not reach the minimum curvature; that is
        // the analysis module's job. An extreme ray with negative curvature
        // is still a valid witness.
        result.status = OracleStatus::kUnbounded;
        result.value = -kInf;
        result.direction = d;
        result.anchor = scan.candidates.front();
        return result;
      }
    }
    const Matrix ones_a = [&] {
      Matrix s(a.rows() + 1, unbounded_cols.size());
      s << selectColumns(a, unbounded_cols), Matrix::Ones(1, unbounded_cols.size());
      return s;
    }();
    Vector rhs = Vector::Zero(a.rows() + 1);
    rhs(a.rows()) = 1.0;
    const Matrix q_sub = [&] {
      Matrix s(unbounded_cols.size(), unbounded_cols.size());
      for (std::size_t i = 0; i < unbounded_cols.size(); ++i)
        for (std::size_t k = 0; k < unbounded_cols.size(); ++k)
          s(i, k) = q(unbounded_cols[i], unbounded_cols[k]);
      return s;
    }();
    FaceScan curv = scanFaces(q_sub, Vector::Zero(unbounded_cols.size()), ones_a, rhs,
                              Vector::Constant(unbounded_cols.size(), kInf), options.tol);
    result.faces_explored += curv.faces;
    for (std::size_t k = 0; k < curv.candidates.size(); ++k) {
      Vector d = Vector::Zero(n);
      for (std::size_t i = 0; i < unbounded_cols.size(); ++i) d(unbounded_cols[i]) = curv.candidates[k](i);
      if (curv.values[k] < -curvature_tol) {
        result.status = OracleStatus::kUnbounded;
        result.value = -kInf;
        result.direction = d;
        result.anchor = scan.candidates.front();
        return result;
      }
      if (curv.values[k] <= curvature_tol) rays.push_back(d);
    }
    for (const Vector& d : rays) {
      if (d.dot(q * d) > curvature_tol) continue;
      for (const Vector& x : scan.candidates) {
        if ((q * x + c).dot(d) < -1e-9 * std::max(1.0, c.cwiseAbs().maxCoeff() + qscale)) {
          result.status = OracleStatus::kUnbounded;
          result.value = -kInf;
          result.direction = d;
          result.anchor = x;
          return result;
        }
      }
    }
  }

  double best = kInf;
  for (double v : scan.values) best = std::min(best, v);
  const double value_tol = 1e-9 * std::max(1.0, std::abs(best));
  for (std::size_t k = 0; k < scan.candidates.size(); ++k) {
    if (scan.values[k] <= best + value_tol) pushUnique(result.minimizers, scan.candidates[k]);
  }
  result.status = OracleStatus::kOptimal;
  result.value = best;
  result.attained = true;
  return result;
}

LinearMinimum minimizeLinear(const Vector& g, const Matrix& a, const Vector& b,
                             const EnumerationOptions& options) {
  const int n = static_cast<int>(g.size());
  LinearMinimum out;
  const auto vertices = enumerateVertices(a, b, options);
  if (vertices.empty()) {
    out.value = kInf;
    out.argmin = Vector::Zero(n);
    return out;
  }
  const double tol = 1e-9 * std::max(1.0, g.cwiseAbs().maxCoeff());
  for (const Vector& r : recessionVertices(a, options)) {
    if (g.dot(r) < -tol) {
      out.value = -kInf;
      out.argmin = vertices.front();
      out.ray = r;
      return out;
    }
  }
  out.value = kInf;
  for (const Vector& v : vertices) {
    const double val = g.dot(v);
    if (val < out.value) {
      out.value = val;
      out.argmin = v;
    }
  }
  return out;
}

OracleResult globalSolve(const QpInstance& inst,
                         const EnumerationOptions& options) {
  requireDeskScale(inst.n(), options);
  OracleResult result;
  if (enumerateVertices(inst, options).empty()) {
    result.status = OracleStatus::kInfeasible;
    result.value = kInf;
    return result;
  }
  const bool bounded = recessionVertices(inst.A, options).empty();
  if (!bounded) {
    const UnboundednessVerdict verdict = detectUnbounded(inst, options);
    if (verdict.status != UnboundednessStatus::kNotDetected) {
      result.status = OracleStatus::kUnbounded;
      result.value = -kInf;
      result.direction = verdict.direction;
      result.anchor = verdict.point;
      return result;
    }
  }

  result = minimizeQuadOverPolytope(inst.Q, inst.c, inst.A, inst.b, std::nullopt, options);
  if (result.status != OracleStatus::kOptimal || bounded) return result;

  // Unbounded S, no descent found. Certify boundedness below or say so.
  const RecessionReport rec = analyzeRecessionCone(inst, options);
  if (rec.min_curvature > 1e-9 * scaleOf(inst.Q)) {
    result.certificate = "recession directions all have positive curvature";
    return result;
  }
  if (inst.c.minCoeff() >= 0.0 &&
      checkCopositivityDeskScale(inst.Q, options).min_value >= -1e-8) {
    result.certificate = "Q copositive and c >= 0";
    return result;
  }
  result.status = OracleStatus::kInconclusive;
  result.certificate = "zero-curvature recession directions present; boundedness not certified";
  return result;
}

namespace {

// Exact feasibility of {A'y + E_Z s = g, s >= 0} via basic solutions.
std::optional<KktCertificate> exactMultipliers(const QpInstance& inst,
                                               const Vector& g,
                                               const std::vector<int>& zero) {
  const int n = inst.n();
  const int m = inst.m();
  const int k = 2 * m + static_cast<int>(zero.size());
  Matrix system(n, k);
  system.leftCols(m) = inst.A.transpose();
  system.middleCols(m, m) = -inst.A.transpose();
  for (std::size_t i = 0; i < zero.size(); ++i) {
    system.col(2 * m + i) = Vector::Unit(n, zero[i]);
  }
  EnumerationOptions wide;
  wide.cap = std::max(k, 1);
  const auto bases = enumerateVertices(system, g, wide);
  if (bases.empty()) return std::nullopt;
  const Vector& z = bases.front();
  KktCertificate cert;
  cert.y = z.head(m) - z.segment(m, m);
  cert.s = Vector::Zero(n);
  for (std::size_t i = 0; i < zero.size(); ++i) cert.s(zero[i]) = z(2 * m + i);
  return cert;
}

}  // namespace

LocalMinVerdict verifyLocalMinimizer(const QpInstance& inst, const Vector& x,
                                     double tol, double box,
                                     const EnumerationOptions& options) {
  requireDeskScale(inst.n(), options);
  if (!isFeasible(inst, x, std::max(tol, kFeasibilityTol))) {
    throw Error(ErrorCode::kPointInfeasible, "point is not feasible");
  }
  const int n = inst.n();
  const int m = inst.m();
  const IndexSets sets = indexSets(x, tol);
  const Vector g = inst.Q * x + inst.c;
  const double scale = std::max({1.0, g.cwiseAbs().maxCoeff(), scaleOf(inst.A)});

  // First order: least squares for (y, s_Z) with s_P = 0.
  const int nz = static_cast<int>(sets.zero.size());
  Matrix system(n, m + nz);
  system.leftCols(m) = inst.A.transpose();
  for (int i = 0; i < nz; ++i) system.col(m + i) = Vector::Unit(n, sets.zero[i]);
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(system);
  const Vector sol = cod.solve(g);

  KktCertificate cert;
  cert.y = sol.head(m);
  cert.s = Vector::Zero(n);
  for (int i = 0; i < nz; ++i) cert.s(sets.zero[i]) = sol(m + i);

  auto finish = [&](KktCertificate& c) {
    c.stationarity_residual = (g - inst.A.transpose() * c.y - c.s).cwiseAbs().maxCoeff();
    c.min_multiplier = c.s.size() ? c.s.minCoeff() : 0.0;
    c.complementarity = x.cwiseProduct(c.s).cwiseAbs().maxCoeff();
  };
  finish(cert);

  LocalMinVerdict verdict;
  const bool stationary = cert.stationarity_residual <= tol * scale;
  if (stationary && cert.min_multiplier >= -tol * scale) {
    verdict.kkt = cert;
  } else if (stationary) {
    // Least-norm multipliers can be negative when they are not unique.
    if (auto exact = exactMultipliers(inst, g, sets.zero)) {
      finish(*exact);
      if (exact->stationarity_residual <= tol * scale) verdict.kkt = *exact;
    }
  }
  if (!verdict.kkt) return verdict;

  // Second order: min d'Qd over {Ad = 0, g'd = 0, d_Z >= 0} within the box.
  // Free components are shifted, d = w - box, so all variables are bounded
  // below by zero.
  Vector shift = Vector::Zero(n);
  Vector upper = Vector::Constant(n, box);
  for (int j : sets.positive) {
    shift(j) = box;
    upper(j) = 2.0 * box;
  }
  Matrix cons(m + 1, n);
  cons << inst.A, g.transpose();
  const Vector rhs = cons * shift;
  const Vector lin = -inst.Q * shift;
  const double constant = shift.dot(inst.Q * shift);
  EnumerationOptions inner = options;
  const OracleResult so = minimizeQuadOverPolytope(inst.Q, lin, cons, rhs, upper, inner);
  if (so.status != OracleStatus::kOptimal) {
    verdict.second_order_min = 0.0;
  } else {
    verdict.second_order_min = so.value + constant;
    if (!so.minimizers.empty()) verdict.descent_direction = so.minimizers.front() - shift;
  }
  verdict.is_local_min =
      verdict.second_order_min >= -tol * scaleOf(inst.Q) * box * box;
  if (verdict.is_local_min) verdict.descent_direction.reset();
  return verdict;
}

}  // namespace qprelax
