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

#include "qprelax/core.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "qprelax/numerics.hpp"

namespace qprelax {

using nlohmann::json;

std::string_view errorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kAsymmetricQ: return "AsymmetricQ";
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kNegativeComponent: return "NegativeComponent";
    case ErrorCode::kInfeasibleMixturePoint: return "InfeasibleMixturePoint";
    case ErrorCode::kRayNotInRecessionCone: return "RayNotInRecessionCone";
    case ErrorCode::kWeightsNotSimplex: return "WeightsNotSimplex";
    case ErrorCode::kPointInfeasible: return "PointInfeasible";
    case ErrorCode::kDeskScaleLimit: return "DeskScaleLimit";
    case ErrorCode::kInvalidDimension: return "InvalidDimension";
    case ErrorCode::kGenerationFailed: return "GenerationFailed";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNumeric: return "NumericFailure";
  }
  return "Unknown";
}

std::string_view coneName(Cone cone) {
  return cone == Cone::kDnn ? "dnn" : "psd0";
}

Cone parseCone(std::string_view text) {
  if (text == "dnn" || text == "DNN") return Cone::kDnn;
  if (text == "psd0" || text == "PSD0") return Cone::kPsd0;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown cone '" + std::string(text) + "' (expected dnn|psd0)");
}

double scaleOf(const Matrix& m) {
  if (m.size() == 0) return 1.0;
  return std::max(1.0, m.cwiseAbs().maxCoeff());
}

namespace {

void requireFinite(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw Error(ErrorCode::kNonFinite,
                std::string(what) + " contains non-finite entries");
  }
}

std::string shapeOf(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

// Integral values are written as JSON integers so integer instances
// round-trip textually.
json numberToJson(double v) {
  if (std::isfinite(v) && v == std::nearbyint(v) && std::abs(v) < 9.0e15) {
    return static_cast<std::int64_t>(v);
  }
  return v;
}

json matrixToJson(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(numberToJson(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vectorToJson(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(numberToJson(v(i)));
  return out;
}

double toDouble(const json& value, const char* field) {
  if (!value.is_number()) {
    throw Error(ErrorCode::kParse,
                std::string("non-numeric entry in field '") + field + "'");
  }
  return value.get<double>();
}

Matrix matrixFromJson(const json& value, const char* field) {
  if (!value.is_array()) {
    throw Error(ErrorCode::kParse,
                std::string("field '") + field + "' must be an array of rows");
  }
  const auto rows = static_cast<Eigen::Index>(value.size());
  Eigen::Index cols = -1;
  for (const auto& row : value) {
    if (!row.is_array()) {
      throw Error(ErrorCode::kParse,
                  std::string("field '") + field + "' must be an array of rows");
    }
    if (cols < 0) cols = static_cast<Eigen::Index>(row.size());
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw Error(ErrorCode::kDimensionMismatch,
                  std::string("ragged rows in field '") + field + "'");
    }
  }
  Matrix m(rows, std::max<Eigen::Index>(cols, 0));
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = toDouble(value[i][j], field);
  }
  return m;
}

Vector vectorFromJson(const json& value, const char* field) {
  if (!value.is_array()) {
    throw Error(ErrorCode::kParse,
                std::string("field '") + field + "' must be an array");
  }
  Vector v(static_cast<Eigen::Index>(value.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = toDouble(value[i], field);
  return v;
}

const json& requireField(const json& doc, const char* field) {
  auto it = doc.find(field);
  if (it == doc.end()) {
    throw Error(ErrorCode::kParse, std::string("missing field '") + field + "'");
  }
  return *it;
}

std::string readFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

QpInstance makeInstance(std::string name, Matrix Q, Vector c, Matrix A,
                        Vector b, const LoadOptions& options) {
  const auto n = c.size();
  const auto m = b.size();
  if (n <= 0) throw Error(ErrorCode::kDimensionMismatch, "n must be positive");
  if (m <= 0) throw Error(ErrorCode::kDimensionMismatch, "m must be positive");
  if (Q.rows() != n || Q.cols() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "Q is " + shapeOf(Q) + " but c has length " + std::to_string(n));
  }
  if (A.rows() != m || A.cols() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "A is " + shapeOf(A) + " but expected " + std::to_string(m) +
                    "x" + std::to_string(n));
  }
  requireFinite(Q, "Q");
  requireFinite(c, "c");
  requireFinite(A, "A");
  requireFinite(b, "b");

  QpInstance inst;
  inst.name = std::move(name);
  if (Q != Q.transpose()) {
    if (!options.symmetrize) {
      throw Error(ErrorCode::kAsymmetricQ, "Q is not symmetric");
    }
    const double asym = (Q - Q.transpose()).cwiseAbs().maxCoeff();
    Q = (0.5 * (Q + Q.transpose())).eval();
    std::ostringstream note;
    note << "Q was asymmetric (max |Q-Q'| = " << asym << "); symmetrized";
    inst.warnings.push_back(note.str());
  }
  inst.Q = std::move(Q);
  inst.c = std::move(c);
  inst.A = std::move(A);
  inst.b = std::move(b);
  return inst;
}

QpInstance parseInstance(std::string_view json_text,
                         const LoadOptions& options) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::kParse, "instance must be an object");

  std::string name = "unnamed";
  if (auto it = doc.find("name"); it != doc.end()) {
    if (!it->is_string()) throw Error(ErrorCode::kParse, "'name' must be a string");
    name = it->get<std::string>();
  }
  const json& n_field = requireField(doc, "n");
  const json& m_field = requireField(doc, "m");
  if (!n_field.is_number_integer() || !m_field.is_number_integer()) {
    throw Error(ErrorCode::kParse, "'n' and 'm' must be integers");
  }
  const auto n = n_field.get<long long>();
  const auto m = m_field.get<long long>();

  Matrix Q = matrixFromJson(requireField(doc, "Q"), "Q");
  Vector c = vectorFromJson(requireField(doc, "c"), "c");
  Matrix A = matrixFromJson(requireField(doc, "A"), "A");
  Vector b = vectorFromJson(requireField(doc, "b"), "b");
  // Empty row lists parse as 0x0; give them the declared width.
  if (A.rows() == 0) A.resize(0, n);

  if (c.size() != n || b.size() != m) {
    throw Error(ErrorCode::kDimensionMismatch,
                "declared n=" + std::to_string(n) + ", m=" + std::to_string(m) +
                    " but c has length " + std::to_string(c.size()) +
                    " and b has length " + std::to_string(b.size()));
  }
  return makeInstance(std::move(name), std::move(Q), std::move(c), std::move(A),
                      std::move(b), options);
}

QpInstance loadInstance(const std::string& path, const LoadOptions& options) {
  return parseInstance(readFile(path), options);
}

std::string instanceToJson(const QpInstance& inst) {
  json doc;
  doc["name"] = inst.name;
  doc["n"] = inst.n();
  doc["m"] = inst.m();
  doc["Q"] = matrixToJson(inst.Q);
  doc["c"] = vectorToJson(inst.c);
  doc["A"] = matrixToJson(inst.A);
  doc["b"] = vectorToJson(inst.b);
  return doc.dump(2);
}

void saveInstance(const QpInstance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  out << instanceToJson(inst) << "\n";
}

double evaluateObjective(const QpInstance& inst, const Vector& x) {
  if (x.size() != inst.n()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "x has length " + std::to_string(x.size()) + ", expected " +
                    std::to_string(inst.n()));
  }
  if (!x.allFinite()) throw Error(ErrorCode::kNonFinite, "x is not finite");
  return x.dot(inst.Q * x) + 2.0 * inst.c.dot(x);
}

bool isFeasible(const QpInstance& inst, const Vector& x, double tol) {
  if (x.size() != inst.n() || !x.allFinite()) return false;
  const double bnorm = inst.b.size() ? inst.b.cwiseAbs().maxCoeff() : 0.0;
  const double residual = (inst.A * x - inst.b).cwiseAbs().maxCoeff();
  return residual <= tol * (1.0 + bnorm) && x.minCoeff() >= -tol;
}

bool inRecessionCone(const QpInstance& inst, const Vector& d, double tol) {
  if (d.size() != inst.n() || !d.allFinite()) return false;
  const double scale =
      1.0 + inst.A.cwiseAbs().maxCoeff() * d.cwiseAbs().maxCoeff();
  return (inst.A * d).cwiseAbs().maxCoeff() <= tol * scale &&
         d.minCoeff() >= -tol;
}

LiftedProblem liftInstance(const QpInstance& inst, Cone cone) {
  const int n = inst.n();
  LiftedProblem lp;
  lp.n = n;
  lp.cone = cone;
  lp.qhat = Matrix::Zero(n + 1, n + 1);
  lp.qhat.block(0, 1, 1, n) = inst.c.transpose();
  lp.qhat.block(1, 0, n, 1) = inst.c;
  lp.qhat.block(1, 1, n, n) = inst.Q;

  lp.factor.resize(n + 1, inst.m());
  lp.factor.row(0) = inst.b.transpose();
  lp.factor.bottomRows(n) = -inst.A.transpose();
  lp.ahat = lp.factor * lp.factor.transpose();
  return lp;
}

Matrix LiftedPoint::gap() const {
  const Vector xv = x();
  return y.bottomRightCorner(xv.size(), xv.size()) - xv * xv.transpose();
}

LiftedPoint rankOneLift(const Vector& x) {
  Vector v(x.size() + 1);
  v << 1.0, x;
  return LiftedPoint{v * v.transpose()};
}

std::string liftedPointToJson(const LiftedPoint& point,
                              const std::string& name) {
  json doc;
  doc["name"] = name;
  doc["n"] = point.n();
  doc["Y"] = matrixToJson(point.y);
  return doc.dump(2);
}

LiftedPoint parseLiftedPoint(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("malformed JSON: ") + e.what());
  }
  Matrix y = matrixFromJson(requireField(doc, "Y"), "Y");
  if (y.rows() != y.cols() || y.rows() < 2) {
    throw Error(ErrorCode::kDimensionMismatch, "Y must be square with n >= 1");
  }
  return LiftedPoint{std::move(y)};
}

IndexSets indexSets(const Vector& x, double tol) {
  IndexSets sets;
  sets.tolerance = tol;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    if (x(j) < -tol) {
      throw Error(ErrorCode::kNegativeComponent,
                  "component " + std::to_string(j) + " is negative");
    }
    (x(j) > tol ? sets.positive : sets.zero).push_back(static_cast<int>(j));
  }
  return sets;
}

ValidationReport validateLiftedPoint(const QpInstance& inst,
                                     const LiftedPoint& point, Cone cone,
                                     double tol) {
  const int n = inst.n();
  if (point.y.rows() != n + 1 || point.y.cols() != n + 1) {
    throw Error(ErrorCode::kDimensionMismatch,
                "lifted point is " + shapeOf(point.y) + ", expected " +
                    std::to_string(n + 1) + "x" + std::to_string(n + 1));
  }
  const Matrix y = 0.5 * (point.y + point.y.transpose());
  const LiftedPoint sym{y};
  const double yscale = scaleOf(y);

  ValidationReport r;
  r.tolerance = tol;
  r.corner_error = std::abs(y(0, 0) - 1.0);
  r.unit_corner = r.corner_error <= tol;

  const Vector x = sym.x();
  const double bnorm = inst.b.cwiseAbs().maxCoeff();
  r.feasibility_error = std::max((inst.A * x - inst.b).cwiseAbs().maxCoeff() /
                                     (1.0 + bnorm),
                                 std::max(0.0, -x.minCoeff()));
  r.point_feasible = r.feasibility_error <= tol;

  const Matrix gap = sym.gap();
  r.gap_min_eigenvalue = minEigenvalue(gap);
  r.gap_psd = r.gap_min_eigenvalue >= -tol * yscale;
  r.gap_nullspace_error = (inst.A * gap).norm();
  r.gap_nullspace_error /= scaleOf(inst.A);
  r.gap_in_nullspace = r.gap_nullspace_error <= tol * yscale;

  double violation = std::max(0.0, -minEigenvalue(y));
  if (cone == Cone::kDnn) {
    violation = std::max(violation, -y.minCoeff());
  } else {
    violation = std::max(violation, -y.row(0).tail(n).minCoeff());
  }
  r.cone_violation = violation;
  r.cone_member = violation <= tol * yscale;
  return r;
}

LiftedPoint constructLiftedFromMixture(const QpInstance& inst,
                                       const MixtureCertificate& mix,
                                       double tol) {
  if (mix.points.empty() || mix.weights.size() != mix.points.size()) {
    throw Error(ErrorCode::kWeightsNotSimplex,
                "need one weight per point and at least one point");
  }
  double total = 0.0;
  for (double w : mix.weights) {
    if (!(w >= -tol)) throw Error(ErrorCode::kWeightsNotSimplex, "negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > tol * static_cast<double>(mix.weights.size())) {
    throw Error(ErrorCode::kWeightsNotSimplex, "weights do not sum to 1");
  }
  const int n = inst.n();
  for (std::size_t j = 0; j < mix.points.size(); ++j) {
    if (mix.points[j].size() != n) {
      throw Error(ErrorCode::kDimensionMismatch, "mixture point has wrong length");
    }
    if (!isFeasible(inst, mix.points[j], tol)) {
      throw Error(ErrorCode::kInfeasibleMixturePoint,
                  "mixture point " + std::to_string(j) + " is not in S");
    }
  }
  for (std::size_t j = 0; j < mix.rays.size(); ++j) {
    if (mix.rays[j].size() != n) {
      throw Error(ErrorCode::kDimensionMismatch, "mixture ray has wrong length");
    }
    if (!inRecessionCone(inst, mix.rays[j], tol)) {
      throw Error(ErrorCode::kRayNotInRecessionCone,
                  "ray " + std::to_string(j) + " is not in the recession cone");
    }
  }

  Matrix y = Matrix::Zero(n + 1, n + 1);
  Vector v(n + 1);
  for (std::size_t j = 0; j < mix.points.size(); ++j) {
    v << 1.0, mix.points[j];
    y.noalias() += mix.weights[j] * v * v.transpose();
  }
  for (const Vector& d : mix.rays) {
    v << 0.0, d;
    y.noalias() += v * v.transpose();
  }
  return LiftedPoint{y};
}

}  // namespace qprelax
