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

#include "qprelax/report.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

#include "json.hpp"

namespace qprelax {

using json = nlohmann::json;

namespace {

json num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

json vec(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(num(v(i)));
  return out;
}

json mat(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(vec(m.row(i).transpose()));
  return out;
}

json summary(const QpInstance& inst) {
  return {{"name", inst.name}, {"n", inst.n()}, {"m", inst.m()}};
}

json certificateJson(const QpInstance& inst, Cone cone, const RecessionCertificate& cert,
                     const SolveOptions& options) {
  const CertificateCheck check = verifyCertificate(inst, cone, cert, 1e-6, options.tol_cert);
  return {{"objective_rate", num(cert.objective_rate)},
          {"trace_norm", num(cert.trace_norm)},
          {"verified_recession", check.recessionOk()},
          {"verified_negative_rate", check.unboundedOk()},
          {"cone_violation", num(check.cone_violation)},
          {"tolerance", 1e-6},
          {"rate_tolerance", options.tol_cert},
          {"D", mat(cert.d)}};
}

json relaxationJson(const QpInstance& inst, Cone cone, const RelaxationResult& r,
                    const SolveOptions& options) {
  json out = {{"cone", coneName(cone)},
              {"status", solveStatusName(r.status)},
              {"value", num(r.value)},
              {"iterations", r.iterations},
              {"residuals", {{"primal", num(r.residuals.primal)}, {"dual", num(r.residuals.dual)}}},
              {"tolerance", {{"primal", options.tol_primal}, {"dual", options.tol_dual}}},
              {"note", r.note}};
  if (r.point) {
    out["x"] = vec(r.point->x());
    const ValidationReport v = validateLiftedPoint(inst, *r.point, cone, 10 * options.tol_primal);
    out["point_valid"] = v.ok();
  }
  if (r.certificate) out["certificate"] = certificateJson(inst, cone, *r.certificate, options);
  return out;
}

json oracleJson(const OracleResult& r) {
  json out = {{"status", oracleStatusName(r.status)},
              {"value", num(r.value)},
              {"attained", r.attained},
              {"faces_explored", r.faces_explored},
              {"tolerance", 1e-9}};
  json mins = json::array();
  for (const Vector& x : r.minimizers) mins.push_back(vec(x));
  out["minimizers"] = mins;
  if (r.direction) out["direction"] = vec(*r.direction);
  if (r.anchor) out["anchor"] = vec(*r.anchor);
  if (!r.certificate.empty()) out["certificate"] = r.certificate;
  return out;
}

// Runs fn, storing its JSON under key or a skip notice when the step
// cannot run (desk-scale limit).
void attempt(json& report, const std::string& key, const std::function<json()>& fn) {
  try {
    report[key] = fn();
  } catch (const Error& e) {
    report[key] = {{"skipped", true},
                   {"error", errorCodeName(e.code())},
                   {"reason", e.what()}};
  }
}

bool skipped(const json& j) { return j.is_object() && j.contains("skipped"); }

json structural(const QpInstance& inst, const ReportOptions& options) {
  json report;
  report["instance"] = summary(inst);
  const auto& en = options.enumeration;
  attempt(report, "feasibility", [&] {
    const auto vertices = enumerateVertices(inst, en);
    return json{{"nonempty", !vertices.empty()},
                {"vertices", vertices.size()},
                {"tolerance", kFeasibilityTol}};
  });
  attempt(report, "recession", [&] {
    const RecessionReport rec = analyzeRecessionCone(inst, en);
    json j = {{"l_nontrivial", rec.l_nontrivial},
              {"min_curvature", num(rec.min_curvature)},
              {"zero_directions", rec.zero_directions.size()},
              {"tolerance", rec.tolerance}};
    if (rec.neg_direction) j["negative_direction"] = vec(*rec.neg_direction);
    return j;
  });
  attempt(report, "nullspace_curvature", [&] {
    const NullspaceCurvatureReport nc = checkPsdOnNullspace(inst);
    json j = {{"psd_on_nullspace", nc.holds},
              {"min_eigenvalue", num(nc.min_eigenvalue)},
              {"tolerance", 1e-9}};
    if (nc.witness) j["witness"] = vec(*nc.witness);
    return j;
  });
  attempt(report, "copositivity", [&] {
    const CopositivityResult cp = checkCopositivityDeskScale(inst.Q, en);
    return json{{"simplex_min", num(cp.min_value)},
                {"copositive", cp.min_value >= -1e-8},
                {"c_nonnegative", inst.c.minCoeff() >= 0.0},
                {"tolerance", 1e-8}};
  });
  attempt(report, "unboundedness", [&] {
    const UnboundednessVerdict v = detectUnbounded(inst, en);
    json j = {{"verdict", unboundednessStatusName(v.status)}};
    if (v.direction) j["direction"] = vec(*v.direction);
    if (v.point) j["point"] = vec(*v.point);
    return j;
  });
  return report;
}

json check(const std::string& claim, bool applicable, bool passed, const std::string& detail,
           double tol) {
  return {{"claim", claim},
          {"applicable", applicable},
          {"passed", applicable ? json(passed) : json(nullptr)},
          {"detail", detail},
          {"tolerance", tol}};
}

}  // namespace

std::string relaxationResultJson(const QpInstance& inst, Cone cone,
                                 const RelaxationResult& result,
                                 const SolveOptions& options) {
  json out = relaxationJson(inst, cone, result, options);
  out["instance"] = summary(inst);
  if (result.point) out["Y"] = mat(result.point->y);
  return out.dump();
}

std::string certificateSearchJson(const QpInstance& inst, Cone cone,
                                  CertificateMode mode,
                                  const CertificateSearchResult& result,
                                  const SolveOptions& options) {
  json out = {{"instance", summary(inst)},
              {"cone", coneName(cone)},
              {"mode", mode == CertificateMode::kObjective ? "objective" : "feasibility"},
              {"outcome", searchOutcomeName(result.outcome)},
              {"best_rate", num(result.best_rate)},
              {"iterations", result.iterations},
              {"residuals",
               {{"primal", num(result.residuals.primal)}, {"dual", num(result.residuals.dual)}}},
              {"note", result.note}};
  if (result.certificate) {
    out["certificate"] = certificateJson(inst, cone, *result.certificate, options);
  }
  return out.dump();
}

std::string oracleResultJson(const QpInstance& inst, const OracleResult& result) {
  json out = oracleJson(result);
  out["instance"] = summary(inst);
  return out.dump();
}

std::string localMinJson(const LocalMinVerdict& verdict, double tol) {
  json out = {{"is_local_min", verdict.is_local_min},
              {"second_order_min", num(verdict.second_order_min)},
              {"tolerance", tol}};
  if (verdict.kkt) {
    out["kkt"] = {{"y", vec(verdict.kkt->y)},
                  {"s", vec(verdict.kkt->s)},
                  {"stationarity_residual", num(verdict.kkt->stationarity_residual)},
                  {"min_multiplier", num(verdict.kkt->min_multiplier)},
                  {"complementarity", num(verdict.kkt->complementarity)}};
  } else {
    out["kkt"] = nullptr;
  }
  if (verdict.descent_direction) out["descent_direction"] = vec(*verdict.descent_direction);
  return out.dump();
}

std::string analyzeReport(const QpInstance& inst, const ReportOptions& options) {
  return structural(inst, options).dump();
}

std::string compareReport(const QpInstance& inst, const ReportOptions& options) {
  json report = structural(inst, options);
  json relax = json::object();
  std::map<Cone, RelaxationResult> results;
  for (Cone cone : {Cone::kDnn, Cone::kPsd0}) {
    attempt(relax, std::string(coneName(cone)), [&] {
      results[cone] = solveRelaxation(inst, cone, options.solve);
      return relaxationJson(inst, cone, results[cone], options.solve);
    });
  }
  report["relaxations"] = relax;
  OracleResult oracle;
  bool have_oracle = false;
  attempt(report, "oracle", [&] {
    oracle = globalSolve(inst, options.enumeration);
    have_oracle = true;
    return oracleJson(oracle);
  });

  const double tol = options.tol;
  const bool oracle_finite = have_oracle && oracle.status == OracleStatus::kOptimal;
  const double lstar = oracle.value;
  const double scaled = tol * (1.0 + std::abs(lstar));
  auto has = [&](Cone c) { return results.count(c) > 0; };
  auto status = [&](Cone c) { return results.at(c).status; };
  json checks = json::array();

  const bool empty = have_oracle && oracle.status == OracleStatus::kInfeasible;
  checks.push_back(check(
      "empty S gives infeasible relaxations", empty && has(Cone::kDnn) && has(Cone::kPsd0),
      empty && has(Cone::kDnn) && has(Cone::kPsd0) &&
          status(Cone::kDnn) == SolveStatus::kInfeasible &&
          status(Cone::kPsd0) == SolveStatus::kInfeasible,
      "both cones must report INFEASIBLE", 0.0));

  for (Cone cone : {Cone::kDnn, Cone::kPsd0}) {
    const bool applicable = oracle_finite && has(cone) && status(cone) == SolveStatus::kOptimal;
    const double v = applicable ? results.at(cone).value : 0.0;
    std::ostringstream detail;
    if (applicable) detail << coneName(cone) << " value " << v << " vs oracle " << lstar;
    checks.push_back(check(std::string("relaxation value is a lower bound (") +
                               std::string(coneName(cone)) + ")",
                           applicable, v <= lstar + scaled, detail.str(), tol));
  }

  {
    const bool applicable = has(Cone::kDnn) && has(Cone::kPsd0) &&
                            status(Cone::kDnn) == SolveStatus::kOptimal &&
                            status(Cone::kPsd0) == SolveStatus::kOptimal;
    const bool passed = applicable && results.at(Cone::kPsd0).value <=
                                          results.at(Cone::kDnn).value +
                                              tol * (1.0 + std::abs(results.at(Cone::kDnn).value));
    checks.push_back(check("PSD0 value does not exceed DNN value", applicable, passed, "", tol));
  }

  const json& nc = report["nullspace_curvature"];
  const bool nonempty = report["feasibility"].value("nonempty", false);
  if (!skipped(nc)) {
    const bool holds = nc["psd_on_nullspace"].get<bool>();
    bool passed = true;
    std::string detail;
    const bool applicable = holds && nonempty && oracle_finite;
    for (Cone cone : {Cone::kDnn, Cone::kPsd0}) {
      if (!applicable) break;
      if (!has(cone) || status(cone) != SolveStatus::kOptimal ||
          std::abs(results.at(cone).value - lstar) > scaled) {
        passed = false;
        detail = std::string(coneName(cone)) + " value differs from the oracle";
      }
    }
    checks.push_back(
        check("relaxations are exact when Q is PSD on null(A)", applicable, passed, detail, tol));
    const bool fails = !holds && nonempty && has(Cone::kPsd0);
    checks.push_back(check("PSD0 relaxation is unbounded when Q is not PSD on null(A)", fails,
                           fails && status(Cone::kPsd0) == SolveStatus::kUnbounded, "", 0.0));
  }

  const json& rec = report["recession"];
  if (!skipped(rec)) {
    const bool neg = rec.contains("negative_direction");
    checks.push_back(check("negative recession curvature makes the DNN relaxation unbounded",
                           neg && nonempty && has(Cone::kDnn),
                           neg && has(Cone::kDnn) && status(Cone::kDnn) == SolveStatus::kUnbounded,
                           "", 0.0));
  }

  for (Cone cone : {Cone::kDnn, Cone::kPsd0}) {
    const bool applicable = has(cone) && status(cone) == SolveStatus::kUnbounded;
    const bool passed =
        applicable && results.at(cone).certificate &&
        verifyCertificate(inst, cone, *results.at(cone).certificate, 1e-6, options.solve.tol_cert)
            .unboundedOk();
    checks.push_back(check(std::string("unbounded verdict carries a verified certificate (") +
                               std::string(coneName(cone)) + ")",
                           applicable, passed, "", 1e-6));
  }

  const json& cop = report["copositivity"];
  if (!skipped(cop) && have_oracle) {
    const bool certified = cop["copositive"].get<bool>() && cop["c_nonnegative"].get<bool>();
    checks.push_back(check("copositive Q with c >= 0 gives a finite optimum", certified && nonempty,
                           certified && oracle_finite, "", 1e-8));
  }
  report["checks"] = checks;
  return report.dump();
}

namespace {

std::string scalarText(const json& j) {
  if (j.is_number_float()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", j.get<double>());
    return buf;
  }
  if (j.is_string()) return j.get<std::string>();
  return j.dump();
}

bool isScalarArray(const json& j) {
  if (!j.is_array()) return false;
  for (const json& e : j) {
    if (e.is_structured()) return false;
  }
  return true;
}

std::string inlineArray(const json& j) {
  std::string out = "[";
  bool first = true;
  for (const json& e : j) {
    if (!first) out += ", ";
    first = false;
    out += isScalarArray(e) && e.is_array() ? inlineArray(e) : scalarText(e);
  }
  return out + "]";
}

bool isMatrix(const json& j) {
  if (!j.is_array() || j.empty()) return false;
  for (const json& e : j) {
    if (!isScalarArray(e)) return false;
  }
  return true;
}

void renderValue(std::ostringstream& out, const json& j, int indent);

void renderObject(std::ostringstream& out, const json& j, int indent) {
  const std::string pad(indent, ' ');
  for (auto it = j.begin(); it != j.end(); ++it) {
    const json& v = it.value();
    if (v.is_object()) {
      out << pad << it.key() << ":\n";
      renderObject(out, v, indent + 2);
    } else if (isScalarArray(v)) {
      out << pad << it.key() << ": " << inlineArray(v) << "\n";
    } else if (isMatrix(v)) {
      out << pad << it.key() << ":\n";
      for (const json& row : v) out << pad << "  " << inlineArray(row) << "\n";
    } else if (v.is_array()) {
      out << pad << it.key() << ":\n";
      for (const json& e : v) renderValue(out, e, indent + 2);
    } else {
      out << pad << it.key() << ": " << scalarText(v) << "\n";
    }
  }
}

void renderValue(std::ostringstream& out, const json& j, int indent) {
  const std::string pad(indent, ' ');
  if (j.is_object()) {
    out << pad << "-\n";
    renderObject(out, j, indent + 2);
  } else if (isScalarArray(j)) {
    out << pad << "- " << inlineArray(j) << "\n";
  } else {
    out << pad << "- " << scalarText(j) << "\n";
  }
}

}  // namespace

std::string renderReportText(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("report is not JSON: ") + e.what());
  }
  std::ostringstream out;
  if (j.is_object()) {
    renderObject(out, j, 0);
  } else {
    renderValue(out, j, 0);
  }
  return out.str();
}

}  // namespace qprelax
