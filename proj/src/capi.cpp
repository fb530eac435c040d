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

#include "qprelax/qprelax.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "qprelax/analysis.hpp"
#include "qprelax/conic.hpp"
#include "qprelax/core.hpp"
#include "qprelax/generators.hpp"
#include "qprelax/oracle.hpp"
#include "qprelax/report.hpp"

struct qpr_instance {
  qprelax::QpInstance inst;
};

struct qpr_result {
  qprelax::QpInstance inst;
  qprelax::Cone cone;
  qprelax::SolveOptions options;
  qprelax::RelaxationResult result;
};

namespace {

using qprelax::ErrorCode;

thread_local std::string g_last_error;

qpr_status toStatus(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return QPR_ERR_PARSE;
    case ErrorCode::kIo: return QPR_ERR_IO;
    case ErrorCode::kDimensionMismatch: return QPR_ERR_DIMENSION_MISMATCH;
    case ErrorCode::kAsymmetricQ: return QPR_ERR_ASYMMETRIC_Q;
    case ErrorCode::kNonFinite: return QPR_ERR_NON_FINITE;
    case ErrorCode::kNegativeComponent: return QPR_ERR_NEGATIVE_COMPONENT;
    case ErrorCode::kInfeasibleMixturePoint: return QPR_ERR_INFEASIBLE_MIXTURE_POINT;
    case ErrorCode::kRayNotInRecessionCone: return QPR_ERR_RAY_NOT_IN_RECESSION_CONE;
    case ErrorCode::kWeightsNotSimplex: return QPR_ERR_WEIGHTS_NOT_SIMPLEX;
    case ErrorCode::kPointInfeasible: return QPR_ERR_POINT_INFEASIBLE;
    case ErrorCode::kDeskScaleLimit: return QPR_ERR_DESK_SCALE_LIMIT;
    case ErrorCode::kInvalidDimension: return QPR_ERR_INVALID_DIMENSION;
    case ErrorCode::kGenerationFailed: return QPR_ERR_GENERATION_FAILED;
    case ErrorCode::kInvalidArgument: return QPR_ERR_INVALID_ARGUMENT;
    case ErrorCode::kNumeric: return QPR_ERR_NUMERIC;
  }
  return QPR_ERR_INTERNAL;
}

template <typename Fn>
qpr_status guard(Fn&& fn) {
  g_last_error.clear();
  try {
    fn();
    return QPR_OK;
  } catch (const qprelax::Error& e) {
    g_last_error = e.what();
    return toStatus(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return QPR_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return QPR_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) {
    throw qprelax::Error(ErrorCode::kInvalidArgument, std::string(what) + " is null");
  }
}

char* dupString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

qprelax::Cone toCone(qpr_cone cone) {
  switch (cone) {
    case QPR_CONE_DNN: return qprelax::Cone::kDnn;
    case QPR_CONE_PSD0: return qprelax::Cone::kPsd0;
  }
  throw qprelax::Error(ErrorCode::kInvalidArgument, "unknown cone");
}

qprelax::SolveOptions toOptions(const qpr_solve_options* o) {
  qprelax::SolveOptions out;
  if (o == nullptr) return out;
  if (o->max_iterations <= 0 || !(o->tol_primal > 0) || !(o->tol_dual > 0) ||
      !(o->penalty > 0) || !(o->tol_cert > 0)) {
    throw qprelax::Error(ErrorCode::kInvalidArgument, "solve options must be positive");
  }
  out.max_iterations = o->max_iterations;
  out.tol_primal = o->tol_primal;
  out.tol_dual = o->tol_dual;
  out.penalty = o->penalty;
  out.tol_cert = o->tol_cert;
  return out;
}

qprelax::Vector readVector(const double* x, int n) {
  return Eigen::Map<const qprelax::Vector>(x, n);
}

void writeMatrix(const qprelax::Matrix& m, double* out) {
  Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      out, m.rows(), m.cols()) = m;
}

void emitGenerated(qprelax::QpInstance inst, const std::string& metadata, qpr_instance** out,
                   char** meta_out) {
  auto handle = std::make_unique<qpr_instance>(qpr_instance{std::move(inst)});
  if (meta_out) *meta_out = dupString(metadata);
  *out = handle.release();
}

}  // namespace

extern "C" {

const char* qpr_last_error(void) { return g_last_error.c_str(); }

const char* qpr_status_name(qpr_status status) {
  switch (status) {
    case QPR_OK: return "OK";
    case QPR_ERR_PARSE: return "ParseError";
    case QPR_ERR_IO: return "IoError";
    case QPR_ERR_DIMENSION_MISMATCH: return "DimensionMismatch";
    case QPR_ERR_ASYMMETRIC_Q: return "AsymmetricQ";
    case QPR_ERR_NON_FINITE: return "NonFinite";
    case QPR_ERR_NEGATIVE_COMPONENT: return "NegativeComponent";
    case QPR_ERR_INFEASIBLE_MIXTURE_POINT: return "InfeasibleMixturePoint";
    case QPR_ERR_RAY_NOT_IN_RECESSION_CONE: return "RayNotInRecessionCone";
    case QPR_ERR_WEIGHTS_NOT_SIMPLEX: return "WeightsNotSimplex";
    case QPR_ERR_POINT_INFEASIBLE: return "PointInfeasible";
    case QPR_ERR_DESK_SCALE_LIMIT: return "DeskScaleLimit";
    case QPR_ERR_INVALID_DIMENSION: return "InvalidDimension";
    case QPR_ERR_GENERATION_FAILED: return "GenerationFailed";
    case QPR_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case QPR_ERR_NUMERIC: return "NumericFailure";
    case QPR_ERR_INTERNAL: return "InternalError";
  }
  return "Unknown";
}

void qpr_string_free(char* s) { std::free(s); }

int qpr_enumeration_cap(void) { return qprelax::enumerationCap(); }

qpr_status qpr_instance_load(const char* path, int symmetrize, qpr_instance** out) {
  return guard([&] {
    require(path, "path");
    require(out, "out");
    qprelax::LoadOptions opts;
    opts.symmetrize = symmetrize != 0;
    *out = new qpr_instance{qprelax::loadInstance(path, opts)};
  });
}

qpr_status qpr_instance_parse(const char* json, int symmetrize, qpr_instance** out) {
  return guard([&] {
    require(json, "json");
    require(out, "out");
    qprelax::LoadOptions opts;
    opts.symmetrize = symmetrize != 0;
    *out = new qpr_instance{qprelax::parseInstance(json, opts)};
  });
}

qpr_status qpr_instance_create(const char* name, int n, int m, const double* q,
                               const double* c, const double* a, const double* b,
                               qpr_instance** out) {
  return guard([&] {
    require(q, "Q");
    require(c, "c");
    require(a, "A");
    require(b, "b");
    require(out, "out");
    if (n <= 0 || m <= 0) {
      throw qprelax::Error(ErrorCode::kInvalidDimension, "n and m must be positive");
    }
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    qprelax::Matrix qm = Eigen::Map<const RowMajor>(q, n, n);
    qprelax::Matrix am = Eigen::Map<const RowMajor>(a, m, n);
    *out = new qpr_instance{qprelax::makeInstance(name ? name : "", qm, readVector(c, n), am,
                                                  readVector(b, m))};
  });
}

void qpr_instance_free(qpr_instance* inst) { delete inst; }

int qpr_instance_n(const qpr_instance* inst) { return inst ? inst->inst.n() : 0; }
int qpr_instance_m(const qpr_instance* inst) { return inst ? inst->inst.m() : 0; }
const char* qpr_instance_name(const qpr_instance* inst) {
  return inst ? inst->inst.name.c_str() : "";
}

qpr_status qpr_instance_to_json(const qpr_instance* inst, char** out) {
  return guard([&] {
    require(inst, "instance");
    require(out, "out");
    *out = dupString(qprelax::instanceToJson(inst->inst));
  });
}

qpr_status qpr_instance_save(const qpr_instance* inst, const char* path) {
  return guard([&] {
    require(inst, "instance");
    require(path, "path");
    qprelax::saveInstance(inst->inst, path);
  });
}

qpr_status qpr_instance_objective(const qpr_instance* inst, const double* x, double* out) {
  return guard([&] {
    require(inst, "instance");
    require(x, "x");
    require(out, "out");
    *out = qprelax::evaluateObjective(inst->inst, readVector(x, inst->inst.n()));
  });
}

qpr_status qpr_instance_is_feasible(const qpr_instance* inst, const double* x, int* out) {
  return guard([&] {
    require(inst, "instance");
    require(x, "x");
    require(out, "out");
    *out = qprelax::isFeasible(inst->inst, readVector(x, inst->inst.n())) ? 1 : 0;
  });
}

qpr_status qpr_vector_load(const char* path, int n, double* out) {
  return guard([&] {
    require(path, "path");
    require(out, "out");
    std::ifstream in(path);
    if (!in) throw qprelax::Error(ErrorCode::kIo, std::string("cannot open ") + path);
    std::stringstream buf;
    buf << in.rdbuf();
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(buf.str());
    } catch (const nlohmann::json::exception& e) {
      throw qprelax::Error(ErrorCode::kParse, std::string(path) + ": " + e.what());
    }
    if (j.is_object() && j.contains("x")) j = j["x"];
    if (!j.is_array()) throw qprelax::Error(ErrorCode::kParse, "point must be a JSON array");
    if (static_cast<int>(j.size()) != n) {
      throw qprelax::Error(ErrorCode::kDimensionMismatch,
                           "point has " + std::to_string(j.size()) + " entries, expected " +
                               std::to_string(n));
    }
    for (int i = 0; i < n; ++i) {
      if (!j[i].is_number()) throw qprelax::Error(ErrorCode::kParse, "point entries must be numbers");
      out[i] = j[i].get<double>();
    }
  });
}

qpr_status qpr_generate_horn(qpr_instance** out, char** metadata) {
  return guard([&] {
    require(out, "out");
    qprelax::HornInstance h = qprelax::hornInstance();
    nlohmann::json meta = {{"kind", "horn"}, {"certificate_D", nlohmann::json::array()}};
    for (Eigen::Index i = 0; i < h.d.rows(); ++i) {
      std::vector<long long> row(h.d.cols());
      for (Eigen::Index j = 0; j < h.d.cols(); ++j) row[j] = h.d(i, j);
      meta["certificate_D"].push_back(row);
    }
    const qprelax::IntMatrix q = h.instance.Q.cast<long long>();
    const qprelax::IntMatrix a = h.instance.A.cast<long long>();
    meta["q_dot_d"] = q.cwiseProduct(h.d).sum();
    meta["ata_dot_d"] = (a.transpose() * a).cwiseProduct(h.d).sum();
    meta["a_times_d"] = std::vector<long long>(5);
    const qprelax::IntMatrix ad = a * h.d;
    for (int j = 0; j < 5; ++j) meta["a_times_d"][j] = ad(0, j);
    emitGenerated(std::move(h.instance), meta.dump(), out, metadata);
  });
}

qpr_status qpr_generate_horn_family(int n, uint64_t seed, qpr_instance** out,
                                    char** metadata) {
  return guard([&] {
    require(out, "out");
    qprelax::HornFamilyParams params;
    params.n = n;
    params.seed = seed;
    qprelax::HornFamilyInstance h = qprelax::hornFamily(params);
    nlohmann::json meta = {{"kind", "horn-family"},
                           {"n", n},
                           {"seed", seed},
                           {"prng", "mt19937_64"},
                           {"q_dot_d", h.q_dot_d},
                           {"ata_dot_d", h.ata_dot_d},
                           {"certificate_valid", h.certificate_valid},
                           {"certificate_D", nlohmann::json::array()}};
    for (Eigen::Index i = 0; i < h.d.rows(); ++i) {
      std::vector<long long> row(h.d.cols());
      for (Eigen::Index j = 0; j < h.d.cols(); ++j) row[j] = h.d(i, j);
      meta["certificate_D"].push_back(row);
    }
    emitGenerated(std::move(h.instance), meta.dump(), out, metadata);
  });
}

qpr_status qpr_generate_random(const char* kind, int n, int m, uint64_t seed,
                               qpr_instance** out, char** metadata) {
  return guard([&] {
    require(kind, "kind");
    require(out, "out");
    qprelax::GeneratedInstance g =
        qprelax::randomInstance(qprelax::parseInstanceKind(kind), n, m, seed);
    emitGenerated(std::move(g.instance), g.metadata, out, metadata);
  });
}

void qpr_solve_options_default(qpr_solve_options* options) {
  if (options == nullptr) return;
  const qprelax::SolveOptions d;
  options->max_iterations = d.max_iterations;
  options->tol_primal = d.tol_primal;
  options->tol_dual = d.tol_dual;
  options->penalty = d.penalty;
  options->tol_cert = d.tol_cert;
}

qpr_status qpr_solve(const qpr_instance* inst, qpr_cone cone, const qpr_solve_options* options,
                     const double* pin, qpr_result** out) {
  return guard([&] {
    require(inst, "instance");
    require(out, "out");
    auto r = std::make_unique<qpr_result>();
    r->inst = inst->inst;
    r->cone = toCone(cone);
    r->options = toOptions(options);
    qprelax::RelaxationSolver solver(inst->inst, r->cone, r->options);
    r->result = pin ? solver.evaluate(readVector(pin, inst->inst.n())) : solver.solve();
    *out = r.release();
  });
}

void qpr_result_free(qpr_result* result) { delete result; }

qpr_solve_status qpr_result_status(const qpr_result* result) {
  if (result == nullptr) return QPR_SOLVE_MAX_ITER;
  switch (result->result.status) {
    case qprelax::SolveStatus::kOptimal: return QPR_SOLVE_OPTIMAL;
    case qprelax::SolveStatus::kUnbounded: return QPR_SOLVE_UNBOUNDED;
    case qprelax::SolveStatus::kInfeasible: return QPR_SOLVE_INFEASIBLE;
    case qprelax::SolveStatus::kMaxIter: return QPR_SOLVE_MAX_ITER;
  }
  return QPR_SOLVE_MAX_ITER;
}

double qpr_result_value(const qpr_result* result) {
  return result ? result->result.value : 0.0;
}

int qpr_result_iterations(const qpr_result* result) {
  return result ? result->result.iterations : 0;
}

int qpr_result_has_point(const qpr_result* result) {
  return result && result->result.point ? 1 : 0;
}

qpr_status qpr_result_point(const qpr_result* result, double* y) {
  return guard([&] {
    require(result, "result");
    require(y, "y");
    if (!result->result.point) {
      throw qprelax::Error(ErrorCode::kInvalidArgument, "result has no lifted point");
    }
    writeMatrix(result->result.point->y, y);
  });
}

int qpr_result_has_certificate(const qpr_result* result) {
  return result && result->result.certificate ? 1 : 0;
}

qpr_status qpr_result_certificate(const qpr_result* result, double* d, double* rate) {
  return guard([&] {
    require(result, "result");
    require(d, "d");
    if (!result->result.certificate) {
      throw qprelax::Error(ErrorCode::kInvalidArgument, "result has no certificate");
    }
    writeMatrix(result->result.certificate->d, d);
    if (rate) *rate = result->result.certificate->objective_rate;
  });
}

qpr_status qpr_result_to_json(const qpr_result* result, char** out) {
  return guard([&] {
    require(result, "result");
    require(out, "out");
    *out = dupString(
        qprelax::relaxationResultJson(result->inst, result->cone, result->result, result->options));
  });
}

qpr_status qpr_certificate_search(const qpr_instance* inst, qpr_cone cone,
                                  qpr_certificate_mode mode, const qpr_solve_options* options,
                                  char** out) {
  return guard([&] {
    require(inst, "instance");
    require(out, "out");
    const qprelax::CertificateMode m = mode == QPR_MODE_FEASIBILITY
                                           ? qprelax::CertificateMode::kFeasibility
                                           : qprelax::CertificateMode::kObjective;
    const qprelax::SolveOptions opts = toOptions(options);
    const qprelax::Cone k = toCone(cone);
    const auto r = qprelax::recessionCertificateSearch(inst->inst, k, m, opts);
    *out = dupString(qprelax::certificateSearchJson(inst->inst, k, m, r, opts));
  });
}

qpr_status qpr_oracle(const qpr_instance* inst, char** out) {
  return guard([&] {
    require(inst, "instance");
    require(out, "out");
    *out = dupString(qprelax::oracleResultJson(inst->inst, qprelax::globalSolve(inst->inst)));
  });
}

qpr_status qpr_local_min(const qpr_instance* inst, const double* x, double tol, char** out) {
  return guard([&] {
    require(inst, "instance");
    require(x, "x");
    require(out, "out");
    if (!(tol > 0)) throw qprelax::Error(ErrorCode::kInvalidArgument, "tol must be positive");
    const auto verdict =
        qprelax::verifyLocalMinimizer(inst->inst, readVector(x, inst->inst.n()), tol);
    *out = dupString(qprelax::localMinJson(verdict, tol));
  });
}

qpr_status qpr_envelope_csv(const qpr_instance* inst, qpr_cone cone, const double* from,
                            const double* to, int samples, const qpr_solve_options* options,
                            char** out) {
  return guard([&] {
    require(inst, "instance");
    require(from, "from");
    require(to, "to");
    require(out, "out");
    const int n = inst->inst.n();
    const auto rows = qprelax::sampleEnvelope(inst->inst, toCone(cone), readVector(from, n),
                                              readVector(to, n), samples, toOptions(options));
    std::ostringstream csv;
    qprelax::writeEnvelopeCsv(csv, rows);
    *out = dupString(csv.str());
  });
}

qpr_status qpr_analyze_report(const qpr_instance* inst, char** out) {
  return guard([&] {
    require(inst, "instance");
    require(out, "out");
    *out = dupString(qprelax::analyzeReport(inst->inst, {}));
  });
}

qpr_status qpr_compare_report(const qpr_instance* inst, const qpr_solve_options* options,
                              char** out) {
  return guard([&] {
    require(inst, "instance");
    require(out, "out");
    qprelax::ReportOptions opts;
    opts.solve = toOptions(options);
    *out = dupString(qprelax::compareReport(inst->inst, opts));
  });
}

qpr_status qpr_render_text(const char* json, char** out) {
  return guard([&] {
    require(json, "json");
    require(out, "out");
    *out = dupString(qprelax::renderReportText(json));
  });
}

}  // extern "C"
