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

#include "qprelax/conic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "qprelax/analysis.hpp"
#include "qprelax/oracle.hpp"

namespace qprelax {

std::string_view solveStatusName(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "OPTIMAL";
    case SolveStatus::kUnbounded: return "UNBOUNDED";
    case SolveStatus::kInfeasible: return "INFEASIBLE";
    case SolveStatus::kMaxIter: return "MAX_ITER";
  }
  return "UNKNOWN";
}

std::string_view searchOutcomeName(SearchOutcome outcome) {
  switch (outcome) {
    case SearchOutcome::kFound: return "found";
    case SearchOutcome::kNone: return "none";
    case SearchOutcome::kInconclusive: return "inconclusive";
  }
  return "unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kAdaptEvery = 50;
constexpr int kMaxAdaptGap = 3200;
constexpr int kAcceptEvery = 50;

enum class NonnegMask { kAll, kRow0 };

// Consensus splitting over three blocks sharing one matrix variable:
//   block 0: linear cost + affine constraints
//   block 1: PSD matrices whose range lies in span(face)
//   block 2: entrywise nonnegativity on the masked entries
// Restricting the PSD block to the face {W S W'} encodes <Ahat, Y> = 0
// exactly (Ahat is PSD, so PSD Y with <Ahat, Y> = 0 has Ahat Y = 0).
struct SplittingProblem {
  Matrix cost;
  AffineProjector affine;
  Matrix face;
  NonnegMask mask = NonnegMask::kAll;
  // Factor from the normalized cost back to original objective units; when
  // positive the stopping tolerances tighten so the objective error stays
  // within tol * (1 + |value|).
  double value_scale = 0.0;
};

struct SplittingRun {
  Matrix z;
  double objective = 0.0;
  Residuals residuals;
  int iterations = 0;
  bool converged = false;
  bool stalled = false;
  bool diverged = false;
  bool accepted = false;
};

using AcceptFn = std::function<bool(const Matrix&)>;

Matrix projectMask(const Matrix& m, NonnegMask mask) {
  return projectCone(m, mask == NonnegMask::kAll ? ConeProjection::kNonneg
                                                 : ConeProjection::kRow0Nonneg);
}

SplittingRun runSplitting(const SplittingProblem& p, const Matrix& start,
                          const SolveOptions& o, bool detect_stall,
                          const AcceptFn& accept) {
  const double alpha = o.over_relaxation;
  const double cost_scale = std::max(1.0, p.cost.norm());
  double rho = o.penalty;

  SplittingRun run;
  Matrix z = start;
  Matrix ua = Matrix::Zero(z.rows(), z.cols());
  Matrix up = ua, un = ua;

  int adapt_gap = kAdaptEvery;
  int next_adapt = kAdaptEvery;
  double best_primal = kInf;
  double window_start_best = kInf;
  int stalled_windows = 0;

  for (int it = 1; it <= o.max_iterations; ++it) {
    const Matrix xa = p.affine.apply(z - ua - p.cost / rho);
    const Matrix xp = projectPsdFace(z - up, p.face);
    const Matrix xn = projectMask(z - un, p.mask);

    const Matrix ra = alpha * xa + (1.0 - alpha) * z;
    const Matrix rp = alpha * xp + (1.0 - alpha) * z;
    const Matrix rn = alpha * xn + (1.0 - alpha) * z;
    const Matrix z_prev = z;
    z = (ra + ua + rp + up + rn + un) / 3.0;
    ua += ra - z;
    up += rp - z;
    un += rn - z;

    const double primal = std::sqrt((xa - z).squaredNorm() + (xp - z).squaredNorm() +
                                    (xn - z).squaredNorm());
    const double dual = rho * std::sqrt(3.0) * (z - z_prev).norm();
    const double zscale = std::max(1.0, z.norm());
    const double primal_rel = primal / zscale;
    const double dual_rel = dual / cost_scale;

    run.iterations = it;
    run.residuals = {primal_rel, dual_rel};
    run.objective = p.cost.cwiseProduct(z).sum();

    double tighten = 1.0;
    if (p.value_scale > 0.0) {
      const double f = (1.0 + std::abs(run.objective * p.value_scale)) / (p.value_scale * zscale);
      tighten = std::clamp(f, 1e-4, 1.0);
    }
    if (primal_rel <= tighten * o.tol_primal && dual_rel <= tighten * o.tol_dual) {
      run.converged = true;
      break;
    }
    if (run.objective < o.unbounded_threshold * cost_scale) {
      run.diverged = true;
      break;
    }
    if (accept && it % kAcceptEvery == 0 && accept(z)) {
      run.accepted = true;
      break;
    }
    if (detect_stall) {
      best_primal = std::min(best_primal, primal_rel);
      if (it % o.stall_window == 0) {
        if (best_primal > o.stall_factor * window_start_best) {
          if (++stalled_windows >= o.stall_windows) {
            run.stalled = true;
            break;
          }
        } else {
          stalled_windows = 0;
        }
        window_start_best = best_primal;
      }
    }
    if (it == next_adapt) {
      double factor = 1.0;
      if (primal_rel > 10.0 * dual_rel) {
        factor = 2.0;
      } else if (dual_rel > 10.0 * primal_rel) {
        factor = 0.5;
      }
      if (factor != 1.0) {
        rho *= factor;
        ua /= factor;
        up /= factor;
        un /= factor;
        // Space out later changes so the penalty eventually settles.
        adapt_gap = std::min(2 * adapt_gap, kMaxAdaptGap);
      }
      next_adapt = it + adapt_gap;
    }
  }
  run.z = z;
  return run;
}

// Basis of {[0; d] : Ad = 0} inside R^{n+1}.
Matrix recessionFace(const QpInstance& inst) {
  const Matrix null = nullspaceBasis(inst.A);
  Matrix face = Matrix::Zero(inst.n() + 1, null.cols());
  face.bottomRows(inst.n()) = null;
  return face;
}

// Projects onto the recession face and rescales to unit trace.
std::optional<RecessionCertificate> polishCertificate(const Matrix& candidate,
                                                      const Matrix& face,
                                                      const Matrix& qhat) {
  Matrix d = projectPsdFace(candidate, face);
  d = Matrix(0.5 * (d + d.transpose()));
  const double trace = d.trace();
  if (!(trace > 1e-12)) return std::nullopt;
  d /= trace;
  RecessionCertificate cert;
  cert.d = d;
  cert.objective_rate = qhat.cwiseProduct(d).sum();
  cert.trace_norm = d.trace();
  return cert;
}

// Exact reasons why no recession matrix with negative rate can exist.
std::optional<std::string> screenObjectiveSearch(const QpInstance& inst,
                                                 Cone cone) {
  // Any recession matrix is diag(0, Dt) with Dt = N S N', S PSD, so its
  // rate <Q, Dt> = <N'QN, S> is nonnegative when N'QN is PSD.
  if (checkPsdOnNullspace(inst).holds) {
    return "Q is PSD on null(A): every recession matrix has rate >= 0";
  }
  // A DNN recession matrix Dt gives Dt e in L \ {0}.
  if (cone == Cone::kDnn && recessionVertices(inst.A).empty()) {
    return "recession cone of S is {0}: no DNN recession matrix exists";
  }
  return std::nullopt;
}

CertificateSearchResult runCertificateSearch(const QpInstance& inst, Cone cone,
                                             CertificateMode mode,
                                             const SolveOptions& options) {
  CertificateSearchResult out;
  const LiftedProblem lp = liftInstance(inst, cone);
  const Matrix face = recessionFace(inst);
  const int dim = inst.n() + 1;
  if (face.cols() == 0) {
    out.outcome = SearchOutcome::kNone;
    out.note = "null(A) = {0}: the recession face is trivial";
    return out;
  }

  SplittingProblem p;
  p.cost = mode == CertificateMode::kObjective ? lp.qhat : Matrix::Zero(dim, dim);
  Matrix corner = Matrix::Zero(dim, dim);
  corner(0, 0) = 1.0;
  p.affine = AffineProjector({Matrix::Identity(dim, dim), corner, lp.ahat},
                             (Vector(3) << 1.0, 0.0, 0.0).finished());
  p.face = face;
  p.mask = cone == Cone::kDnn ? NonnegMask::kAll : NonnegMask::kRow0;
  const Matrix start = face * face.transpose() / static_cast<double>(face.cols());

  AcceptFn accept;
  if (mode == CertificateMode::kFeasibility) {
    accept = [&](const Matrix& z) {
      auto cert = polishCertificate(z, face, lp.qhat);
      return cert && verifyCertificate(inst, cone, *cert, 1e-6, options.tol_cert).recessionOk();
    };
  }
  const SplittingRun run =
      runSplitting(p, start, options, mode == CertificateMode::kFeasibility, accept);
  out.iterations = run.iterations;
  out.residuals = run.residuals;
  out.best_rate = run.objective;

  auto cert = polishCertificate(run.z, face, lp.qhat);
  const bool verifies =
      cert && verifyCertificate(inst, cone, *cert, 1e-6, options.tol_cert).recessionOk();

  if (mode == CertificateMode::kFeasibility) {
    if (verifies && (run.accepted || run.converged)) {
      out.outcome = SearchOutcome::kFound;
      out.certificate = cert;
      out.note = "feasible recession matrix found";
    } else if (run.stalled) {
      out.outcome = SearchOutcome::kNone;
      out.note = "residual stalled: lifted feasible region declared bounded";
    } else {
      out.outcome = SearchOutcome::kInconclusive;
      out.note = "iteration limit reached";
    }
    return out;
  }

  if (verifies && cert->objective_rate < -options.tol_cert) {
    out.outcome = SearchOutcome::kFound;
    out.certificate = cert;
    out.best_rate = cert->objective_rate;
    out.note = run.converged ? "negative-rate recession matrix at optimum"
                             : "negative-rate recession matrix (not converged)";
  } else if (run.converged) {
    out.outcome = SearchOutcome::kNone;
    out.best_rate = cert ? cert->objective_rate : run.objective;
    out.note = "optimal recession rate is nonnegative";
  } else {
    out.outcome = SearchOutcome::kInconclusive;
    out.note = "iteration limit reached";
  }
  return out;
}

}  // namespace

CertificateCheck verifyCertificate(const QpInstance& inst, Cone cone,
                                   const RecessionCertificate& cert,
                                   double tol, double tol_cert) {
  CertificateCheck check;
  const int dim = inst.n() + 1;
  if (cert.d.rows() != dim || cert.d.cols() != dim) return check;
  const LiftedProblem lp = liftInstance(inst, cone);
  const Matrix d = 0.5 * (cert.d + cert.d.transpose());
  const double scale = std::max(1.0, d.cwiseAbs().maxCoeff());

  double violation = std::max(0.0, -minEigenvalue(d));
  if (cone == Cone::kDnn) {
    violation = std::max(violation, -d.minCoeff());
  } else {
    violation = std::max(violation, -d.row(0).tail(inst.n()).minCoeff());
  }
  check.cone_violation = violation;
  check.in_cone = violation <= tol * scale;
  check.corner_zero = std::abs(d(0, 0)) <= tol * scale;
  check.annihilated = std::abs(lp.ahat.cwiseProduct(d).sum()) <= tol * scaleOf(lp.ahat) * scale;
  check.trace_normalized = std::abs(d.trace() - 1.0) <= tol;
  check.rate = lp.qhat.cwiseProduct(d).sum();
  check.negative_rate = check.rate < -tol_cert;
  return check;
}

struct RelaxationSolver::Impl {
  QpInstance inst;
  Cone cone;
  SolveOptions options;
  LiftedProblem lp;

  std::optional<bool> feasible;
  std::vector<Vector> vertices;
  std::optional<CertificateSearchResult> prepass;

  Impl(QpInstance i, Cone c, SolveOptions o)
      : inst(std::move(i)), cone(c), options(o), lp(liftInstance(inst, c)) {}

  const CertificateSearchResult& objectiveSearch() {
    if (!prepass) {
      if (auto reason = screenObjectiveSearch(inst, cone)) {
        CertificateSearchResult screened;
        screened.outcome = SearchOutcome::kNone;
        screened.note = *reason;
        prepass = screened;
      } else {
        prepass = runCertificateSearch(inst, cone, CertificateMode::kObjective, options);
      }
    }
    return *prepass;
  }

  // Variable scale s with x = s u, chosen so vertices of S have unit size
  // in u. Keeps Y entries O(1) for the splitting iteration.
  double variableScale(const std::optional<Vector>& pin) {
    if (!feasible) {
      try {
        vertices = enumerateVertices(inst);
        feasible = !vertices.empty();
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kDeskScaleLimit) throw;
      }
    }
    double s = pin ? pin->cwiseAbs().maxCoeff() : 0.0;
    for (const Vector& v : vertices) s = std::max(s, v.cwiseAbs().maxCoeff());
    return s > 0.0 ? s : 1.0;
  }

  RelaxationResult run(const std::optional<Vector>& pin) {
    RelaxationResult result;
    const CertificateSearchResult& search = objectiveSearch();
    result.iterations = search.iterations;
    if (search.outcome == SearchOutcome::kFound) {
      result.status = SolveStatus::kUnbounded;
      result.value = -kInf;
      result.certificate = search.certificate;
      result.note = search.note;
      return result;
    }

    const double s = variableScale(pin);
    Vector diag = Vector::Constant(inst.n() + 1, s);
    diag(0) = 1.0;
    const QpInstance scaled =
        makeInstance(inst.name, s * s * inst.Q, s * inst.c, s * inst.A, inst.b);
    const LiftedProblem slp = liftInstance(scaled, cone);

    SplittingProblem p;
    p.cost = slp.qhat / std::max(1e-300, slp.qhat.norm());
    p.value_scale = slp.qhat.norm();
    if (pin) {
      p.affine = buildAffineProjector(slp, Vector(*pin / s));
    } else {
      p.affine = buildAffineProjector(slp, std::nullopt);
    }
    p.face = nullspaceBasis(slp.factor.transpose());
    p.mask = cone == Cone::kDnn ? NonnegMask::kAll : NonnegMask::kRow0;
    const Matrix start = rankOneLift((pin ? *pin : vertices.front()) / s).y;

    const SplittingRun run = runSplitting(p, start, options, false, {});
    result.iterations += run.iterations;
    result.residuals = run.residuals;
    const LiftedPoint point{diag.asDiagonal() * p.affine.apply(run.z) * diag.asDiagonal()};

    if (run.diverged) {
      const Matrix growth = diag.asDiagonal() * (run.z - start) * diag.asDiagonal();
      auto cert = polishCertificate(growth, recessionFace(inst), lp.qhat);
      if (cert && verifyCertificate(inst, cone, *cert, 1e-6, options.tol_cert).unboundedOk()) {
        result.status = SolveStatus::kUnbounded;
        result.value = -kInf;
        result.certificate = cert;
        result.note = "objective diverged; recession direction verified";
        return result;
      }
      result.status = SolveStatus::kMaxIter;
      result.value = lp.qhat.cwiseProduct(point.y).sum();
      result.point = point;
      result.note = "objective diverged without a verifiable certificate";
      return result;
    }
    result.status = run.converged ? SolveStatus::kOptimal : SolveStatus::kMaxIter;
    result.value = lp.qhat.cwiseProduct(point.y).sum();
    result.point = point;
    if (search.outcome == SearchOutcome::kInconclusive) {
      result.note = "recession search inconclusive; ";
    }
    result.note += run.converged ? "converged" : "iteration limit reached";
    return result;
  }
};

RelaxationSolver::RelaxationSolver(QpInstance inst, Cone cone, SolveOptions options)
    : impl_(std::make_unique<Impl>(std::move(inst), cone, options)) {}
RelaxationSolver::~RelaxationSolver() = default;
RelaxationSolver::RelaxationSolver(RelaxationSolver&&) noexcept = default;
RelaxationSolver& RelaxationSolver::operator=(RelaxationSolver&&) noexcept = default;

const QpInstance& RelaxationSolver::instance() const { return impl_->inst; }
Cone RelaxationSolver::cone() const { return impl_->cone; }

RelaxationResult RelaxationSolver::solve() {
  Impl& s = *impl_;
  if (!s.feasible) {
    s.vertices = enumerateVertices(s.inst);
    s.feasible = !s.vertices.empty();
  }
  if (!*s.feasible) {
    RelaxationResult result;
    result.status = SolveStatus::kInfeasible;
    result.value = kInf;
    result.note = "S is empty, so the lifted problem is infeasible";
    return result;
  }
  return s.run(std::nullopt);
}

RelaxationResult RelaxationSolver::evaluate(const Vector& xt) {
  Impl& s = *impl_;
  if (xt.size() != s.inst.n()) {
    throw Error(ErrorCode::kDimensionMismatch, "point has wrong length");
  }
  if (!isFeasible(s.inst, xt)) {
    throw Error(ErrorCode::kPointInfeasible, "point is not in S");
  }
  return s.run(xt);
}

RelaxationResult solveRelaxation(const QpInstance& inst, Cone cone,
                                 const SolveOptions& options) {
  return RelaxationSolver(inst, cone, options).solve();
}

RelaxationResult evaluateUnderestimator(const QpInstance& inst, Cone cone,
                                        const Vector& xt,
                                        const SolveOptions& options) {
  return RelaxationSolver(inst, cone, options).evaluate(xt);
}

CertificateSearchResult recessionCertificateSearch(const QpInstance& inst,
                                                   Cone cone,
                                                   CertificateMode mode,
                                                   const SolveOptions& options) {
  if (mode == CertificateMode::kObjective) {
    if (auto reason = screenObjectiveSearch(inst, cone)) {
      CertificateSearchResult screened;
      screened.outcome = SearchOutcome::kNone;
      screened.note = *reason;
      return screened;
    }
  }
  return runCertificateSearch(inst, cone, mode, options);
}

double zeroBlockResidual(const LiftedPoint& point, const Vector& xt, double tol) {
  const Vector x = xt;
  const int n = static_cast<int>(x.size());
  const Matrix gap = point.y.bottomRightCorner(n, n) - x * x.transpose();
  double sq = 0.0;
  for (int j : indexSets(x, tol).zero) sq += gap.row(j).squaredNorm();
  return std::sqrt(sq);
}

}  // namespace qprelax
