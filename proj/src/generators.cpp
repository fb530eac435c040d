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

#include "qprelax/generators.hpp"

#include <Eigen/QR>
#include "json.hpp"

#include "qprelax/analysis.hpp"
#include "qprelax/numerics.hpp"
#include "qprelax/oracle.hpp"

namespace qprelax {

using json = nlohmann::json;

long long Rng::integer(long long lo, long long hi) {
  if (hi < lo) throw Error(ErrorCode::kInvalidArgument, "empty integer range");
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<long long>(next() % span);
}

double Rng::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

HornData hornData() {
  HornData h;
  h.q.resize(5, 5);
  h.q << 1, -1, 1, 1, -1,
        -1, 1, -1, 1, 1,
         1, -1, 1, -1, 1,
         1, 1, -1, 1, -1,
        -1, 1, 1, -1, 1;
  h.c = IntVector::Ones(5);
  h.a.resize(1, 5);
  h.a << -12, 8, -3, 4, 4;
  h.b.resize(1);
  h.b << 9;
  h.d.resize(5, 5);
  h.d << 7, 4, 0, 0, 4,
         4, 7, 4, 0, 0,
         0, 4, 7, 4, 0,
         0, 0, 4, 7, 4,
         4, 0, 0, 4, 7;
  return h;
}

HornInstance hornInstance() {
  const HornData h = hornData();
  return {makeInstance("horn5", h.q.cast<double>(), h.c.cast<double>(),
                       h.a.cast<double>(), h.b.cast<double>()),
          h.d};
}

namespace {

IntMatrix drawInts(Rng& rng, Eigen::Index rows, Eigen::Index cols, IntRange range) {
  IntMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.integer(range.lo, range.hi);
  }
  return m;
}

IntMatrix drawSymmetricInts(Rng& rng, Eigen::Index k, IntRange range) {
  IntMatrix m(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) m(i, j) = m(j, i) = rng.integer(range.lo, range.hi);
  }
  return m;
}

void requireShape(const IntMatrix& m, Eigen::Index rows, Eigen::Index cols,
                  const char* what) {
  if (m.rows() != rows || m.cols() != cols) {
    throw Error(ErrorCode::kInvalidArgument, std::string(what) + " block has wrong shape");
  }
}

void requireNonneg(const IntMatrix& m, const char* what) {
  if (m.size() && m.minCoeff() < 0) {
    throw Error(ErrorCode::kInvalidArgument, std::string(what) + " block must be nonnegative");
  }
}

json toJson(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Matrix randomOrthogonal(Rng& rng, int n) {
  Matrix g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) g(i, j) = rng.uniform(-1.0, 1.0);
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  return qr.householderQ() * Matrix::Identity(n, n);
}

// Symmetric matrix with a seeded spectrum holding at least one eigenvalue
// in [-2, -0.5] and, when size > 1, one in [0.5, 2].
Matrix indefiniteMatrix(Rng& rng, int n, Vector* spectrum) {
  Vector lambda(n);
  for (int i = 0; i < n; ++i) lambda(i) = rng.uniform(-2.0, 2.0);
  lambda(0) = -rng.uniform(0.5, 2.0);
  if (n > 1) lambda(1) = rng.uniform(0.5, 2.0);
  const Matrix u = randomOrthogonal(rng, n);
  Matrix q = u * lambda.asDiagonal() * u.transpose();
  if (spectrum) *spectrum = lambda;
  return 0.5 * (q + q.transpose());
}

int matrixRank(const Matrix& a) {
  return static_cast<int>(rowspaceBasis(a).cols());
}

// Rows: a strictly positive normalization row followed by integer rows.
// b = A x0 for an integer x0 > 0.
bool boundedConstraints(Rng& rng, int n, int m, Matrix& a, Vector& b, Vector& x0) {
  IntMatrix ai(m, n);
  ai.row(0) = drawInts(rng, 1, n, {1, 3});
  if (m > 1) ai.bottomRows(m - 1) = drawInts(rng, m - 1, n, {-3, 3});
  const IntMatrix xi = drawInts(rng, n, 1, {1, 3});
  a = ai.cast<double>();
  x0 = xi.cast<double>();
  b = (ai * xi).cast<double>();
  return matrixRank(a) == m;
}

constexpr int kMaxAttempts = 64;

GeneratedInstance bounded(Rng& rng, int n, int m, std::uint64_t seed, bool convex_on_null) {
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Matrix a;
    Vector b, x0;
    if (!boundedConstraints(rng, n, m, a, b, x0)) continue;
    json meta = {{"x0", toJson(x0)}};
    Matrix q;
    if (!convex_on_null) {
      Vector spectrum;
      q = indefiniteMatrix(rng, n, &spectrum);
      meta["spectrum"] = toJson(spectrum);
    } else {
      const Matrix null = nullspaceBasis(a);
      const Matrix range = rowspaceBasis(a);
      const int r = static_cast<int>(null.cols());
      Matrix g(r, r), cross(r, m);
      for (int i = 0; i < r; ++i) {
        for (int j = 0; j < r; ++j) g(i, j) = rng.uniform(-1.0, 1.0);
        for (int j = 0; j < m; ++j) cross(i, j) = rng.uniform(-1.0, 1.0);
      }
      const Matrix p = g * g.transpose();
      const Matrix t = indefiniteMatrix(rng, m, nullptr);
      q = null * p * null.transpose() + null * cross * range.transpose() +
          range * cross.transpose() * null.transpose() + range * t * range.transpose();
      q = Matrix(0.5 * (q + q.transpose()));
      if (minEigenvalue(q) > -1e-3) continue;
    }
    GeneratedInstance out;
    out.instance = makeInstance("", q, Vector::Zero(n), a, b);
    if (convex_on_null && !checkPsdOnNullspace(out.instance).holds) continue;
    if (enumerateVertices(out.instance).empty()) continue;
    meta["attempts"] = attempt + 1;
    out.metadata = meta.dump();
    return out;
  }
  throw Error(ErrorCode::kGenerationFailed,
              "no instance after " + std::to_string(kMaxAttempts) + " attempts (seed " +
                  std::to_string(seed) + ")");
}

GeneratedInstance unboundedSafe(Rng& rng, int n, int m, std::uint64_t seed) {
  constexpr double kMargin = 0.1;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const Vector d0 = drawInts(rng, n, 1, {1, 3}).cast<double>();
    Matrix a = drawInts(rng, m, n, {-3, 3}).cast<double>();
    for (int i = 0; i < m; ++i) {
      a.row(i) -= (a.row(i).dot(d0) / d0.squaredNorm()) * d0.transpose();
    }
    if (matrixRank(a) != m) continue;
    const Vector x0 = drawInts(rng, n, 1, {1, 3}).cast<double>();
    const Vector b = a * x0;
    const Matrix r = indefiniteMatrix(rng, n, nullptr);

    Matrix stacked(m + 1, n);
    stacked << a, Matrix::Ones(1, n);
    Vector rhs = Vector::Zero(m + 1);
    rhs(m) = 1.0;
    const OracleResult curv = minimizeQuadOverPolytope(r, Vector::Zero(n), stacked, rhs);
    if (curv.status != OracleStatus::kOptimal) continue;
    // On {e'd = 1}, d'(R + g ee')d = d'Rd + g.
    const double gamma = std::max(0.0, kMargin - curv.value);
    const Matrix q = r + gamma * Matrix::Ones(n, n);

    GeneratedInstance out;
    out.instance = makeInstance("", q, Vector::Zero(n), a, b);
    const RecessionReport rec = analyzeRecessionCone(out.instance);
    if (!rec.l_nontrivial || rec.min_curvature < kMargin / 2) continue;
    json meta = {{"x0", toJson(x0)},
                 {"recession_direction", toJson(d0)},
                 {"gamma", gamma},
                 {"min_recession_curvature", rec.min_curvature},
                 {"attempts", attempt + 1}};
    out.metadata = meta.dump();
    return out;
  }
  throw Error(ErrorCode::kGenerationFailed,
              "no instance after " + std::to_string(kMaxAttempts) + " attempts (seed " +
                  std::to_string(seed) + ")");
}

// y'A = p > 0 and y'b = -1 rule out any x >= 0 with Ax = b.
GeneratedInstance infeasible(Rng& rng, int n, int m) {
  const IntMatrix p = drawInts(rng, 1, n, {1, 3});
  IntVector y(m);
  y(0) = 1;
  for (int i = 1; i < m; ++i) y(i) = rng.integer(-2, 2);
  IntMatrix a = drawInts(rng, m, n, {-3, 3});
  IntVector b = drawInts(rng, m, 1, {-5, 5});
  a.row(0) = p - y.tail(m - 1).transpose() * a.bottomRows(m - 1);
  b(0) = -1 - y.tail(m - 1).dot(b.tail(m - 1));
  if (y.transpose() * a != p || y.dot(b) != -1) {
    throw Error(ErrorCode::kGenerationFailed, "Farkas certificate check failed");
  }
  const IntMatrix q = drawSymmetricInts(rng, n, {-3, 3});

  GeneratedInstance out;
  out.instance = makeInstance("", q.cast<double>(), drawInts(rng, n, 1, {-2, 2}).cast<double>(),
                              a.cast<double>(), b.cast<double>());
  json meta = {{"farkas_y", std::vector<long long>(y.data(), y.data() + m)},
               {"farkas_p", std::vector<long long>(p.data(), p.data() + n)},
               {"y_dot_b", -1}};
  out.metadata = meta.dump();
  return out;
}

}  // namespace

HornFamilyInstance hornFamily(const HornFamilyParams& params) {
  if (params.n < 5) {
    throw Error(ErrorCode::kInvalidDimension, "the Horn family needs n >= 5");
  }
  const HornData h = hornData();
  const int n = params.n;
  const int k = n - 5;
  Rng rng(params.seed);

  const IntMatrix bb = params.b_block ? *params.b_block : drawInts(rng, 5, k, params.b_range);
  const IntMatrix w = params.w_block ? *params.w_block : drawInts(rng, k, k, params.w_range);
  const IntMatrix nn =
      params.n_block ? *params.n_block : drawSymmetricInts(rng, k, params.nonneg_range);
  const IntVector f = params.f ? *params.f : IntVector(drawInts(rng, k, 1, params.f_range));
  const IntMatrix fc =
      params.f_cols ? *params.f_cols : drawInts(rng, 1, k, params.f_col_range);

  requireShape(bb, 5, k, "B");
  requireShape(w, k, k, "W");
  requireShape(nn, k, k, "N");
  requireShape(f, k, 1, "f");
  requireShape(fc, 1, k, "F");
  requireNonneg(bb, "B");
  requireNonneg(nn, "N");
  requireNonneg(f, "f");
  if (nn != nn.transpose()) throw Error(ErrorCode::kInvalidArgument, "N block must be symmetric");

  HornFamilyInstance out;
  out.q.resize(n, n);
  out.q << h.q, bb, bb.transpose(), w.transpose() * w + nn;
  IntVector c(n);
  c << h.c, f;
  out.a.resize(1, n);
  out.a << h.a, fc;
  out.d = IntMatrix::Zero(n, n);
  out.d.topLeftCorner(5, 5) = h.d;

  out.q_dot_d = out.q.cwiseProduct(out.d).sum();
  out.ata_dot_d = (out.a.transpose() * out.a).cwiseProduct(out.d).sum();
  out.certificate_valid = out.q_dot_d < 0 && out.ata_dot_d == 0;
  const std::string name =
      n == 5 ? "horn5" : "horn-family-n" + std::to_string(n) + "-s" + std::to_string(params.seed);
  out.instance = makeInstance(name, out.q.cast<double>(), c.cast<double>(),
                              out.a.cast<double>(), h.b.cast<double>());
  return out;
}

std::string_view instanceKindName(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::kBounded: return "BOUNDED";
    case InstanceKind::kConvexOnNullspace: return "CONVEX_ON_NULLSPACE";
    case InstanceKind::kUnboundedSafe: return "UNBOUNDED_SAFE";
    case InstanceKind::kInfeasible: return "INFEASIBLE";
  }
  return "UNKNOWN";
}

InstanceKind parseInstanceKind(std::string_view text) {
  std::string upper(text);
  for (char& ch : upper) {
    ch = ch == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  }
  for (InstanceKind kind : {InstanceKind::kBounded, InstanceKind::kConvexOnNullspace,
                            InstanceKind::kUnboundedSafe, InstanceKind::kInfeasible}) {
    if (upper == instanceKindName(kind)) return kind;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown instance kind: " + std::string(text));
}

GeneratedInstance randomInstance(InstanceKind kind, int n, int m, std::uint64_t seed) {
  if (n < 1 || m < 1) throw Error(ErrorCode::kInvalidDimension, "n and m must be positive");
  if (kind != InstanceKind::kInfeasible && m >= n) {
    throw Error(ErrorCode::kInvalidDimension, "this kind needs m < n");
  }
  Rng rng(seed);
  GeneratedInstance out;
  switch (kind) {
    case InstanceKind::kBounded: out = bounded(rng, n, m, seed, false); break;
    case InstanceKind::kConvexOnNullspace: out = bounded(rng, n, m, seed, true); break;
    case InstanceKind::kUnboundedSafe: out = unboundedSafe(rng, n, m, seed); break;
    case InstanceKind::kInfeasible: out = infeasible(rng, n, m); break;
  }
  std::string name(instanceKindName(kind));
  for (char& ch : name) ch = ch == '_' ? '-' : static_cast<char>(std::tolower(ch));
  out.instance.name = name + "-n" + std::to_string(n) + "-m" + std::to_string(m) + "-s" +
                      std::to_string(seed);
  json meta = json::parse(out.metadata);
  meta["kind"] = instanceKindName(kind);
  meta["seed"] = seed;
  meta["n"] = n;
  meta["m"] = m;
  meta["prng"] = "mt19937_64";
  out.metadata = meta.dump();
  return out;
}

}  // namespace qprelax
