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

// Shared helpers for the test binaries: feasible-point sampling, grid and
// hull-distance oracles, hand-built instances, and a CLI runner.

#pragma once

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "qprelax/core.hpp"
#include "qprelax/generators.hpp"
#include "qprelax/oracle.hpp"

namespace qprelax::testing {

inline QpInstance instanceFrom(int n, const std::vector<double>& a, const std::vector<double>& b,
                               const std::vector<double>& q, const std::vector<double>& c,
                               const std::string& name = "test") {
  const int m = static_cast<int>(b.size());
  Matrix am(m, n), qm(n, n);
  Vector bv(m), cv(n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) am(i, j) = a[i * n + j];
    bv(i) = b[i];
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) qm(i, j) = q[i * n + j];
    cv(i) = c[i];
  }
  return makeInstance(name, qm, cv, am, bv);
}

// Simplex with Q = I or another 2x2 matrix, c = 0.
inline QpInstance simplex2(const std::vector<double>& q) {
  return instanceFrom(2, {1, 1}, {1}, q, {0, 0}, "simplex2");
}

// Uniform point of the probability simplex (normalized exponentials).
inline Vector simplexWeights(Rng& rng, int k) {
  Vector w(k);
  for (int i = 0; i < k; ++i) w(i) = -std::log(1.0 - rng.uniform());
  return w / w.sum();
}

// Random feasible point: convex combination of vertices plus a nonnegative
// combination of extreme rays (rays scaled into [0, ray_scale]).
inline Vector sampleFeasible(Rng& rng, const std::vector<Vector>& vertices,
                             const std::vector<Vector>& rays, double ray_scale = 1.0) {
  const Vector w = simplexWeights(rng, static_cast<int>(vertices.size()));
  Vector x = Vector::Zero(vertices.front().size());
  for (std::size_t i = 0; i < vertices.size(); ++i) x += w(i) * vertices[i];
  for (const Vector& r : rays) x += ray_scale * rng.uniform() * r;
  return x;
}

// Euclidean distance from x to conv(points), by minimizing
// ||P lambda - x||^2 over the simplex with the face-enumeration oracle.
inline double hullDistance(const Vector& x, const std::vector<Vector>& points) {
  const int k = static_cast<int>(points.size());
  Matrix p(x.size(), k);
  for (int i = 0; i < k; ++i) p.col(i) = points[i];
  const Matrix q = p.transpose() * p;
  const Vector c = -p.transpose() * x;
  const OracleResult r =
      minimizeQuadOverPolytope(q, c, Matrix::Ones(1, k), Vector::Ones(1));
  return std::sqrt(std::max(0.0, r.value + x.squaredNorm()));
}

struct GridResult {
  double min_value = 0.0;
  // Upper bound on (grid minimum - true minimum) from the grid step.
  double resolution = 0.0;
  long long points = 0;
};

// Evaluates q on every convex combination of the vertices whose weights are
// multiples of 1/steps. Any x = V lambda has a grid neighbour V lambda' with
// ||lambda - lambda'||_1 <= 2k/steps, so the grid minimum exceeds the true
// minimum by at most L * R * 2k / steps, with L the largest gradient norm
// over S (attained at a vertex) and R the largest vertex norm.
inline GridResult gridMinimum(const QpInstance& inst, const std::vector<Vector>& vertices,
                              int steps) {
  const int k = static_cast<int>(vertices.size());
  GridResult g;
  g.min_value = INFINITY;
  double lip = 0.0, radius = 0.0;
  for (const Vector& v : vertices) {
    lip = std::max(lip, (2.0 * (inst.Q * v + inst.c)).norm());
    radius = std::max(radius, v.norm());
  }
  g.resolution = lip * radius * 2.0 * k / steps;
  std::vector<int> counts(k, 0);
  // Enumerate compositions of `steps` into k parts.
  std::function<void(int, int)> rec = [&](int idx, int left) {
    if (idx == k - 1) {
      counts[idx] = left;
      Vector x = Vector::Zero(inst.n());
      for (int i = 0; i < k; ++i) x += (static_cast<double>(counts[i]) / steps) * vertices[i];
      g.min_value = std::min(g.min_value, evaluateObjective(inst, x));
      ++g.points;
      return;
    }
    for (int c = 0; c <= left; ++c) {
      counts[idx] = c;
      rec(idx + 1, left - c);
    }
  };
  rec(0, steps);
  return g;
}

struct HandInstance {
  QpInstance instance;
  double lstar;
  std::string construction;
};

// Unbounded feasible regions with n <= 3, every recession direction of
// strictly positive curvature, and a minimum worked out by hand.
inline std::vector<HandInstance> handInstances() {
  return {
      {instanceFrom(2, {1, -1}, {0}, {1, 0, 0, 1}, {-1, -1}, "ray-identity"), -2.0,
       "S = {(t,t) : t >= 0}, q = 2t^2 - 4t, minimized at t = 1"},
      {instanceFrom(3, {1, -1, 0}, {0}, {.5, 0, 1, 0, .5, 1, 1, 1, 1}, {-.5, -.5, -1},
                    "cone-coupled"),
       -1.0,
       "S = {(t,t,u) : t,u >= 0}, q = (t+u)^2 - 2(t+u), minimized on t+u = 1"},
      {instanceFrom(3, {1, 0, 0}, {1}, {0, -1, -1, -1, 1, 2, -1, 2, 1}, {0, 0, 0},
                    "fixed-first"),
       -1.0,
       "x1 = 1, q = (x2+x3)^2 + 2 x2 x3 - 2(x2+x3) >= s^2 - 2s with s = x2+x3; -1 at s = 1"},
      {instanceFrom(3, {0, 0, 1}, {1}, {1, 3, -2, 3, 1, -1, -2, -1, 0}, {0, 0, 0},
                    "fixed-third"),
       -4.0,
       "x3 = 1, q = (x1+x2)^2 + 4 x1 x2 - 4 x1 - 2 x2; x2 = 0 gives (x1-2)^2 - 4, "
       "x2 > 0 only raises q; -4 at (2,0,1)"},
      {instanceFrom(3, {1, 1, 0}, {1}, {0, 2, -1, 2, 0, -2, -1, -2, 1}, {0, 0, 0},
                    "simplex-plus-ray"),
       -4.0,
       "x1 + x2 = 1; x3 = x1 + 2 x2 is optimal, leaving 4 x1 x2 - (1 + x2)^2, "
       "concave in x2 and smallest at x2 = 1; -4 at (0,1,2)"},
  };
}

struct CommandResult {
  int exit_code = -1;
  std::string out;
};

inline CommandResult runCommand(const std::string& cmd) {
  CommandResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace qprelax::testing
