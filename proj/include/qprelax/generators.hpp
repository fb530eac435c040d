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

// Instance generators: the 5x5 Horn instance, its block extensions, and
// seeded random families.

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>

#include "qprelax/core.hpp"

namespace qprelax {

using IntMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;
using IntVector = Eigen::Matrix<long long, Eigen::Dynamic, 1>;

// Seeded generator. Raw words come from std::mt19937_64, whose output
// sequence is fixed by the C++ standard. Integers in [lo, hi] are
// lo + (word mod (hi - lo + 1)); reals in [0, 1) are (word >> 11) * 2^-53.
// The std distributions are avoided because their algorithms are
// implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  long long integer(long long lo, long long hi);
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

struct HornData {
  IntMatrix q;  // 5x5 Horn matrix
  IntVector c;
  IntMatrix a;  // 1x5
  IntVector b;
  IntMatrix d;  // recession certificate, trace 35
};

HornData hornData();

struct HornInstance {
  QpInstance instance;
  IntMatrix d;
};

HornInstance hornInstance();

struct IntRange {
  long long lo = 0;
  long long hi = 0;
};

// Q = [[Qbar, B], [B', M]], c = [cbar; f], A = [Abar, F], b = bbar with
// B >= 0, M = W'W + N (N >= 0 symmetric), f >= 0. Any block left unset is
// drawn from its range with the seeded generator.
struct HornFamilyParams {
  int n = 5;
  std::uint64_t seed = 0;
  IntRange b_range{0, 2};
  IntRange w_range{-2, 2};
  IntRange nonneg_range{0, 2};
  IntRange f_range{0, 2};
  IntRange f_col_range{-3, 3};  // entries of F
  std::optional<IntMatrix> b_block;
  std::optional<IntMatrix> w_block;
  std::optional<IntMatrix> n_block;
  std::optional<IntVector> f;
  std::optional<IntMatrix> f_cols;
};

struct HornFamilyInstance {
  QpInstance instance;
  IntMatrix q;
  IntMatrix a;
  IntMatrix d;  // diag(Dtilde, 0)
  long long q_dot_d = 0;    // <Q, D>, exact
  long long ata_dot_d = 0;  // <A'A, D>, exact
  // D certifies an unbounded relaxation: <Q, D> < 0 and <A'A, D> = 0.
  bool certificate_valid = false;
};

// Throws kInvalidDimension for n < 5. The embedded certificate is checked
// in exact integer arithmetic and reported, not enforced.
HornFamilyInstance hornFamily(const HornFamilyParams& params);

enum class InstanceKind { kBounded, kConvexOnNullspace, kUnboundedSafe, kInfeasible };

std::string_view instanceKindName(InstanceKind kind);
InstanceKind parseInstanceKind(std::string_view text);

struct GeneratedInstance {
  QpInstance instance;
  // JSON object: kind, seed, prng, and kind-specific certificates.
  std::string metadata;
};

// m counts all equality rows. Throws kInvalidDimension for unusable (n, m)
// and kGenerationFailed when the retry budget is exhausted.
GeneratedInstance randomInstance(InstanceKind kind, int n, int m,
                                 std::uint64_t seed);

}  // namespace qprelax
