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

// Dense symmetric linear algebra used by the conic solver and the checkers.

#pragma once

#include <optional>
#include <vector>

#include "qprelax/core.hpp"

namespace qprelax {

struct EigenDecomposition {
  Vector values;   // ascending
  Matrix vectors;  // columns are eigenvectors
};

EigenDecomposition symEigen(const Matrix& m);
double minEigenvalue(const Matrix& m);

// Orthonormal basis of null(A); rank decided by sigma_i > tol * sigma_max.
// Returns an n x 0 matrix when A has full column rank.
Matrix nullspaceBasis(const Matrix& a, double tol = 1e-10);
// Orthonormal basis of range(A').
Matrix rowspaceBasis(const Matrix& a, double tol = 1e-10);

enum class ConeProjection { kPsd, kNonneg, kRow0Nonneg };

Matrix projectCone(const Matrix& m, ConeProjection cone);

// Projection onto {W S W' : S PSD} for W with orthonormal columns.
Matrix projectPsdFace(const Matrix& m, const Matrix& basis);

// Frobenius projection onto {Y symmetric : <C_i, Y> = r_i}.
class AffineProjector {
 public:
  AffineProjector() = default;
  AffineProjector(std::vector<Matrix> constraints, Vector rhs);

  Matrix apply(const Matrix& m) const;
  double residual(const Matrix& m) const;
  bool degenerate() const { return degenerate_; }
  int dimension() const { return dim_; }
  std::size_t constraintCount() const { return constraints_.size(); }

 private:
  std::vector<Matrix> constraints_;
  Vector rhs_;
  Matrix gram_pinv_;
  int dim_ = 0;
  bool degenerate_ = false;
};

// {<Ahat, Y> = 0, Y00 = 1} plus Y[0,1:n] = pin when given.
AffineProjector buildAffineProjector(const LiftedProblem& lp,
                                     const std::optional<Vector>& pin);

}  // namespace qprelax
