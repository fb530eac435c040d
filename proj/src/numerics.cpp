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

#include "qprelax/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace qprelax {

EigenDecomposition symEigen(const Matrix& m) {
  if (!m.allFinite()) throw Error(ErrorCode::kNonFinite, "matrix is not finite");
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "eigendecomposition needs a square matrix");
  }
  if (m.rows() == 0) return {Vector(0), Matrix(0, 0)};
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kNumeric, "eigendecomposition failed to converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double minEigenvalue(const Matrix& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kNumeric, "eigendecomposition failed to converge");
  }
  return solver.eigenvalues()(0);
}

namespace {

struct SplitBases {
  Matrix range;  // orthonormal basis of range(A')
  Matrix null;   // orthonormal basis of null(A)
};

SplitBases splitBases(const Matrix& a, double tol) {
  const auto n = a.cols();
  if (a.rows() == 0 || n == 0) return {Matrix(n, 0), Matrix::Identity(n, n)};
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const Vector& sigma = svd.singularValues();
  const double smax = sigma.size() ? sigma(0) : 0.0;
  Eigen::Index rank = 0;
  if (smax > 0.0) {
    while (rank < sigma.size() && sigma(rank) > tol * smax) ++rank;
  }
  const Matrix& v = svd.matrixV();
  return {v.leftCols(rank), v.rightCols(n - rank)};
}

}  // namespace

Matrix nullspaceBasis(const Matrix& a, double tol) {
  if (!a.allFinite()) throw Error(ErrorCode::kNonFinite, "matrix is not finite");
  return splitBases(a, tol).null;
}

Matrix rowspaceBasis(const Matrix& a, double tol) {
  if (!a.allFinite()) throw Error(ErrorCode::kNonFinite, "matrix is not finite");
  return splitBases(a, tol).range;
}

Matrix projectCone(const Matrix& m, ConeProjection cone) {
  if (!m.allFinite()) throw Error(ErrorCode::kNonFinite, "matrix is not finite");
  switch (cone) {
    case ConeProjection::kPsd: {
      Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (m + m.transpose()));
      const Vector clipped = solver.eigenvalues().cwiseMax(0.0);
      const Matrix& v = solver.eigenvectors();
      return v * clipped.asDiagonal() * v.transpose();
    }
    case ConeProjection::kNonneg:
      return m.cwiseMax(0.0);
    case ConeProjection::kRow0Nonneg: {
      Matrix out = m;
      for (Eigen::Index j = 1; j < m.cols(); ++j) {
        out(0, j) = std::max(0.0, m(0, j));
        out(j, 0) = std::max(0.0, m(j, 0));
      }
      return out;
    }
  }
  return m;
}

Matrix projectPsdFace(const Matrix& m, const Matrix& basis) {
  if (basis.cols() == 0) return Matrix::Zero(m.rows(), m.cols());
  const Matrix reduced = basis.transpose() * m * basis;
  return basis * projectCone(reduced, ConeProjection::kPsd) * basis.transpose();
}

AffineProjector::AffineProjector(std::vector<Matrix> constraints, Vector rhs)
    : constraints_(std::move(constraints)), rhs_(std::move(rhs)) {
  const auto k = static_cast<Eigen::Index>(constraints_.size());
  if (rhs_.size() != k) {
    throw Error(ErrorCode::kDimensionMismatch, "one right-hand side per constraint");
  }
  if (k == 0) return;
  dim_ = static_cast<int>(constraints_.front().rows());
  Matrix gram(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      gram(i, j) = gram(j, i) = constraints_[i].cwiseProduct(constraints_[j]).sum();
    }
  }
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(gram);
  cod.setThreshold(1e-12);
  degenerate_ = cod.rank() < k;
  gram_pinv_ = cod.pseudoInverse();
}

double AffineProjector::residual(const Matrix& m) const {
  double worst = 0.0;
  for (std::size_t i = 0; i < constraints_.size(); ++i) {
    worst = std::max(
        worst, std::abs(constraints_[i].cwiseProduct(m).sum() - rhs_(i)));
  }
  return worst;
}

Matrix AffineProjector::apply(const Matrix& m) const {
  const auto k = static_cast<Eigen::Index>(constraints_.size());
  if (k == 0) return m;
  Vector r(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    r(i) = constraints_[i].cwiseProduct(m).sum() - rhs_(i);
  }
  const Vector mu = gram_pinv_ * r;
  Matrix out = m;
  for (Eigen::Index i = 0; i < k; ++i) out.noalias() -= mu(i) * constraints_[i];
  return out;
}

AffineProjector buildAffineProjector(const LiftedProblem& lp,
                                     const std::optional<Vector>& pin) {
  const int dim = lp.n + 1;
  std::vector<Matrix> rows;
  std::vector<double> rhs;
  rows.push_back(lp.ahat);
  rhs.push_back(0.0);
  Matrix corner = Matrix::Zero(dim, dim);
  corner(0, 0) = 1.0;
  rows.push_back(corner);
  rhs.push_back(1.0);
  if (pin) {
    if (pin->size() != lp.n) {
      throw Error(ErrorCode::kDimensionMismatch, "pinned point has wrong length");
    }
    if (!pin->allFinite()) throw Error(ErrorCode::kNonFinite, "pinned point is not finite");
    for (int j = 1; j <= lp.n; ++j) {
      Matrix e = Matrix::Zero(dim, dim);
      e(0, j) = e(j, 0) = 0.5;
      rows.push_back(std::move(e));
      rhs.push_back((*pin)(j - 1));
    }
  }
  return AffineProjector(std::move(rows),
                         Eigen::Map<const Vector>(rhs.data(), rhs.size()));
}

}  // namespace qprelax
