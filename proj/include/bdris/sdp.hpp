// Copyright 2026 The bdris-wpt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "bdris/model.hpp"

namespace bdris {

struct SdpTolerances {
  double feas = 1e-7;           ///< max |Tr(A_i X) - b_i|
  double psd = 1e-8;            ///< min eigenvalue >= -psd
  double rel_objective = 1e-6;  ///< relative duality gap and dual residual
  int max_iterations = 50000;
};

enum class SdpAlgorithm {
  kAdmm,           ///< first-order operator splitting
  kInteriorPoint,  ///< primal-dual path following
};

std::string to_string(SdpAlgorithm algorithm);
SdpAlgorithm sdp_algorithm_from_string(const std::string& name);

/// Tr(a X) = b, with `a` Hermitian and both triangles stored.
template <typename Scalar>
struct SdpConstraint {
  Eigen::SparseMatrix<Scalar> a;
  double b = 0.0;
};

/// minimize Tr(C X) subject to Tr(A_i X) = b_i and X PSD, over Hermitian
/// (or real symmetric) X.
template <typename Scalar>
struct SdpProblem {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Index dim = 0;
  Matrix objective;
  std::vector<SdpConstraint<Scalar>> constraints;
  SdpTolerances tol;
  SdpAlgorithm algorithm = SdpAlgorithm::kAdmm;

  /// Hermitian data to 1e-12 and at least one constraint.
  void validate() const;
};

enum class SdpStatus { kConverged, kIterationCap };

template <typename Scalar>
struct SdpSolution {
  typename SdpProblem<Scalar>::Matrix x;
  SdpStatus status = SdpStatus::kIterationCap;
  int iterations = 0;
  double objective = 0.0;
  double primal_residual = 0.0;  ///< max_i |Tr(A_i X) - b_i|
  double dual_residual = 0.0;    ///< relative, objective scaled to unit norm
  double gap = 0.0;              ///< relative duality gap
  double min_eigenvalue = 0.0;

  bool converged() const { return status == SdpStatus::kConverged; }
};

class SdpInfeasible : public Error {
 public:
  using Error::Error;
};

/// Solves with prob.algorithm. Both backends stop on the same three tests:
/// primal feasibility, dual residual and relative duality gap, with the
/// objective scaled to unit Frobenius norm.
///
/// kAdmm: two-block ADMM. Projection onto the affine set through a cached
/// Cholesky factor of the constraint Gram matrix, projection onto the PSD
/// cone by eigendecomposition, over-relaxation 1.6 and residual balancing
/// of the penalty. One dense D x D eigendecomposition per iteration.
///
/// kInteriorPoint: infeasible primal-dual path following with the HKM
/// search direction and a Mehrotra predictor-corrector step. The Schur
/// complement is assembled from the sparse constraint entries, so an
/// iteration costs O((sum_i nnz(A_i))^2 + m^3 + D^3). Iterates stay
/// strictly positive definite.
template <typename Scalar>
SdpSolution<Scalar> sdp_solve(const SdpProblem<Scalar>& prob);

extern template SdpSolution<double> sdp_solve(const SdpProblem<double>&);
extern template SdpSolution<cd> sdp_solve(const SdpProblem<cd>&);

/// Tr(A X) for sparse Hermitian A and dense Hermitian X.
template <typename Scalar>
double trace_product(const Eigen::SparseMatrix<Scalar>& a,
                     const typename SdpProblem<Scalar>::Matrix& x);

}  // namespace bdris
