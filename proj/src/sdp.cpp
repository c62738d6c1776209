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

#include "bdris/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <type_traits>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace bdris {

namespace {

template <typename Scalar>
constexpr bool kIsComplex = !std::is_same_v<Scalar, double>;

// Isometric real coordinates of a Hermitian matrix: diagonal, then sqrt(2)
// times the real (and, for complex data, imaginary) part of each strictly
// upper entry. Frobenius inner products become dot products.
template <typename Scalar>
class HermitianCoords {
 public:
  using Matrix = typename SdpProblem<Scalar>::Matrix;
  static constexpr Index kParts = kIsComplex<Scalar> ? 2 : 1;

  explicit HermitianCoords(Index dim) : dim_(dim) {}

  Index size() const { return dim_ + kParts * (dim_ * (dim_ - 1) / 2); }
  Index diag(Index i) const { return i; }
  Index upper(Index i, Index j) const { return dim_ + kParts * (j * (j - 1) / 2 + i); }

  VectorXd vec(const Matrix& x) const {
    VectorXd v(size());
    for (Index j = 0; j < dim_; ++j) {
      v(diag(j)) = std::real(x(j, j));
      for (Index i = 0; i < j; ++i) {
        const Index p = upper(i, j);
        v(p) = kSqrt2 * std::real(x(i, j));
        if constexpr (kIsComplex<Scalar>) v(p + 1) = kSqrt2 * std::imag(x(i, j));
      }
    }
    return v;
  }

  Matrix unvec(const VectorXd& v) const {
    Matrix x(dim_, dim_);
    for (Index j = 0; j < dim_; ++j) {
      x(j, j) = v(diag(j));
      for (Index i = 0; i < j; ++i) {
        const Index p = upper(i, j);
        if constexpr (kIsComplex<Scalar>) {
          const cd e(v(p) / kSqrt2, v(p + 1) / kSqrt2);
          x(i, j) = e;
          x(j, i) = std::conj(e);
        } else {
          x(i, j) = x(j, i) = v(p) / kSqrt2;
        }
      }
    }
    return x;
  }

  void append_row(const Eigen::SparseMatrix<Scalar>& a, Index row,
                  std::vector<Eigen::Triplet<double>>& out) const {
    for (Index k = 0; k < a.outerSize(); ++k)
      for (typename Eigen::SparseMatrix<Scalar>::InnerIterator it(a, k); it; ++it) {
        const Index r = it.row(), c = it.col();
        if (r > c) continue;
        if (r == c) {
          out.emplace_back(row, diag(r), std::real(it.value()));
        } else {
          const Index p = upper(r, c);
          out.emplace_back(row, p, kSqrt2 * std::real(it.value()));
          if constexpr (kIsComplex<Scalar>) out.emplace_back(row, p + 1, kSqrt2 * std::imag(it.value()));
        }
      }
  }

 private:
  static constexpr double kSqrt2 = 1.41421356237309504880;
  Index dim_;
};

template <typename Scalar>
double max_abs_offset(const typename SdpProblem<Scalar>::Matrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace

template <typename Scalar>
void SdpProblem<Scalar>::validate() const {
  if (dim < 1) throw Error("sdp: dimension must be >= 1");
  if (objective.rows() != dim || objective.cols() != dim) throw Error("sdp: objective has wrong shape");
  if (constraints.empty()) throw Error("sdp: at least one constraint is required");
  const double scale = std::max(1.0, objective.cwiseAbs().maxCoeff());
  if (max_abs_offset<Scalar>(objective) > 1e-12 * scale) throw Error("sdp: objective is not Hermitian");
  for (const auto& c : constraints) {
    if (c.a.rows() != dim || c.a.cols() != dim) throw Error("sdp: constraint has wrong shape");
    const Eigen::SparseMatrix<Scalar> diff = c.a - Eigen::SparseMatrix<Scalar>(c.a.adjoint());
    for (Index k = 0; k < diff.outerSize(); ++k)
      for (typename Eigen::SparseMatrix<Scalar>::InnerIterator it(diff, k); it; ++it)
        if (std::abs(it.value()) > 1e-12) throw Error("sdp: constraint matrix is not Hermitian");
  }
}

template <typename Scalar>
double trace_product(const Eigen::SparseMatrix<Scalar>& a, const typename SdpProblem<Scalar>::Matrix& x) {
  double acc = 0.0;
  for (Index k = 0; k < a.outerSize(); ++k)
    for (typename Eigen::SparseMatrix<Scalar>::InnerIterator it(a, k); it; ++it)
      acc += std::real(it.value() * x(it.col(), it.row()));
  return acc;
}

namespace {

template <typename Scalar>
Eigen::SparseMatrix<double, Eigen::RowMajor> constraint_operator(const SdpProblem<Scalar>& prob,
                                                               const HermitianCoords<Scalar>& coords) {
  const Index m = static_cast<Index>(prob.constraints.size());
  std::vector<Eigen::Triplet<double>> triplets;
  for (Index i = 0; i < m; ++i) coords.append_row(prob.constraints[i].a, i, triplets);
  Eigen::SparseMatrix<double, Eigen::RowMajor> a(m, coords.size());
  a.setFromTriplets(triplets.begin(), triplets.end());
  return a;
}

Eigen::LLT<MatrixXd> factor_gram(const Eigen::SparseMatrix<double, Eigen::RowMajor>& a) {
  Eigen::LLT<MatrixXd> llt(MatrixXd(a * a.transpose()));
  if (llt.info() != Eigen::Success || llt.rcond() < 1e-12) throw Error("sdp: constraints are linearly dependent");
  return llt;
}

template <typename Scalar>
SdpSolution<Scalar> solve_admm(const SdpProblem<Scalar>& prob) {
  using Matrix = typename SdpProblem<Scalar>::Matrix;

  const HermitianCoords<Scalar> coords(prob.dim);
  const Index nv = coords.size();
  const Index m = static_cast<Index>(prob.constraints.size());

  VectorXd b(m);
  for (Index i = 0; i < m; ++i) b(i) = prob.constraints[i].b;
  const Eigen::SparseMatrix<double, Eigen::RowMajor> a = constraint_operator(prob, coords);
  const Eigen::LLT<MatrixXd> gram_llt = factor_gram(a);

  auto project_affine = [&](VectorXd v) {
    const VectorXd resid = a * v - b;
    v.noalias() -= a.transpose() * gram_llt.solve(resid);
    return v;
  };

  Eigen::SelfAdjointEigenSolver<Matrix> eig;
  auto project_psd = [&](const VectorXd& v) {
    eig.compute(coords.unvec(v));
    const auto& lambda = eig.eigenvalues();
    const auto& vecs = eig.eigenvectors();
    Index first = 0;
    while (first < lambda.size() && lambda(first) <= 0.0) ++first;
    const Index kept = lambda.size() - first;
    if (kept == 0) return VectorXd::Zero(v.size()).eval();
    const Matrix basis = vecs.rightCols(kept);
    const Matrix scaled = basis * lambda.tail(kept).asDiagonal();
    return coords.vec(scaled * basis.adjoint());
  };

  // The objective is scaled to unit norm; the argmin does not change.
  const VectorXd c_raw = coords.vec(prob.objective);
  const double c_scale = c_raw.norm() > 0.0 ? c_raw.norm() : 1.0;
  const VectorXd c = c_raw / c_scale;

  constexpr double kRelax = 1.6;
  constexpr int kCheckEvery = 5;
  constexpr int kBalanceEvery = 20;
  constexpr double kBalanceRatio = 3.0;
  double rho = 1.0;
  VectorXd x = VectorXd::Zero(nv);
  VectorXd z = VectorXd::Zero(nv);
  VectorXd u = VectorXd::Zero(nv);

  SdpSolution<Scalar> sol;
  for (int it = 1; it <= prob.tol.max_iterations; ++it) {
    x = project_affine(z - u - c / rho);
    const VectorXd x_hat = kRelax * x + (1.0 - kRelax) * z;
    z = project_psd(x_hat + u);
    u += x_hat - z;
    sol.iterations = it;

    if (it % kBalanceEvery == 0 && sol.primal_residual > 0.0) {
      // Residuals measured against their own tolerances, so rho follows
      // whichever criterion is further from being met.
      const double r_primal = sol.primal_residual / prob.tol.feas;
      const double r_dual = sol.dual_residual / prob.tol.rel_objective;
      if (r_primal > kBalanceRatio * r_dual) {
        rho *= 2.0;
        u /= 2.0;
      } else if (r_dual > kBalanceRatio * r_primal) {
        rho /= 2.0;
        u *= 2.0;
      }
    }

    if (it % kCheckEvery != 0 && it != prob.tol.max_iterations) continue;

    const double feas = (a * z - b).cwiseAbs().maxCoeff();
    const VectorXd slack = -rho * u;
    const VectorXd y = gram_llt.solve(a * (c - slack));
    const double dual_res = (c - slack - a.transpose() * y).norm();
    const double primal_obj = c.dot(z);
    const double dual_obj = b.dot(y);
    const double gap = std::abs(primal_obj - dual_obj) / (1.0 + std::abs(primal_obj) + std::abs(dual_obj));
    sol.primal_residual = feas;
    sol.dual_residual = dual_res;
    sol.gap = gap;

    if (feas <= prob.tol.feas && dual_res <= prob.tol.rel_objective && gap <= prob.tol.rel_objective) {
      sol.status = SdpStatus::kConverged;
      break;
    }
    if (slack.norm() > 1e8 && feas > 1e3 * prob.tol.feas)
      throw SdpInfeasible("sdp: dual iterates diverge, problem appears infeasible");
  }
  if (sol.status != SdpStatus::kConverged && sol.primal_residual > 1e3 * prob.tol.feas &&
      (-rho * u).norm() > 1e4)
    throw SdpInfeasible("sdp: no feasible point found within the iteration cap");

  sol.x = coords.unvec(z);
  sol.objective = c_raw.dot(z);
  Eigen::SelfAdjointEigenSolver<Matrix> final_eig(sol.x, Eigen::EigenvaluesOnly);
  sol.min_eigenvalue = final_eig.eigenvalues().minCoeff();
  return sol;
}

template <typename Scalar>
struct SparseEntry {
  Index row, col;
  Scalar value;
};

// Hermitian inverse through a Cholesky factor; empty on failure.
template <typename Matrix>
bool hermitian_inverse(const Matrix& a, Matrix& out) {
  const Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) return false;
  out = llt.solve(Matrix::Identity(a.rows(), a.cols()));
  out = (0.5 * (out + out.adjoint())).eval();
  return true;
}

// Largest step alpha with x + alpha dx PSD, given the Cholesky factor of x.
template <typename Matrix>
double max_step(const Eigen::LLT<Matrix>& x_llt, const Matrix& dx) {
  const auto& l = x_llt.matrixL();
  Matrix t = l.solve(dx);
  t = l.solve(t.adjoint().eval()).adjoint();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (t + t.adjoint()), Eigen::EigenvaluesOnly);
  const double lmin = eig.eigenvalues().minCoeff();
  return lmin < 0.0 ? -1.0 / lmin : std::numeric_limits<double>::infinity();
}

template <typename Scalar>
SdpSolution<Scalar> solve_interior_point(const SdpProblem<Scalar>& prob) {
  using Matrix = typename SdpProblem<Scalar>::Matrix;
  const Index n = prob.dim;
  const Index m = static_cast<Index>(prob.constraints.size());

  std::vector<std::vector<SparseEntry<Scalar>>> entries(m);
  VectorXd b(m);
  for (Index k = 0; k < m; ++k) {
    const auto& a = prob.constraints[k].a;
    for (Index o = 0; o < a.outerSize(); ++o)
      for (typename Eigen::SparseMatrix<Scalar>::InnerIterator it(a, o); it; ++it)
        if (it.value() != Scalar(0)) entries[k].push_back({it.row(), it.col(), it.value()});
    b(k) = prob.constraints[k].b;
  }

  // Tr(A_k Y) for every k.
  auto apply_a = [&](const Matrix& y) {
    VectorXd out(m);
    for (Index k = 0; k < m; ++k) {
      double acc = 0.0;
      for (const auto& e : entries[k]) acc += std::real(e.value * y(e.col, e.row));
      out(k) = acc;
    }
    return out;
  };
  auto apply_at = [&](const VectorXd& y) {
    Matrix out = Matrix::Zero(n, n);
    for (Index k = 0; k < m; ++k)
      for (const auto& e : entries[k]) out(e.row, e.col) += y(k) * e.value;
    return out;
  };

  const double c_scale = prob.objective.norm() > 0.0 ? prob.objective.norm() : 1.0;
  const Matrix c = prob.objective / c_scale;

  double a_max = 0.0;
  double start_x = 0.0;
  for (Index k = 0; k < m; ++k) {
    double norm2 = 0.0;
    for (const auto& e : entries[k]) norm2 += std::norm(e.value);
    const double a_norm = std::sqrt(norm2);
    a_max = std::max(a_max, a_norm);
    start_x = std::max(start_x, static_cast<double>(n) * (1.0 + std::abs(b(k))) / (1.0 + a_norm));
  }
  const double start_z = (1.0 + std::max(a_max, 1.0)) / std::sqrt(static_cast<double>(n));

  Matrix x = start_x * Matrix::Identity(n, n);
  Matrix z = start_z * Matrix::Identity(n, n);
  VectorXd y = VectorXd::Zero(m);

  constexpr double kStepFraction = 0.95;
  const int cap = std::min(prob.tol.max_iterations, 500);
  SdpSolution<Scalar> sol;
  Matrix z_inv, schur_cols;
  MatrixXd schur(m, m);

  for (int it = 1; it <= cap; ++it) {
    const VectorXd r_p = b - apply_a(x);
    const Matrix r_d = c - z - apply_at(y);
    const double mu = std::real((x * z).trace()) / static_cast<double>(n);
    const double primal_obj = std::real((c * x).trace());
    const double dual_obj = b.dot(y);
    sol.primal_residual = r_p.cwiseAbs().maxCoeff();
    sol.dual_residual = r_d.norm();
    sol.gap = std::abs(primal_obj - dual_obj) / (1.0 + std::abs(primal_obj) + std::abs(dual_obj));
    sol.iterations = it - 1;
    if (sol.primal_residual <= prob.tol.feas && sol.dual_residual <= prob.tol.rel_objective &&
        sol.gap <= prob.tol.rel_objective) {
      sol.status = SdpStatus::kConverged;
      break;
    }
    if (x.norm() > 1e12 || std::abs(dual_obj) > 1e12) break;

    if (!hermitian_inverse(z, z_inv)) break;

    // Schur complement S_kl = Re Tr(A_k G_l) with G_l = X A_l Z^-1, formed
    // from the columns of X and rows of Z^-1 that A_l touches.
    for (Index l = 0; l < m; ++l) {
      const auto& el = entries[l];
      const Index nnz = static_cast<Index>(el.size());
      Matrix xs(n, nnz), zs(nnz, n);
      for (Index e = 0; e < nnz; ++e) {
        xs.col(e) = x.col(el[e].row);
        zs.row(e) = el[e].value * z_inv.row(el[e].col);
      }
      const Matrix g = xs * zs;
      for (Index k = 0; k <= l; ++k) {
        double acc = 0.0;
        for (const auto& ek : entries[k]) acc += std::real(ek.value * g(ek.col, ek.row));
        schur(k, l) = schur(l, k) = acc;
      }
    }
    Eigen::LLT<MatrixXd> schur_llt(schur);
    if (schur_llt.info() != Eigen::Success) {
      schur.diagonal().array() += 1e-12 * schur.diagonal().cwiseAbs().maxCoeff();
      schur_llt.compute(schur);
      if (schur_llt.info() != Eigen::Success) break;
    }

    const Matrix x_rd_zinv = x * r_d * z_inv;
    const VectorXd a_x_rd_zinv = apply_a(x_rd_zinv);
    const VectorXd a_zinv = apply_a(z_inv);

    auto direction = [&](double tau, const Matrix* corr, Matrix& dx, VectorXd& dy, Matrix& dz) {
      VectorXd rhs = b - tau * a_zinv + a_x_rd_zinv;
      if (corr) rhs += apply_a(*corr);
      dy = schur_llt.solve(rhs);
      dz = r_d - apply_at(dy);
      Matrix t = x * dz * z_inv;
      if (corr) t += *corr;
      dx = tau * z_inv - x - 0.5 * (t + t.adjoint());
    };

    const Eigen::LLT<Matrix> x_llt(x), z_llt(z);
    if (x_llt.info() != Eigen::Success || z_llt.info() != Eigen::Success) break;

    Matrix dx, dz;
    VectorXd dy;
    direction(0.0, nullptr, dx, dy, dz);
    const double ap_aff = std::min(1.0, max_step(x_llt, dx));
    const double ad_aff = std::min(1.0, max_step(z_llt, dz));
    const double mu_aff =
        std::real(((x + ap_aff * dx) * (z + ad_aff * dz)).trace()) / static_cast<double>(n);
    const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);

    const Matrix corr = dx * dz * z_inv;
    direction(sigma * mu, &corr, dx, dy, dz);
    const double ap = std::min(1.0, kStepFraction * max_step(x_llt, dx));
    const double ad = std::min(1.0, kStepFraction * max_step(z_llt, dz));
    x += ap * dx;
    x = (0.5 * (x + x.adjoint())).eval();
    z += ad * dz;
    z = (0.5 * (z + z.adjoint())).eval();
    y += ad * dy;
    sol.iterations = it;
  }

  if (sol.status != SdpStatus::kConverged && sol.primal_residual > 1e3 * prob.tol.feas &&
      (x.norm() > 1e8 || std::abs(b.dot(y)) > 1e8))
    throw SdpInfeasible("sdp: iterates diverge, problem appears infeasible");

  sol.x = x;
  sol.objective = c_scale * std::real((c * x).trace());
  Eigen::SelfAdjointEigenSolver<Matrix> final_eig(x, Eigen::EigenvaluesOnly);
  sol.min_eigenvalue = final_eig.eigenvalues().minCoeff();
  return sol;
}

}  // namespace

std::string to_string(SdpAlgorithm algorithm) {
  return algorithm == SdpAlgorithm::kAdmm ? "admm" : "interior-point";
}

SdpAlgorithm sdp_algorithm_from_string(const std::string& name) {
  if (name == "admm") return SdpAlgorithm::kAdmm;
  if (name == "interior-point") return SdpAlgorithm::kInteriorPoint;
  throw Error("unknown sdp algorithm '" + name + "' (expected admm or interior-point)");
}

template <typename Scalar>
SdpSolution<Scalar> sdp_solve(const SdpProblem<Scalar>& prob) {
  prob.validate();
  if (prob.algorithm == SdpAlgorithm::kInteriorPoint)
    factor_gram(constraint_operator(prob, HermitianCoords<Scalar>(prob.dim)));
  return prob.algorithm == SdpAlgorithm::kAdmm ? solve_admm(prob) : solve_interior_point(prob);
}

template struct SdpProblem<double>;
template struct SdpProblem<cd>;
template SdpSolution<double> sdp_solve(const SdpProblem<double>&);
template SdpSolution<cd> sdp_solve(const SdpProblem<cd>&);
template double trace_product(const Eigen::SparseMatrix<double>&, const SdpProblem<double>::Matrix&);
template double trace_product(const Eigen::SparseMatrix<cd>&, const SdpProblem<cd>::Matrix&);

}  // namespace bdris
