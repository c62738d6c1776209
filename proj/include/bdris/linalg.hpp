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

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace bdris {

using cd = std::complex<double>;
using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

using Rng = std::mt19937_64;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSpeedOfLight = 299792458.0;

/// splitmix64 finalizer; derives independent stream seeds from (base, index).
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Circularly-symmetric complex Gaussian with unit variance, CN(0, 1).
inline cd complex_normal(Rng& rng) {
  std::normal_distribution<double> n(0.0, std::sqrt(0.5));
  const double re = n(rng);
  const double im = n(rng);
  return {re, im};
}

inline VectorXcd complex_normal_vector(Index n, Rng& rng) {
  VectorXcd v(n);
  for (Index i = 0; i < n; ++i) v(i) = complex_normal(rng);
  return v;
}

inline cd unit_phasor(double phase) { return std::polar(1.0, phase); }

/// Haar-distributed unitary via QR of a complex Gaussian matrix with the
/// diagonal phase fix.
inline MatrixXcd haar_unitary(Index n, Rng& rng) {
  MatrixXcd g(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) g(i, j) = complex_normal(rng);
  Eigen::HouseholderQR<MatrixXcd> qr(g);
  MatrixXcd q = qr.householderQ() * MatrixXcd::Identity(n, n);
  const MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

/// Number of eigenvalues above rel_tol times the largest one.
template <typename Derived>
Index numerical_rank(const Eigen::MatrixBase<Derived>& hermitian, double rel_tol = 1e-6) {
  using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian.eval(), Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  const double top = ev.maxCoeff();
  if (top <= 0.0) return 0;
  Index rank = 0;
  for (Index i = 0; i < ev.size(); ++i)
    if (ev(i) > rel_tol * top) ++rank;
  return rank;
}

}  // namespace bdris
