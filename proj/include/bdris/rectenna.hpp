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

#include <vector>

#include "bdris/model.hpp"

namespace bdris {

/// Truncated (fourth-order) Taylor model of a single-diode rectenna.
struct RectennaParams {
  double k2 = 0.17;
  double k4 = 957.25;
  int taylor_order = 4;

  void validate() const;
};

/// Lag products r_k = sum_n conj(z_n) z_{n+k}, k = 0..N-1.
template <typename Derived>
VectorXcd lag_products(const Eigen::MatrixBase<Derived>& z) {
  const Index n = z.size();
  VectorXcd r(n);
  for (Index k = 0; k < n; ++k)
    r(k) = z.head(n - k).conjugate().cwiseProduct(z.tail(n - k)).sum();
  return r;
}

/// Fourth-order sum over n0 + n1 = n2 + n3 of conj(z_n0 z_n1) z_n2 z_n3,
/// grouped by lag: |r_0|^2 + 2 sum_{k>=1} |r_k|^2. O(N^2).
template <typename Derived>
double fourth_order_sum(const Eigen::MatrixBase<Derived>& z) {
  const VectorXcd r = lag_products(z);
  return r.squaredNorm() * 2.0 - std::norm(r(0));
}

/// Same quantity by direct enumeration of all index quadruples. O(N^4).
/// The returned imaginary part is the round-off residue.
cd fourth_order_sum_naive(const VectorXcd& z);

/// Number of quadruples (n0, n1, n2, n3) in [0, N)^4 with n0 + n1 = n2 + n3.
long long fourth_order_tuple_count(Index n);

/// Frequency-domain DC current for weights s and cascade gains h.
template <typename DerivedS, typename DerivedH>
double idc_frequency_domain(const Eigen::MatrixBase<DerivedS>& s,
                            const Eigen::MatrixBase<DerivedH>& h, const RectennaParams& params) {
  if (s.size() != h.size()) throw Error("idc_frequency_domain: length mismatch");
  const VectorXcd z = s.cwiseProduct(h);
  return 0.5 * params.k2 * z.squaredNorm() + 0.375 * params.k4 * fourth_order_sum(z);
}

/// Reference evaluation through the O(N^4) enumeration.
double idc_frequency_domain_naive(const VectorXcd& s, const VectorXcd& h,
                                  const RectennaParams& params);

/// Time-domain oracle: K2 <y^2> + K4 <y^4> averaged over one period of the
/// received multisine on a uniform grid. Frequencies must be integer
/// multiples of a common base (the spacing, or f_1 for one tone), and the
/// grid must hold at least 256 samples per unit of the highest harmonic.
double idc_time_domain_oracle(const VectorXcd& s, const VectorXcd& h, const VectorXd& freqs_hz,
                              const RectennaParams& params, Index samples_per_period = 1 << 16);

/// DC current in the lifted form, from d_k = theta^H D_k theta.
double idc_quadratic_form(const VectorXcd& theta, const std::vector<MatrixXcd>& dks,
                          const RectennaParams& params);

/// Same objective from precomputed d = (d_0, ..., d_{N-1}).
double idc_from_lags(const VectorXcd& d, const RectennaParams& params);

}  // namespace bdris
