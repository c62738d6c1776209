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

#include <algorithm>
#include <cmath>

#include "bdris/channel.hpp"
#include "bdris/model.hpp"

namespace bdris::testing {

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

/// Symmetric unitary Q Q^T from a Haar unitary Q.
inline MatrixXcd random_symmetric_unitary(Index m, Rng& rng) {
  const MatrixXcd q = haar_unitary(m, rng);
  const MatrixXcd t = q * q.transpose();
  return 0.5 * (t + t.transpose());
}

inline MatrixXcd random_symmetric(Index m, Rng& rng) {
  MatrixXcd a(m, m);
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < m; ++i) a(i, j) = complex_normal(rng);
  return 0.5 * (a + a.transpose());
}

inline VectorXcd half_of(const MatrixXcd& sym) {
  const Index m = sym.rows();
  VectorXcd theta(half_triangle_size(m));
  for (Index c = 0; c < m; ++c)
    for (Index r = 0; r <= c; ++r) theta(half_triangle_index(r, c)) = sym(r, c);
  return theta;
}

/// Unit-variance i.i.d. channels without pathloss.
inline ChannelRealization random_channel(Index n, Index m, Rng& rng) {
  ChannelRealization chan;
  chan.h_incident.resize(n, m);
  chan.h_reflect.resize(n, m);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < m; ++j) {
      chan.h_incident(i, j) = complex_normal(rng);
      chan.h_reflect(i, j) = complex_normal(rng);
    }
  chan.freqs_hz = VectorXd::LinSpaced(n, 2.4e9, 2.4e9 + 1e6 * static_cast<double>(n - 1));
  return chan;
}

}  // namespace bdris::testing
