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

#include "bdris/rectenna.hpp"

#include <cmath>
#include <cstdint>

namespace bdris {

void RectennaParams::validate() const {
  if (!(k2 > 0.0 && k4 > 0.0)) throw Error("rectenna coefficients must be positive");
  if (taylor_order != 4) throw Error("only the fourth-order rectenna model is supported");
}

cd fourth_order_sum_naive(const VectorXcd& z) {
  const Index n = z.size();
  cd acc = 0.0;
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b)
      for (Index c = 0; c < n; ++c) {
        const Index d = a + b - c;
        if (d < 0 || d >= n) continue;
        acc += std::conj(z(a)) * std::conj(z(b)) * z(c) * z(d);
      }
  return acc;
}

long long fourth_order_tuple_count(Index n) {
  long long count = 0;
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b)
      for (Index c = 0; c < n; ++c) {
        const Index d = a + b - c;
        if (d >= 0 && d < n) ++count;
      }
  return count;
}

double idc_frequency_domain_naive(const VectorXcd& s, const VectorXcd& h,
                                  const RectennaParams& params) {
  if (s.size() != h.size()) throw Error("idc_frequency_domain: length mismatch");
  const VectorXcd z = s.cwiseProduct(h);
  const cd quad = fourth_order_sum_naive(z);
  return 0.5 * params.k2 * z.squaredNorm() + 0.375 * params.k4 * quad.real();
}

double idc_time_domain_oracle(const VectorXcd& s, const VectorXcd& h, const VectorXd& freqs_hz,
                              const RectennaParams& params, Index samples_per_period) {
  const Index n = s.size();
  if (h.size() != n || freqs_hz.size() != n) throw Error("time-domain oracle: length mismatch");
  if (n == 0) return 0.0;

  const double base = n > 1 ? freqs_hz(1) - freqs_hz(0) : freqs_hz(0);
  if (!(base > 0.0)) throw Error("time-domain oracle: non-positive frequency base");
  std::vector<std::int64_t> harmonic(n);
  for (Index i = 0; i < n; ++i) {
    const double ratio = freqs_hz(i) / base;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * rounded)
      throw Error("time-domain oracle: frequencies are not commensurate with the spacing");
    harmonic[i] = static_cast<std::int64_t>(rounded);
  }
  const std::int64_t top = harmonic.back();
  if (samples_per_period < 256 * top)
    throw Error("time-domain oracle: sampling grid too coarse for the highest harmonic");

  const std::int64_t grid = samples_per_period;
  std::vector<double> cos_table(grid), sin_table(grid);
  for (std::int64_t i = 0; i < grid; ++i) {
    const double phase = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(grid);
    cos_table[i] = std::cos(phase);
    sin_table[i] = std::sin(phase);
  }

  const VectorXcd z = s.cwiseProduct(h);
  double sum2 = 0.0, sum4 = 0.0;
  for (std::int64_t t = 0; t < grid; ++t) {
    double y = 0.0;
    for (Index i = 0; i < n; ++i) {
      const std::int64_t idx = (harmonic[i] * t) % grid;
      y += z(i).real() * cos_table[idx] - z(i).imag() * sin_table[idx];
    }
    const double y2 = y * y;
    sum2 += y2;
    sum4 += y2 * y2;
  }
  const double inv = 1.0 / static_cast<double>(grid);
  return params.k2 * sum2 * inv + params.k4 * sum4 * inv;
}

double idc_from_lags(const VectorXcd& d, const RectennaParams& params) {
  if (d.size() == 0) return 0.0;
  const double d0 = d(0).real();
  double tail = 0.0;
  for (Index k = 1; k < d.size(); ++k) tail += std::norm(d(k));
  return 0.5 * params.k2 * d0 + 0.375 * params.k4 * std::norm(d(0)) + 0.75 * params.k4 * tail;
}

double idc_quadratic_form(const VectorXcd& theta, const std::vector<MatrixXcd>& dks,
                          const RectennaParams& params) {
  VectorXcd d(static_cast<Index>(dks.size()));
  for (std::size_t k = 0; k < dks.size(); ++k) {
    if (dks[k].rows() != theta.size() || dks[k].cols() != theta.size())
      throw Error("idc_quadratic_form: dimension mismatch");
    d(static_cast<Index>(k)) = theta.dot(dks[k] * theta);
  }
  return idc_from_lags(d, params);
}

}  // namespace bdris
