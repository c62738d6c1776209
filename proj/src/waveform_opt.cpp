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

#include "bdris/waveform_opt.hpp"

#include <cmath>
#include <iomanip>
#include <limits>

namespace bdris {

Waveform smf_init(const VectorXd& h_mags, const VectorXd& h_phases, double beta, double p_t) {
  if (h_mags.size() != h_phases.size()) throw Error("smf_init: length mismatch");
  if ((h_mags.array() < 0.0).any()) throw Error("smf_init: magnitudes must be nonnegative");
  if (!(h_mags.maxCoeff() > 0.0)) throw Error("smf_init: all-zero channel");
  // Normalize before exponentiation so large beta cannot underflow.
  const VectorXd shaped = (h_mags / h_mags.maxCoeff()).array().pow(beta).matrix();
  const VectorXd amps = shaped * std::sqrt(2.0 * p_t / shaped.squaredNorm());
  return Waveform::from_polar(amps, -h_phases, p_t);
}

VectorXd idc_gradient(const VectorXd& s_bars, const VectorXd& h_bars, const RectennaParams& params) {
  const Index n = s_bars.size();
  if (h_bars.size() != n) throw Error("idc_gradient: length mismatch");
  const VectorXd x = s_bars.cwiseProduct(h_bars);
  const double total = x.squaredNorm();

  VectorXd g(n);
  for (Index m = 0; m < n; ++m) {
    const double self_cubic = x(m) * x(m) * x(m);
    const double cross_power = 2.0 * (total - x(m) * x(m)) * x(m);

    double mirrored = 0.0;
    for (Index a = 0; a < n; ++a) {
      const Index b = 2 * m - a;
      if (b < 0 || b >= n || a == b) continue;
      mirrored += x(a) * x(b) * x(m);
    }

    double general = 0.0;
    for (Index n1 = 0; n1 < n; ++n1) {
      if (n1 == m) continue;
      for (Index n2 = 0; n2 < n; ++n2) {
        const Index n3 = m + n1 - n2;
        if (n3 < 0 || n3 >= n || n1 == n2 || n1 == n3) continue;
        general += x(n1) * x(n2) * x(n3);
      }
    }

    g(m) = params.k2 * h_bars(m) * x(m) +
           1.5 * params.k4 * h_bars(m) * (self_cubic + cross_power + mirrored + general);
  }
  return g;
}

VectorXd sca_subproblem(const VectorXd& g, double p_t) {
  if ((g.array() < 0.0).any()) throw Error("sca_subproblem: gradient must be nonnegative");
  const double norm = g.norm();
  if (!(norm > 0.0)) throw Error("sca_subproblem: zero gradient");
  return g * (std::sqrt(2.0 * p_t) / norm);
}

ScaTrace sca_waveform(const VectorXcd& chan_gains, const ScenarioConfig& config,
                      const RectennaParams& params, const std::optional<Waveform>& initial) {
  const VectorXd h_bars = chan_gains.cwiseAbs();
  if (!(h_bars.maxCoeff() > 0.0)) throw Error("sca_waveform: all-zero channel");
  const double p_t = config.transmit_power_watts;

  VectorXd h_phases(chan_gains.size());
  for (Index n = 0; n < h_phases.size(); ++n) h_phases(n) = std::arg(chan_gains(n));

  Waveform current = smf_init(h_bars, h_phases, config.smf_exponent, p_t);
  if (initial) {
    if (initial->size() != chan_gains.size()) throw Error("sca_waveform: initial waveform size mismatch");
    current = phase_align(chan_gains, initial->amplitudes(), p_t);
  }

  ScaTrace trace;
  double xi_prev = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= config.sca_max_iterations; ++it) {
    const VectorXd g = idc_gradient(current.amplitudes(), h_bars, params);
    const VectorXd next = sca_subproblem(g, p_t);
    const double xi = -g.dot(next);
    current = phase_align(chan_gains, next, p_t);
    trace.iterations.push_back({it, xi, idc_frequency_domain(current.weights(), chan_gains, params)});
    if (std::abs(1.0 - xi_prev / xi) <= config.sca_tolerance) {
      trace.converged = true;
      break;
    }
    xi_prev = xi;
  }
  trace.waveform = current;
  trace.idc = trace.iterations.back().idc;
  return trace;
}

void write_trace_csv(std::ostream& os, const ScaTrace& trace) {
  os << "iteration,xi1,idc\n" << std::setprecision(17);
  for (const auto& it : trace.iterations) os << it.iteration << ',' << it.xi1 << ',' << it.idc << '\n';
}

}  // namespace bdris
