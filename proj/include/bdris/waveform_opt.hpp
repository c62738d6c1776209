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

#include <optional>
#include <ostream>
#include <vector>

#include "bdris/model.hpp"
#include "bdris/rectenna.hpp"

namespace bdris {

struct ScaIteration {
  int iteration = 0;
  double xi1 = 0.0;  ///< surrogate objective -sum g_n s_n at the new point
  double idc = 0.0;  ///< true DC current at the new point
};

/// Convergence record of the SCA waveform loop.
struct ScaTrace {
  std::vector<ScaIteration> iterations;
  bool converged = false;
  Waveform waveform{VectorXcd::Zero(1), 1.0};
  double idc = 0.0;
};

/// Scaled matched filter: amplitude proportional to |h_n|^beta, phase
/// -arg h_n, total power equal to p_t.
Waveform smf_init(const VectorXd& h_mags, const VectorXd& h_phases, double beta, double p_t);

/// Gradient of the phase-aligned DC current with respect to the amplitudes.
///
/// Evaluated term by term: the self-cubic term, the cross-power term, the
/// quadruples with n2 + n3 = 2n (n2 != n3) and the general quadruples
/// -n1 + n2 + n3 = n with n1 distinct from n, n2 and n3.
VectorXd idc_gradient(const VectorXd& s_bars, const VectorXd& h_bars, const RectennaParams& params);

/// Maximizer of sum g_n s_n over (1/2) sum s_n^2 <= p_t, i.e.
/// sqrt(2 p_t) g / |g|.
VectorXd sca_subproblem(const VectorXd& g, double p_t);

/// Successive convex approximation over the amplitudes for fixed cascade
/// gains. Starts from the scaled matched filter unless `initial` is given.
/// Hitting config.sca_max_iterations returns the last iterate with
/// converged == false.
ScaTrace sca_waveform(const VectorXcd& chan_gains, const ScenarioConfig& config,
                      const RectennaParams& params,
                      const std::optional<Waveform>& initial = std::nullopt);

/// CSV with header iteration,xi1,idc.
void write_trace_csv(std::ostream& os, const ScaTrace& trace);

}  // namespace bdris
