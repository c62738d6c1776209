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

#include "bdris/model.hpp"

#include <cmath>
#include <string>

namespace bdris {

std::string to_string(ChannelModel model) {
  return model == ChannelModel::kLos ? "los" : "rician";
}

ChannelModel channel_model_from_string(const std::string& name) {
  if (name == "los") return ChannelModel::kLos;
  if (name == "rician") return ChannelModel::kRician;
  throw Error("unknown channel model '" + name + "' (expected los|rician)");
}

VectorXd ScenarioConfig::subcarrier_freqs() const {
  VectorXd f(num_subcarriers);
  const double df = spacing_hz();
  for (int n = 0; n < num_subcarriers; ++n) f(n) = carrier_freq_hz + n * df;
  return f;
}

void ScenarioConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(std::string("invalid config: ") + what);
  };
  require(num_subcarriers >= 1, "num_subcarriers must be >= 1");
  require(num_ris_elements >= 1, "num_ris_elements must be >= 1");
  require(num_delay_taps >= 1, "num_delay_taps must be >= 1");
  require(carrier_freq_hz > 0.0, "carrier_freq_hz must be positive");
  require(spacing_hz() > 0.0, "subcarrier_spacing_hz must be positive");
  require(transmit_power_watts > 0.0, "transmit_power_watts must be positive");
  require(pathloss_exponent > 0.0, "pathloss_exponent must be positive");
  require(dist_incident_m > 0.0 && dist_reflect_m > 0.0, "distances must be positive");
  require(std::isfinite(pathloss_ref_db) && std::isfinite(rician_factor_db),
          "dB quantities must be finite");
  require(smf_exponent >= 0.0, "smf_exponent must be nonnegative");
  require(sca_tolerance > 0.0, "sca_tolerance must be positive");
  require(randomization_draws_inner >= 1 && randomization_draws_final >= 1,
          "randomization draw counts must be >= 1");
  require(sdp_feas_tol > 0.0 && sdp_psd_tol > 0.0 && sdp_rel_tol > 0.0, "sdp tolerances must be positive");
  require(sdp_algorithm == "interior-point" || sdp_algorithm == "admm",
          "sdp_algorithm must be interior-point or admm");
  require(monte_carlo_runs >= 1, "monte_carlo_runs must be >= 1");
  require(sca_max_iterations >= 1 && outer_max_iterations >= 1 && inner_max_iterations >= 1 &&
              sdp_max_iterations >= 1,
          "iteration caps must be >= 1");
}

double dbm_to_watts(double p_dbm) { return std::pow(10.0, (p_dbm - 30.0) / 10.0); }

Waveform::Waveform(VectorXcd weights, double budget_watts)
    : weights_(std::move(weights)), budget_(budget_watts) {
  if (!(budget_ > 0.0)) throw Error("waveform budget must be positive");
  if (!weights_.allFinite()) throw Error("waveform weights must be finite");
  if (power_watts() > budget_ * (1.0 + kBudgetSlack))
    throw Error("waveform violates the transmit power budget");
}

Waveform Waveform::from_polar(const VectorXd& amplitudes, const VectorXd& phases,
                              double budget_watts) {
  if (amplitudes.size() != phases.size()) throw Error("amplitude/phase length mismatch");
  if ((amplitudes.array() < 0.0).any()) throw Error("waveform amplitudes must be nonnegative");
  VectorXcd w(amplitudes.size());
  for (Index n = 0; n < w.size(); ++n) w(n) = std::polar(amplitudes(n), phases(n));
  return Waveform(std::move(w), budget_watts);
}

Waveform phase_align(const VectorXcd& channel_gains, const VectorXd& amplitudes,
                     double budget_watts) {
  if (channel_gains.size() != amplitudes.size())
    throw Error("phase_align: channel/amplitude length mismatch");
  VectorXd phases(channel_gains.size());
  for (Index n = 0; n < phases.size(); ++n) phases(n) = -std::arg(channel_gains(n));
  return Waveform::from_polar(amplitudes, phases, budget_watts);
}

void ChannelRealization::validate() const {
  if (h_incident.rows() != h_reflect.rows() || h_incident.cols() != h_reflect.cols())
    throw Error("channel hop shapes differ");
  if (freqs_hz.size() != h_incident.rows()) throw Error("frequency grid length mismatch");
  if (!h_incident.allFinite() || !h_reflect.allFinite()) throw Error("channel has non-finite entries");
  for (Index n = 1; n < freqs_hz.size(); ++n)
    if (!(freqs_hz(n) > freqs_hz(n - 1))) throw Error("frequencies must be strictly increasing");
}

RelaxedTheta::RelaxedTheta(VectorXcd theta, Index num_elements)
    : theta_(std::move(theta)), m_(num_elements) {
  if (m_ < 1 || theta_.size() != half_triangle_size(m_))
    throw Error("relaxed theta length must be M(M+1)/2");
}

MatrixXcd RelaxedTheta::assemble() const {
  MatrixXcd full(m_, m_);
  for (Index c = 0; c < m_; ++c)
    for (Index r = 0; r <= c; ++r) {
      const cd v = theta_(half_triangle_index(r, c));
      full(r, c) = v;
      full(c, r) = v;
    }
  return full;
}

ScatteringMatrix::ScatteringMatrix(const RelaxedTheta& theta)
    : half_(theta), full_(theta.assemble()) {}

ScatteringMatrix ScatteringMatrix::from_symmetric(const MatrixXcd& theta) {
  if (theta.rows() != theta.cols() || theta.rows() < 1) throw Error("scattering matrix must be square");
  const double scale = std::max(1.0, theta.norm());
  if ((theta - theta.transpose()).norm() > 1e-12 * scale)
    throw Error("scattering matrix is not symmetric");
  const Index m = theta.rows();
  VectorXcd v(half_triangle_size(m));
  for (Index c = 0; c < m; ++c)
    for (Index r = 0; r <= c; ++r) v(half_triangle_index(r, c)) = theta(r, c);
  return ScatteringMatrix(RelaxedTheta(std::move(v), m));
}

ScatteringMatrix ScatteringMatrix::diagonal(const VectorXcd& phases) {
  const Index m = phases.size();
  VectorXcd v = VectorXcd::Zero(half_triangle_size(m));
  for (Index i = 0; i < m; ++i) v(half_triangle_index(i, i)) = phases(i);
  return ScatteringMatrix(RelaxedTheta(std::move(v), m));
}

double ScatteringMatrix::unitarity_residual() const {
  const Index m = full_.rows();
  return (full_.adjoint() * full_ - MatrixXcd::Identity(m, m)).norm();
}

bool ScatteringMatrix::is_feasible() const {
  return symmetry_residual() == 0.0 && unitarity_residual() <= kUnitarityTol;
}

VectorXcd ScatteringMatrix::cascade_gains(const ChannelRealization& chan) const {
  if (chan.num_elements() != num_elements()) throw Error("channel/RIS size mismatch");
  // Row n of h_reflect is h_{R,n}^T; (h_R^T Theta h_I) over all n at once.
  return ((chan.h_reflect * full_).array() * chan.h_incident.array()).rowwise().sum();
}

}  // namespace bdris
