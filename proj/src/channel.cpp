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

#include "bdris/channel.hpp"

#include <cmath>
#include <limits>

namespace bdris {

namespace {

// Extra path length of element m relative to element 0.
VectorXd ula_offsets(Index m, double wavelength, double angle) {
  VectorXd delta(m);
  for (Index i = 0; i < m; ++i) delta(i) = i * 0.5 * wavelength * std::sin(angle);
  return delta;
}

MatrixXcd los_hop(const VectorXd& freqs, double distance, const VectorXd& offsets) {
  MatrixXcd h(freqs.size(), offsets.size());
  for (Index n = 0; n < freqs.size(); ++n)
    for (Index m = 0; m < offsets.size(); ++m)
      h(n, m) = unit_phasor(-2.0 * kPi * freqs(n) * (distance + offsets(m)) / kSpeedOfLight);
  return h;
}

MatrixXcd nlos_hop(const VectorXd& freqs, Index m, const TapProfile& taps, Rng& rng) {
  MatrixXcd gains(taps.num_taps(), m);
  for (Index l = 0; l < taps.num_taps(); ++l)
    for (Index i = 0; i < m; ++i) gains(l, i) = std::sqrt(taps.powers(l)) * complex_normal(rng);
  MatrixXcd response(freqs.size(), taps.num_taps());
  for (Index n = 0; n < freqs.size(); ++n)
    for (Index l = 0; l < taps.num_taps(); ++l)
      response(n, l) = unit_phasor(-2.0 * kPi * freqs(n) * taps.delays_s(l));
  return response * gains;
}

}  // namespace

TapProfile make_tap_profile(const ScenarioConfig& config, Rng& rng) {
  const Index taps = config.num_delay_taps;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  TapProfile p;
  p.powers.resize(taps);
  for (Index l = 0; l < taps; ++l) p.powers(l) = u(rng);
  p.powers /= p.powers.sum();
  const double bandwidth = config.num_subcarriers * config.spacing_hz();
  p.delays_s = VectorXd::LinSpaced(taps, 0.0, static_cast<double>(taps - 1)) / bandwidth;
  return p;
}

ChannelRealization gen_los(const ScenarioConfig& config, std::uint64_t seed) {
  config.validate();
  Rng rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  const double lambda = kSpeedOfLight / config.carrier_freq_hz;
  const Index m = config.num_ris_elements;

  ChannelRealization chan;
  chan.freqs_hz = config.subcarrier_freqs();
  const double psi_incident = angle(rng);
  const double psi_reflect = angle(rng);
  chan.h_incident = los_hop(chan.freqs_hz, config.dist_incident_m, ula_offsets(m, lambda, psi_incident));
  chan.h_reflect = los_hop(chan.freqs_hz, config.dist_reflect_m, ula_offsets(m, lambda, psi_reflect));
  chan.seed = seed;
  chan.model = ChannelModel::kLos;
  chan.rician_factor_db = std::numeric_limits<double>::infinity();
  return chan;
}

ChannelRealization gen_rician(const ScenarioConfig& config, std::uint64_t seed) {
  ChannelRealization chan = gen_los(config, seed);
  Rng rng(mix_seed(seed, 1));
  const TapProfile taps_incident = make_tap_profile(config, rng);
  const TapProfile taps_reflect = make_tap_profile(config, rng);
  const Index m = config.num_ris_elements;
  const MatrixXcd nlos_incident = nlos_hop(chan.freqs_hz, m, taps_incident, rng);
  const MatrixXcd nlos_reflect = nlos_hop(chan.freqs_hz, m, taps_reflect, rng);

  const double kappa = std::pow(10.0, config.rician_factor_db / 10.0);
  const double w_los = std::sqrt(kappa / (kappa + 1.0));
  const double w_nlos = std::sqrt(1.0 / (kappa + 1.0));
  chan.h_incident = w_los * chan.h_incident + w_nlos * nlos_incident;
  chan.h_reflect = w_los * chan.h_reflect + w_nlos * nlos_reflect;
  chan.model = ChannelModel::kRician;
  chan.rician_factor_db = config.rician_factor_db;
  return chan;
}

ChannelRealization gen_channel(const ScenarioConfig& config, std::uint64_t seed) {
  return config.channel_model == ChannelModel::kLos ? gen_los(config, seed)
                                                    : gen_rician(config, seed);
}

double pathloss_amplitude(const ScenarioConfig& config, double distance_m) {
  return std::sqrt(std::pow(10.0, -config.pathloss_ref_db / 10.0) *
                   std::pow(distance_m, -config.pathloss_exponent));
}

ChannelRealization apply_pathloss(ChannelRealization chan, const ScenarioConfig& config) {
  if (chan.pathloss_applied) throw Error("pathloss already applied to this realization");
  chan.h_incident *= pathloss_amplitude(config, config.dist_incident_m);
  chan.h_reflect *= pathloss_amplitude(config, config.dist_reflect_m);
  chan.pathloss_applied = true;
  return chan;
}

}  // namespace bdris
