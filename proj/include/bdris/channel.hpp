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

#include <cstdint>

#include "bdris/model.hpp"

namespace bdris {

/// Power-delay profile of the NLoS component. Powers sum to one.
struct TapProfile {
  VectorXd powers;
  VectorXd delays_s;

  Index num_taps() const { return powers.size(); }
};

/// Uniform random powers normalized to unit sum, delays on the
/// inverse-bandwidth grid (l - 1) / (N * spacing).
TapProfile make_tap_profile(const ScenarioConfig& config, Rng& rng);

/// Far-field LoS channel for both hops. Each hop is a half-wavelength
/// uniform linear array seen under a random angle; entries have unit
/// magnitude and no pathloss.
ChannelRealization gen_los(const ScenarioConfig& config, std::uint64_t seed);

/// Rician mixture of gen_los and an L-tap Rayleigh component, with the
/// Rician factor taken from config.rician_factor_db.
ChannelRealization gen_rician(const ScenarioConfig& config, std::uint64_t seed);

/// Dispatches on config.channel_model.
ChannelRealization gen_channel(const ScenarioConfig& config, std::uint64_t seed);

/// Amplitude scale sqrt(L_0^-1 d^-exponent) of one hop.
double pathloss_amplitude(const ScenarioConfig& config, double distance_m);

/// Rejects a realization that already carries pathloss.
ChannelRealization apply_pathloss(ChannelRealization chan, const ScenarioConfig& config);

}  // namespace bdris
