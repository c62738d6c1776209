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

#include <string>

#include <nlohmann/json.hpp>

#include "bdris/model.hpp"
#include "bdris/ris_opt.hpp"
#include "bdris/sdp.hpp"

namespace bdris {

using json = nlohmann::json;

/// Complex values are [re, im] pairs.
json complex_to_json(cd v);
cd complex_from_json(const json& j);
json vector_to_json(const VectorXcd& v);
VectorXcd vector_from_json(const json& j);
/// Row-major grid of [re, im] pairs.
json matrix_to_json(const MatrixXcd& m);
MatrixXcd matrix_from_json(const json& j);

/// Every ScenarioConfig field under its snake_case name. Unknown keys are
/// rejected; missing keys keep their defaults.
json config_to_json(const ScenarioConfig& config);
ScenarioConfig config_from_json(const json& j);
/// FNV-1a over the canonical JSON dump, as 16 hex digits.
std::string config_hash(const ScenarioConfig& config);

json channel_to_json(const ChannelRealization& chan);
ChannelRealization channel_from_json(const json& j);

json result_to_json(const BeamformingResult& result);

/// Sparse dump: upper-triangle entries [row, col, re, im] for the objective
/// and each constraint.
json sdp_to_json(const SdpProblem<cd>& prob);
SdpProblem<cd> sdp_from_json(const json& j);

}  // namespace bdris
