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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bdris/model.hpp"
#include "bdris/rectenna.hpp"
#include "bdris/ris_opt.hpp"
#include "bdris/waveform_opt.hpp"

namespace bdris {

/// - kBdris: fully-connected surface, joint optimization.
/// - kDris: diagonal surface, joint optimization.
/// - kWaveformOnly: Theta fixed to the identity, waveform optimized by SCA.
enum class Method { kBdris, kDris, kWaveformOnly };

std::string to_string(Method method);
Method method_from_string(const std::string& name);

enum class SweepAxis { kM, kN, kKappa };

std::string to_string(SweepAxis axis);
SweepAxis sweep_axis_from_string(const std::string& name);

/// One (config, seed, method) run. A failed run keeps its error message and
/// has no result.
struct ExperimentRecord {
  ScenarioConfig config;
  std::string config_hash;
  std::uint64_t seed = 0;
  Method method = Method::kBdris;
  double idc = 0.0;
  double wall_time_s = 0.0;
  std::optional<BeamformingResult> result;
  std::optional<ScaTrace> sca_trace;
  std::string error;

  bool ok() const { return error.empty(); }
  nlohmann::json to_json() const;
};

/// Draws the channel for `seed`, applies pathloss and runs `method`.
/// Exceptions from the solvers are captured in the record.
ExperimentRecord run_single(const ScenarioConfig& config, Method method, std::uint64_t seed,
                            const RectennaParams& params = {});

/// Per-realization seed. Identical across methods and sweep points, so
/// every point is evaluated on common random channels.
std::uint64_t realization_seed(std::uint64_t base_seed, int index);

/// Copy of `base` with the swept field set to `value`.
ScenarioConfig apply_axis(const ScenarioConfig& base, SweepAxis axis, double value);

struct SweepPoint {
  double value = 0.0;
  Method method = Method::kBdris;
  double mean_idc = 0.0;
  double stderr_idc = 0.0;
  int runs = 0;
  int failures = 0;
};

struct SweepResult {
  SweepAxis axis = SweepAxis::kM;
  std::vector<SweepPoint> points;
  std::vector<ExperimentRecord> records;
};

struct SweepOptions {
  SweepAxis axis = SweepAxis::kM;
  std::vector<double> values;
  std::vector<Method> methods{Method::kBdris, Method::kDris};
  /// Falls back to config.monte_carlo_runs when unset.
  std::optional<int> runs;
  /// 0 selects std::thread::hardware_concurrency().
  unsigned workers = 0;
};

/// Runs every (value, method, realization) triple. Mean and standard error
/// are taken over successful runs.
SweepResult run_sweep(const ScenarioConfig& base, const SweepOptions& options,
                      const RectennaParams& params = {});

/// Writes summary.csv, records/<i>.json and, when `traces` is set,
/// traces/<i>.csv with the per-iteration DC current.
void write_sweep_outputs(const std::filesystem::path& dir, const SweepResult& sweep, bool traces);

/// Sample mean and standard error of the mean; stderr is zero for n < 2.
std::pair<double, double> mean_and_stderr(const std::vector<double>& xs);

}  // namespace bdris
