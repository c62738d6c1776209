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

// Batch driver: single runs and Monte Carlo sweeps.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "bdris/harness.hpp"
#include "bdris/serialize.hpp"

namespace {

std::vector<double> parse_values(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw bdris::Error("bad sweep value '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<double> default_values(bdris::SweepAxis axis) {
  switch (axis) {
    case bdris::SweepAxis::kM: return {2, 4, 8, 12, 16};
    case bdris::SweepAxis::kN: return {1, 2, 4, 8};
    case bdris::SweepAxis::kKappa: return {-10, 0, 10};
  }
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint waveform and BD-RIS scattering-matrix optimization for wireless power transfer"};

  std::string config_path, method_name, sweep_name, values_csv, channel_name, out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<int> runs;
  unsigned workers = 0;
  bool traces = false;

  app.add_option("--config", config_path, "JSON scenario config")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "base seed (overrides rng_seed)");
  app.add_option("--method", method_name, "bdris | dris | waveform-only (default: bdris and dris)");
  auto* sweep_opt = app.add_option("--sweep", sweep_name, "sweep axis: m | n | kappa");
  app.add_option("--values", values_csv, "comma-separated sweep values")->needs(sweep_opt);
  app.add_option("--runs", runs, "realizations per point (overrides monte_carlo_runs)")->check(CLI::PositiveNumber);
  app.add_option("--channel", channel_name, "los | rician (overrides channel_model)");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--workers", workers, "worker threads (default: all cores)");
  app.add_flag("--trace", traces, "write per-iteration CSVs");
  CLI11_PARSE(app, argc, argv);

  try {
    bdris::ScenarioConfig config;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      config = bdris::config_from_json(nlohmann::json::parse(in));
    }
    if (seed) config.rng_seed = *seed;
    if (!channel_name.empty()) config.channel_model = bdris::channel_model_from_string(channel_name);
    config.validate();

    bdris::SweepOptions opts;
    opts.runs = runs;
    opts.workers = workers;
    if (!method_name.empty()) opts.methods = {bdris::method_from_string(method_name)};
    if (!sweep_name.empty()) {
      opts.axis = bdris::sweep_axis_from_string(sweep_name);
      opts.values = values_csv.empty() ? default_values(opts.axis) : parse_values(values_csv);
    } else {
      opts.axis = bdris::SweepAxis::kM;
      opts.values = {static_cast<double>(config.num_ris_elements)};
    }

    const bdris::SweepResult sweep = bdris::run_sweep(config, opts);
    bdris::write_sweep_outputs(out_dir, sweep, traces);

    int failures = 0;
    std::printf("%-8s %-14s %-24s %-24s %s\n", bdris::to_string(opts.axis).c_str(), "method", "mean_idc",
                "stderr", "runs");
    for (const auto& p : sweep.points) {
      std::printf("%-8g %-14s %-24.17g %-24.17g %d\n", p.value, bdris::to_string(p.method).c_str(), p.mean_idc,
                  p.stderr_idc, p.runs);
      failures += p.failures;
    }
    if (failures > 0) {
      std::fprintf(stderr, "%d run(s) failed; see %s/records\n", failures, out_dir.c_str());
      return 2;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
