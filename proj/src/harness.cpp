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

#include "bdris/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <thread>

#include "bdris/channel.hpp"
#include "bdris/serialize.hpp"

namespace bdris {

std::string to_string(Method method) {
  switch (method) {
    case Method::kBdris: return "bdris";
    case Method::kDris: return "dris";
    case Method::kWaveformOnly: return "waveform-only";
  }
  return "unknown";
}

Method method_from_string(const std::string& name) {
  if (name == "bdris") return Method::kBdris;
  if (name == "dris") return Method::kDris;
  if (name == "waveform-only") return Method::kWaveformOnly;
  throw Error("unknown method '" + name + "' (expected bdris, dris or waveform-only)");
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kM: return "m";
    case SweepAxis::kN: return "n";
    case SweepAxis::kKappa: return "kappa";
  }
  return "unknown";
}

SweepAxis sweep_axis_from_string(const std::string& name) {
  if (name == "m") return SweepAxis::kM;
  if (name == "n") return SweepAxis::kN;
  if (name == "kappa") return SweepAxis::kKappa;
  throw Error("unknown sweep axis '" + name + "' (expected m, n or kappa)");
}

nlohmann::json ExperimentRecord::to_json() const {
  nlohmann::json j;
  j["config"] = config_to_json(config);
  j["config_hash"] = config_hash;
  j["seed"] = seed;
  j["method"] = to_string(method);
  j["wall_time_s"] = wall_time_s;
  if (!ok()) {
    j["error"] = error;
    j["idc"] = nullptr;
    return j;
  }
  j["idc"] = idc;
  if (result) j["result"] = result_to_json(*result);
  if (sca_trace) {
    nlohmann::json its = nlohmann::json::array();
    for (const auto& it : sca_trace->iterations)
      its.push_back({{"iteration", it.iteration}, {"xi1", it.xi1}, {"idc", it.idc}});
    j["sca_trace"] = {{"converged", sca_trace->converged},
                      {"iterations", its},
                      {"waveform", vector_to_json(sca_trace->waveform.weights())}};
  }
  return j;
}

ExperimentRecord run_single(const ScenarioConfig& config, Method method, std::uint64_t seed,
                            const RectennaParams& params) {
  ExperimentRecord rec;
  rec.config = config;
  rec.seed = seed;
  rec.method = method;
  const auto start = std::chrono::steady_clock::now();
  try {
    config.validate();
    rec.config_hash = config_hash(config);
    const ChannelRealization chan = apply_pathloss(gen_channel(config, seed), config);
    switch (method) {
      case Method::kBdris:
        rec.result = optimize_bdris(chan, config, params);
        rec.idc = rec.result->idc_final;
        break;
      case Method::kDris:
        rec.result = optimize_dris(chan, config, params);
        rec.idc = rec.result->idc_final;
        break;
      case Method::kWaveformOnly: {
        const VectorXcd gains =
            ScatteringMatrix::diagonal(VectorXcd::Ones(config.num_ris_elements)).cascade_gains(chan);
        rec.sca_trace = sca_waveform(gains, config, params);
        rec.idc = rec.sca_trace->idc;
        break;
      }
    }
  } catch (const std::exception& e) {
    rec.error = e.what();
    rec.result.reset();
    rec.sca_trace.reset();
    rec.idc = 0.0;
  }
  rec.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

std::uint64_t realization_seed(std::uint64_t base_seed, int index) {
  return mix_seed(base_seed, static_cast<std::uint64_t>(index));
}

ScenarioConfig apply_axis(const ScenarioConfig& base, SweepAxis axis, double value) {
  ScenarioConfig c = base;
  auto as_count = [&](const char* what) {
    const double r = std::round(value);
    if (std::abs(r - value) > 1e-9 || r < 1.0)
      throw Error(std::string(what) + " sweep values must be positive integers");
    return static_cast<int>(r);
  };
  switch (axis) {
    case SweepAxis::kM: c.num_ris_elements = as_count("m"); break;
    case SweepAxis::kN: c.num_subcarriers = as_count("n"); break;
    case SweepAxis::kKappa: c.rician_factor_db = value; break;
  }
  c.validate();
  return c;
}

std::pair<double, double> mean_and_stderr(const std::vector<double>& xs) {
  if (xs.empty()) return {0.0, 0.0};
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

SweepResult run_sweep(const ScenarioConfig& base, const SweepOptions& options, const RectennaParams& params) {
  const int runs = options.runs.value_or(base.monte_carlo_runs);
  if (runs < 1) throw Error("sweep needs at least one run per point");
  if (options.values.empty()) throw Error("sweep needs at least one value");
  if (options.methods.empty()) throw Error("sweep needs at least one method");

  struct Task {
    ScenarioConfig config;
    Method method;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (double v : options.values) {
    const ScenarioConfig point = apply_axis(base, options.axis, v);
    for (Method m : options.methods)
      for (int r = 0; r < runs; ++r) tasks.push_back({point, m, realization_seed(base.rng_seed, r)});
  }

  SweepResult out;
  out.axis = options.axis;
  out.records.resize(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++)
      out.records[i] = run_single(tasks[i].config, tasks[i].method, tasks[i].seed, params);
  };
  unsigned workers = options.workers ? options.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(tasks.size()));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::size_t i = 0;
  for (double v : options.values)
    for (Method m : options.methods) {
      std::vector<double> idcs;
      SweepPoint p;
      p.value = v;
      p.method = m;
      for (int r = 0; r < runs; ++r, ++i) {
        if (out.records[i].ok())
          idcs.push_back(out.records[i].idc);
        else
          ++p.failures;
      }
      std::tie(p.mean_idc, p.stderr_idc) = mean_and_stderr(idcs);
      p.runs = static_cast<int>(idcs.size());
      out.points.push_back(p);
    }
  return out;
}

void write_sweep_outputs(const std::filesystem::path& dir, const SweepResult& sweep, bool traces) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "records");
  if (traces) fs::create_directories(dir / "traces");

  std::ofstream summary(dir / "summary.csv");
  if (!summary) throw Error("cannot write " + (dir / "summary.csv").string());
  summary << std::setprecision(17);
  summary << to_string(sweep.axis) << ",method,mean_idc,stderr_idc,runs,failures\n";
  for (const auto& p : sweep.points)
    summary << p.value << ',' << to_string(p.method) << ',' << p.mean_idc << ',' << p.stderr_idc << ','
            << p.runs << ',' << p.failures << '\n';

  for (std::size_t i = 0; i < sweep.records.size(); ++i) {
    const auto& rec = sweep.records[i];
    std::ofstream(dir / "records" / (std::to_string(i) + ".json")) << rec.to_json().dump(2) << '\n';
    if (!traces || !rec.ok()) continue;
    std::ofstream tr(dir / "traces" / (std::to_string(i) + ".csv"));
    tr << std::setprecision(17);
    if (rec.sca_trace) {
      write_trace_csv(tr, *rec.sca_trace);
    } else if (rec.result) {
      tr << "iteration,idc\n";
      for (const auto& [it, idc] : rec.result->outer_trace) tr << it << ',' << idc << '\n';
    }
  }
}

}  // namespace bdris
