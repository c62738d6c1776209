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

#include "bdris/serialize.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <set>

namespace bdris {

json complex_to_json(cd v) { return json::array({v.real(), v.imag()}); }

cd complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw Error("complex value must be an [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

json vector_to_json(const VectorXcd& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

VectorXcd vector_from_json(const json& j) {
  VectorXcd v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = complex_from_json(j[i]);
  return v;
}

json matrix_to_json(const MatrixXcd& m) {
  json out = json::array();
  for (Index r = 0; r < m.rows(); ++r) out.push_back(vector_to_json(m.row(r).transpose()));
  return out;
}

MatrixXcd matrix_from_json(const json& j) {
  if (!j.is_array()) throw Error("matrix must be an array of rows");
  const Index rows = static_cast<Index>(j.size());
  const Index cols = rows > 0 ? static_cast<Index>(j[0].size()) : 0;
  MatrixXcd m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    if (static_cast<Index>(j[r].size()) != cols) throw Error("matrix rows have unequal length");
    m.row(r) = vector_from_json(j[r]).transpose();
  }
  return m;
}

json config_to_json(const ScenarioConfig& c) {
  json j;
  j["carrier_freq_hz"] = c.carrier_freq_hz;
  j["subcarrier_spacing_hz"] = c.spacing_hz();
  j["num_subcarriers"] = c.num_subcarriers;
  j["num_ris_elements"] = c.num_ris_elements;
  j["transmit_power_watts"] = c.transmit_power_watts;
  j["pathloss_ref_db"] = c.pathloss_ref_db;
  j["pathloss_exponent"] = c.pathloss_exponent;
  j["dist_incident_m"] = c.dist_incident_m;
  j["dist_reflect_m"] = c.dist_reflect_m;
  j["rician_factor_db"] = c.rician_factor_db;
  j["num_delay_taps"] = c.num_delay_taps;
  j["smf_exponent"] = c.smf_exponent;
  j["sca_tolerance"] = c.sca_tolerance;
  j["randomization_draws_inner"] = c.randomization_draws_inner;
  j["randomization_draws_final"] = c.randomization_draws_final;
  j["sdp_feas_tol"] = c.sdp_feas_tol;
  j["sdp_psd_tol"] = c.sdp_psd_tol;
  j["sdp_rel_tol"] = c.sdp_rel_tol;
  j["sdp_algorithm"] = c.sdp_algorithm;
  j["rng_seed"] = c.rng_seed;
  j["monte_carlo_runs"] = c.monte_carlo_runs;
  j["channel_model"] = to_string(c.channel_model);
  j["sca_max_iterations"] = c.sca_max_iterations;
  j["outer_max_iterations"] = c.outer_max_iterations;
  j["inner_max_iterations"] = c.inner_max_iterations;
  j["sdp_max_iterations"] = c.sdp_max_iterations;
  return j;
}

ScenarioConfig config_from_json(const json& j) {
  if (!j.is_object()) throw Error("config must be a JSON object");
  ScenarioConfig c;
  const json defaults = config_to_json(c);
  for (const auto& [key, value] : j.items())
    if (!defaults.contains(key)) throw Error("unknown config key '" + key + "'");

  auto read = [&](const char* key, auto& field) {
    if (!j.contains(key)) return;
    try {
      j.at(key).get_to(field);
    } catch (const json::exception& e) {
      throw Error(std::string("config key '") + key + "': " + e.what());
    }
  };
  read("carrier_freq_hz", c.carrier_freq_hz);
  if (j.contains("subcarrier_spacing_hz") && !j["subcarrier_spacing_hz"].is_null())
    c.subcarrier_spacing_hz = j["subcarrier_spacing_hz"].get<double>();
  read("num_subcarriers", c.num_subcarriers);
  read("num_ris_elements", c.num_ris_elements);
  read("transmit_power_watts", c.transmit_power_watts);
  read("pathloss_ref_db", c.pathloss_ref_db);
  read("pathloss_exponent", c.pathloss_exponent);
  read("dist_incident_m", c.dist_incident_m);
  read("dist_reflect_m", c.dist_reflect_m);
  read("rician_factor_db", c.rician_factor_db);
  read("num_delay_taps", c.num_delay_taps);
  read("smf_exponent", c.smf_exponent);
  read("sca_tolerance", c.sca_tolerance);
  read("randomization_draws_inner", c.randomization_draws_inner);
  read("randomization_draws_final", c.randomization_draws_final);
  read("sdp_feas_tol", c.sdp_feas_tol);
  read("sdp_psd_tol", c.sdp_psd_tol);
  read("sdp_rel_tol", c.sdp_rel_tol);
  read("sdp_algorithm", c.sdp_algorithm);
  read("rng_seed", c.rng_seed);
  read("monte_carlo_runs", c.monte_carlo_runs);
  if (j.contains("channel_model")) c.channel_model = channel_model_from_string(j["channel_model"].get<std::string>());
  read("sca_max_iterations", c.sca_max_iterations);
  read("outer_max_iterations", c.outer_max_iterations);
  read("inner_max_iterations", c.inner_max_iterations);
  read("sdp_max_iterations", c.sdp_max_iterations);
  c.validate();
  return c;
}

std::string config_hash(const ScenarioConfig& config) {
  const std::string canonical = config_to_json(config).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json channel_to_json(const ChannelRealization& chan) {
  json j;
  j["num_subcarriers"] = chan.num_subcarriers();
  j["num_ris_elements"] = chan.num_elements();
  j["freqs_hz"] = std::vector<double>(chan.freqs_hz.data(), chan.freqs_hz.data() + chan.freqs_hz.size());
  j["h_incident"] = matrix_to_json(chan.h_incident);
  j["h_reflect"] = matrix_to_json(chan.h_reflect);
  j["seed"] = chan.seed;
  j["model"] = to_string(chan.model);
  // An infinite Rician factor (pure LoS) is written as null.
  j["rician_factor_db"] = std::isfinite(chan.rician_factor_db) ? json(chan.rician_factor_db) : json(nullptr);
  j["pathloss_applied"] = chan.pathloss_applied;
  return j;
}

ChannelRealization channel_from_json(const json& j) {
  ChannelRealization chan;
  const auto freqs = j.at("freqs_hz").get<std::vector<double>>();
  chan.freqs_hz = Eigen::Map<const VectorXd>(freqs.data(), static_cast<Index>(freqs.size()));
  chan.h_incident = matrix_from_json(j.at("h_incident"));
  chan.h_reflect = matrix_from_json(j.at("h_reflect"));
  chan.seed = j.at("seed").get<std::uint64_t>();
  chan.model = channel_model_from_string(j.at("model").get<std::string>());
  chan.rician_factor_db = j.at("rician_factor_db").is_null() ? std::numeric_limits<double>::infinity()
                                                             : j.at("rician_factor_db").get<double>();
  chan.pathloss_applied = j.at("pathloss_applied").get<bool>();
  chan.validate();
  return chan;
}

json result_to_json(const BeamformingResult& r) {
  json j;
  j["architecture"] = r.architecture == RisArchitecture::kDiagonal ? "diagonal" : "fully_connected";
  j["idc_final"] = r.idc_final;
  j["idc_pre_projection"] = r.idc_pre_projection;
  j["converged"] = r.converged;
  j["sdp_solves"] = r.sdp_solves;
  j["sdp_nonconverged"] = r.sdp_nonconverged;
  j["sca_nonconverged"] = r.sca_nonconverged;
  json trace = json::array();
  for (const auto& [it, idc] : r.outer_trace) trace.push_back({{"iteration", it}, {"idc", idc}});
  j["outer_trace"] = trace;
  j["sdr_rank_history"] = r.sdr_rank_history;
  j["theta_final"] = matrix_to_json(r.theta_final.matrix());
  j["waveform_final"] = vector_to_json(r.waveform_final.weights());
  j["symmetry_residual"] = r.theta_final.symmetry_residual();
  j["unitarity_residual"] = r.theta_final.unitarity_residual();
  return j;
}

namespace {

json sparse_entries(const Eigen::SparseMatrix<cd>& a) {
  json out = json::array();
  for (Index k = 0; k < a.outerSize(); ++k)
    for (Eigen::SparseMatrix<cd>::InnerIterator it(a, k); it; ++it)
      if (it.row() <= it.col() && it.value() != cd(0.0))
        out.push_back({it.row(), it.col(), it.value().real(), it.value().imag()});
  return out;
}

Eigen::SparseMatrix<cd> sparse_from_entries(const json& entries, Index dim) {
  std::vector<Eigen::Triplet<cd>> t;
  for (const auto& e : entries) {
    const Index r = e.at(0).get<Index>(), c = e.at(1).get<Index>();
    if (r < 0 || c < 0 || r >= dim || c >= dim || r > c) throw Error("sdp dump: bad entry index");
    const cd v(e.at(2).get<double>(), e.at(3).get<double>());
    t.emplace_back(r, c, v);
    if (r != c) t.emplace_back(c, r, std::conj(v));
  }
  Eigen::SparseMatrix<cd> a(dim, dim);
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

}  // namespace

json sdp_to_json(const SdpProblem<cd>& prob) {
  json j;
  j["dim"] = prob.dim;
  j["objective"] = sparse_entries(prob.objective.sparseView());
  json cons = json::array();
  for (const auto& c : prob.constraints) cons.push_back({{"b", c.b}, {"entries", sparse_entries(c.a)}});
  j["constraints"] = cons;
  j["tolerances"] = {{"feas", prob.tol.feas},
                     {"psd", prob.tol.psd},
                     {"rel_objective", prob.tol.rel_objective},
                     {"max_iterations", prob.tol.max_iterations}};
  return j;
}

SdpProblem<cd> sdp_from_json(const json& j) {
  SdpProblem<cd> prob;
  prob.dim = j.at("dim").get<Index>();
  prob.objective = MatrixXcd(sparse_from_entries(j.at("objective"), prob.dim));
  for (const auto& c : j.at("constraints"))
    prob.constraints.push_back({sparse_from_entries(c.at("entries"), prob.dim), c.at("b").get<double>()});
  if (j.contains("tolerances")) {
    const auto& t = j["tolerances"];
    prob.tol.feas = t.value("feas", prob.tol.feas);
    prob.tol.psd = t.value("psd", prob.tol.psd);
    prob.tol.rel_objective = t.value("rel_objective", prob.tol.rel_objective);
    prob.tol.max_iterations = t.value("max_iterations", prob.tol.max_iterations);
  }
  prob.validate();
  return prob;
}

}  // namespace bdris
