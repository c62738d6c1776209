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
#include <optional>
#include <stdexcept>
#include <string>

#include "bdris/linalg.hpp"

namespace bdris {

/// Base class for every error raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ChannelModel { kLos, kRician };

std::string to_string(ChannelModel model);
ChannelModel channel_model_from_string(const std::string& name);

/// All physical and algorithmic parameters of one experiment.
///
/// The pathloss exponent and the Rician factor are distinct fields; the
/// usual notation reuses one symbol for both.
struct ScenarioConfig {
  double carrier_freq_hz = 2.4e9;
  /// Unset selects a 10 MHz total band split evenly over the subcarriers.
  std::optional<double> subcarrier_spacing_hz;
  int num_subcarriers = 1;
  int num_ris_elements = 4;
  double transmit_power_watts = 100.0;
  double pathloss_ref_db = 40.0;
  double pathloss_exponent = 2.0;
  double dist_incident_m = 2.0;
  double dist_reflect_m = 2.0;
  double rician_factor_db = 0.0;
  int num_delay_taps = 18;
  double smf_exponent = 3.0;
  double sca_tolerance = 1e-4;
  int randomization_draws_inner = 100;
  int randomization_draws_final = 1000;
  double sdp_feas_tol = 1e-7;
  double sdp_psd_tol = 1e-8;
  /// Relative dual-residual and gap tolerance of the SDPs inside the
  /// alternation.
  double sdp_rel_tol = 1e-6;
  /// "interior-point" or "admm".
  std::string sdp_algorithm = "interior-point";
  std::uint64_t rng_seed = 1;
  int monte_carlo_runs = 50;

  ChannelModel channel_model = ChannelModel::kRician;
  int sca_max_iterations = 500;
  int outer_max_iterations = 50;
  int inner_max_iterations = 30;
  int sdp_max_iterations = 50000;

  double spacing_hz() const {
    return subcarrier_spacing_hz ? *subcarrier_spacing_hz : 10e6 / num_subcarriers;
  }
  /// f_n = f_c + (n - 1) * spacing, n = 1..N.
  VectorXd subcarrier_freqs() const;

  /// Throws Error when any invariant is violated.
  void validate() const;
};

double dbm_to_watts(double p_dbm);

/// Per-subcarrier complex weights under a transmit power budget
/// (1/2) sum |s_n|^2 <= P_T.
class Waveform {
 public:
  static constexpr double kBudgetSlack = 1e-9;

  Waveform(VectorXcd weights, double budget_watts);
  /// Rejects negative amplitudes.
  static Waveform from_polar(const VectorXd& amplitudes, const VectorXd& phases,
                             double budget_watts);

  const VectorXcd& weights() const { return weights_; }
  VectorXd amplitudes() const { return weights_.cwiseAbs(); }
  VectorXd phases() const { return weights_.unaryExpr([](cd w) { return std::arg(w); }).real(); }
  double budget_watts() const { return budget_; }
  double power_watts() const { return 0.5 * weights_.squaredNorm(); }
  Index size() const { return weights_.size(); }

 private:
  VectorXcd weights_;
  double budget_;
};

/// s_n = amplitude_n * exp(-j arg h_n), so every s_n h_n is real and
/// nonnegative.
Waveform phase_align(const VectorXcd& channel_gains, const VectorXd& amplitudes,
                     double budget_watts);

/// Per-subcarrier incident and reflective channels. Row n of each matrix is
/// the transposed channel vector at subcarrier n.
struct ChannelRealization {
  MatrixXcd h_incident;
  MatrixXcd h_reflect;
  VectorXd freqs_hz;
  std::uint64_t seed = 0;
  double rician_factor_db = 0.0;
  ChannelModel model = ChannelModel::kRician;
  bool pathloss_applied = false;

  Index num_subcarriers() const { return h_incident.rows(); }
  Index num_elements() const { return h_incident.cols(); }
  void validate() const;
};

/// Number of half-triangle entries of an m x m symmetric matrix.
constexpr Index half_triangle_size(Index m) { return m * (m + 1) / 2; }

/// Zero-based position in theta of the symmetric entry (row, col).
/// Entries are ordered column by column over the upper triangle, which is
/// (1,1), (1,2), (2,2), (1,3), ...
constexpr Index half_triangle_index(Index row, Index col) {
  if (row > col) std::swap(row, col);
  return col * (col + 1) / 2 + row;
}

/// Vectorized half triangle of a symmetric scattering matrix.
class RelaxedTheta {
 public:
  RelaxedTheta(VectorXcd theta, Index num_elements);

  const VectorXcd& vec() const { return theta_; }
  Index num_elements() const { return m_; }
  /// Symmetric matrix assembled from the half triangle.
  MatrixXcd assemble() const;

 private:
  VectorXcd theta_;
  Index m_;
};

/// Symmetric scattering matrix. Symmetry is structural: only the half
/// triangle is stored.
class ScatteringMatrix {
 public:
  static constexpr double kUnitarityTol = 1e-8;

  explicit ScatteringMatrix(const RelaxedTheta& theta);
  /// Takes the upper triangle; rejects inputs that are not symmetric to 1e-12.
  static ScatteringMatrix from_symmetric(const MatrixXcd& theta);
  static ScatteringMatrix diagonal(const VectorXcd& phases);

  MatrixXcd matrix() const { return full_; }
  const RelaxedTheta& half() const { return half_; }
  Index num_elements() const { return half_.num_elements(); }

  double symmetry_residual() const { return (full_ - full_.transpose()).norm(); }
  double unitarity_residual() const;
  bool is_feasible() const;

  /// h_n = h_{R,n}^T Theta h_{I,n} for every subcarrier.
  VectorXcd cascade_gains(const ChannelRealization& chan) const;

 private:
  RelaxedTheta half_;
  MatrixXcd full_;
};

}  // namespace bdris
