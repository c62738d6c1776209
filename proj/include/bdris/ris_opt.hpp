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
#include <vector>

#include <Eigen/SparseCore>

#include "bdris/model.hpp"
#include "bdris/rectenna.hpp"
#include "bdris/sdp.hpp"

namespace bdris {

enum class RisArchitecture { kFullyConnected, kDiagonal };

/// M^2 x M(M+1)/2 selection matrix with P theta = Vec(Theta) (column-major
/// Vec). Row M*col + row of Vec(Theta) selects half_triangle_index(row, col).
Eigen::SparseMatrix<double> build_permutation(Index m);

/// Rows M*i .. M*i + M - 1 of P, i.e. the i-th column (= row) of Theta.
Eigen::SparseMatrix<double> row_selector(const Eigen::SparseMatrix<double>& perm, Index m, Index i);

/// Column n holds a_n = P^T Vec(h_{I,n} h_{R,n}^T), so that
/// a_n^T theta = h_{R,n}^T Theta h_{I,n}.
MatrixXcd cascade_vectorize(const ChannelRealization& chan);

/// Column n holds b_n = h_{I,n} .* h_{R,n} for a diagonal surface.
MatrixXcd cascade_vectorize_diagonal(const ChannelRealization& chan);

/// Lifted-objective data for one (channel, waveform) pair.
class CascadeOperator {
 public:
  CascadeOperator(const ChannelRealization& chan, const Waveform& waveform, RisArchitecture arch);

  RisArchitecture architecture() const { return arch_; }
  Index num_elements() const { return m_; }
  Index num_subcarriers() const { return cascade_.cols(); }
  /// Length of theta: M(M+1)/2 fully connected, M diagonal.
  Index dim() const { return cascade_.rows(); }

  const MatrixXcd& cascade_vectors() const { return cascade_; }
  const MatrixXcd& z_vectors() const { return z_; }
  /// D_k = sum_n conj(z_n) z_{n+k}^T, k = 0..N-1.
  const std::vector<MatrixXcd>& dk_matrices() const { return dk_; }
  const Waveform& waveform() const { return waveform_; }

  /// Only for the fully-connected architecture.
  const Eigen::SparseMatrix<double>& permutation() const { return perm_; }
  Eigen::SparseMatrix<double> row_selector(Index i) const;
  /// P_i^T P_j.
  Eigen::SparseMatrix<double> pair_matrix(Index i, Index j) const;

  /// Re-derives z_n and D_k for a new waveform on the same channel.
  void set_waveform(const Waveform& waveform);

  /// h_n = a_n^T theta.
  VectorXcd cascade_gains(const VectorXcd& theta) const { return cascade_.transpose() * theta; }
  /// d_k = theta^H D_k theta, evaluated through the subcarrier products.
  VectorXcd lags(const VectorXcd& theta) const;
  double idc(const VectorXcd& theta, const RectennaParams& params) const;

 private:
  RisArchitecture arch_;
  Index m_;
  Eigen::SparseMatrix<double> perm_;
  MatrixXcd cascade_;
  MatrixXcd z_;
  std::vector<MatrixXcd> dk_;
  Waveform waveform_;
};

/// Objective K1 = J + J^H of the linearized SDP at the local lags d, and
/// the unitarity (fully connected) or unit-modulus (diagonal) constraints.
SdpProblem<cd> build_sdp_subproblem(const CascadeOperator& cascade, const VectorXcd& d_local,
                                    const RectennaParams& params, const SdpTolerances& tol = {});

/// Linearized quadratic term 2 Re{d_l^H K0 d} - d_l^H K0 d_l.
double surrogate_lower_bound(const VectorXcd& d, const VectorXcd& d_local, const RectennaParams& params);
/// d^H K0 d with K0 = diag(3/8 K4, 3/4 K4, ...).
double quadratic_term(const VectorXcd& d, const RectennaParams& params);

/// How each Gaussian draw is mapped before it is scored.
enum class DrawScaling {
  kNone,             ///< raw draw from CN(0, X)
  kScatteringEnergy, ///< rescaled so the assembled Theta has |Theta|_F^2 = M
  kUnitModulus,      ///< every entry projected onto the unit circle
};

struct RandomizationResult {
  VectorXcd theta;
  double idc = 0.0;
  bool rank_one = false;
  std::vector<double> draw_idcs;
};

/// Rank-one X (sigma_2 / sigma_1 <= 1e-6) returns sqrt(lambda_1) times the
/// principal eigenvector. Otherwise `draws` samples from CN(0, X) are scored
/// by the lifted DC current and the best one is returned.
RandomizationResult gaussian_randomize(const MatrixXcd& x, const CascadeOperator& cascade,
                                       const RectennaParams& params, int draws, Rng& rng,
                                       DrawScaling scaling = DrawScaling::kNone);

/// Symmetric (Takagi) factorization A = Q diag(sigma) Q^T.
struct Takagi {
  MatrixXcd q;
  VectorXd sigma;
};
Takagi takagi(const MatrixXcd& symmetric);

struct ProjectionResult {
  ScatteringMatrix theta;
  double idc = 0.0;
  bool deterministic_won = false;
};

/// Keeps the factor Q of Theta' = Q Sigma Q^T and searches unit-modulus
/// replacements of Sigma: the identity and `draws` random phase vectors.
/// Throws when the factorization residual exceeds 1e-6 |Theta'|_F.
ProjectionResult feasible_projection(const MatrixXcd& theta_relaxed, const ChannelRealization& chan,
                                     const Waveform& waveform, int draws, Rng& rng,
                                     const RectennaParams& params);

struct BeamformingResult {
  RisArchitecture architecture = RisArchitecture::kFullyConnected;
  ScatteringMatrix theta_final = ScatteringMatrix::diagonal(VectorXcd::Ones(1));
  Waveform waveform_final{VectorXcd::Zero(1), 1.0};
  double idc_final = 0.0;
  /// Objective of the last alternation iterate, before the feasibility step.
  double idc_pre_projection = 0.0;
  std::vector<std::pair<int, double>> outer_trace;
  std::vector<Index> sdr_rank_history;
  bool converged = false;
  int sdp_solves = 0;
  int sdp_nonconverged = 0;
  int sca_nonconverged = 0;
};

/// Alternating SDR beamforming / SCA waveform optimization for a
/// fully-connected surface, followed by the feasibility projection.
BeamformingResult optimize_bdris(const ChannelRealization& chan, const ScenarioConfig& config,
                                 const RectennaParams& params);

/// Same alternation restricted to diagonal unit-modulus Theta.
BeamformingResult optimize_dris(const ChannelRealization& chan, const ScenarioConfig& config,
                                const RectennaParams& params);

}  // namespace bdris
