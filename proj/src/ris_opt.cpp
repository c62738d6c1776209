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

#include "bdris/ris_opt.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "bdris/waveform_opt.hpp"

namespace bdris {

using SparseD = Eigen::SparseMatrix<double>;
using SparseC = Eigen::SparseMatrix<cd>;

SparseD build_permutation(Index m) {
  if (m < 1) throw Error("build_permutation: m must be >= 1");
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(m * m);
  for (Index col = 0; col < m; ++col)
    for (Index row = 0; row < m; ++row) t.emplace_back(m * col + row, half_triangle_index(row, col), 1.0);
  SparseD p(m * m, half_triangle_size(m));
  p.setFromTriplets(t.begin(), t.end());
  return p;
}

SparseD row_selector(const SparseD& perm, Index m, Index i) {
  return perm.middleRows(m * i, m);
}

MatrixXcd cascade_vectorize(const ChannelRealization& chan) {
  const Index m = chan.num_elements();
  MatrixXcd a(half_triangle_size(m), chan.num_subcarriers());
  for (Index n = 0; n < chan.num_subcarriers(); ++n)
    for (Index c = 0; c < m; ++c)
      for (Index r = 0; r <= c; ++r) {
        const cd hi_r = chan.h_incident(n, r), hr_c = chan.h_reflect(n, c);
        a(half_triangle_index(r, c), n) =
            r == c ? hi_r * hr_c : hi_r * hr_c + chan.h_incident(n, c) * chan.h_reflect(n, r);
      }
  return a;
}

MatrixXcd cascade_vectorize_diagonal(const ChannelRealization& chan) {
  return chan.h_incident.cwiseProduct(chan.h_reflect).transpose();
}

CascadeOperator::CascadeOperator(const ChannelRealization& chan, const Waveform& waveform,
                                 RisArchitecture arch)
    : arch_(arch), m_(chan.num_elements()), waveform_(waveform) {
  if (waveform.size() != chan.num_subcarriers()) throw Error("cascade: waveform/channel size mismatch");
  if (arch_ == RisArchitecture::kFullyConnected) {
    perm_ = build_permutation(m_);
    cascade_ = cascade_vectorize(chan);
  } else {
    cascade_ = cascade_vectorize_diagonal(chan);
  }
  set_waveform(waveform);
}

SparseD CascadeOperator::row_selector(Index i) const {
  if (arch_ != RisArchitecture::kFullyConnected) throw Error("row selectors need a fully-connected surface");
  return bdris::row_selector(perm_, m_, i);
}

SparseD CascadeOperator::pair_matrix(Index i, Index j) const {
  return SparseD(row_selector(i).transpose() * row_selector(j));
}

void CascadeOperator::set_waveform(const Waveform& waveform) {
  if (waveform.size() != cascade_.cols()) throw Error("cascade: waveform size mismatch");
  waveform_ = waveform;
  z_ = cascade_ * waveform.weights().asDiagonal();
  const Index n = z_.cols();
  dk_.assign(n, MatrixXcd());
  for (Index k = 0; k < n; ++k)
    dk_[k] = z_.leftCols(n - k).conjugate() * z_.rightCols(n - k).transpose();
}

VectorXcd CascadeOperator::lags(const VectorXcd& theta) const {
  const VectorXcd w = z_.transpose() * theta;
  return lag_products(w);
}

double CascadeOperator::idc(const VectorXcd& theta, const RectennaParams& params) const {
  return idc_from_lags(lags(theta), params);
}

double quadratic_term(const VectorXcd& d, const RectennaParams& params) {
  double acc = 0.375 * params.k4 * std::norm(d(0));
  for (Index k = 1; k < d.size(); ++k) acc += 0.75 * params.k4 * std::norm(d(k));
  return acc;
}

double surrogate_lower_bound(const VectorXcd& d, const VectorXcd& d_local, const RectennaParams& params) {
  cd cross = 0.375 * params.k4 * std::conj(d_local(0)) * d(0);
  for (Index k = 1; k < d.size(); ++k) cross += 0.75 * params.k4 * std::conj(d_local(k)) * d(k);
  return 2.0 * cross.real() - quadratic_term(d_local, params);
}

SdpProblem<cd> build_sdp_subproblem(const CascadeOperator& cascade, const VectorXcd& d_local,
                                    const RectennaParams& params, const SdpTolerances& tol) {
  const auto& dk = cascade.dk_matrices();
  if (d_local.size() != static_cast<Index>(dk.size())) throw Error("sdp subproblem: lag vector size mismatch");
  const Index dim = cascade.dim();

  // J = -(K2/4) D0 - (3 K4 / 8) d0 D0 - (3 K4 / 4) sum_k conj(d_k) D_k. The
  // conjugate makes -Tr(K1 X) the first-order expansion of the lifted
  // objective at d_local.
  MatrixXcd j = -(0.25 * params.k2 + 0.375 * params.k4 * d_local(0).real()) * dk[0];
  for (std::size_t k = 1; k < dk.size(); ++k)
    j -= (0.75 * params.k4 * std::conj(d_local(static_cast<Index>(k)))) * dk[k];

  SdpProblem<cd> prob;
  prob.dim = dim;
  prob.objective = j + j.adjoint();
  prob.tol = tol;

  const Index m = cascade.num_elements();
  if (cascade.architecture() == RisArchitecture::kDiagonal) {
    for (Index i = 0; i < m; ++i) {
      SparseC a(dim, dim);
      a.insert(i, i) = 1.0;
      prob.constraints.push_back({std::move(a), 1.0});
    }
    return prob;
  }

  for (Index i = 0; i < m; ++i) {
    const SparseC diag = cascade.pair_matrix(i, i).cast<cd>();
    prob.constraints.push_back({diag, 1.0});
  }
  for (Index i = 0; i < m; ++i)
    for (Index jj = i + 1; jj < m; ++jj) {
      const SparseC b = cascade.pair_matrix(i, jj).cast<cd>();
      const SparseC bt = SparseC(b.transpose());
      SparseC re = 0.5 * (b + bt);
      SparseC im = cd(0.0, -0.5) * (b - bt);
      re.prune([](Index, Index, const cd& v) { return v != cd(0.0); });
      im.prune([](Index, Index, const cd& v) { return v != cd(0.0); });
      prob.constraints.push_back({std::move(re), 0.0});
      prob.constraints.push_back({std::move(im), 0.0});
    }
  return prob;
}

namespace {

VectorXd theta_energy_weights(const CascadeOperator& cascade) {
  VectorXd w = VectorXd::Ones(cascade.dim());
  if (cascade.architecture() == RisArchitecture::kFullyConnected) {
    const Index m = cascade.num_elements();
    for (Index c = 0; c < m; ++c)
      for (Index r = 0; r < c; ++r) w(half_triangle_index(r, c)) = 2.0;
  }
  return w;
}

VectorXcd unit_modulus(const VectorXcd& v) {
  VectorXcd out(v.size());
  for (Index i = 0; i < v.size(); ++i) out(i) = v(i) == cd(0.0) ? cd(1.0) : v(i) / std::abs(v(i));
  return out;
}

}  // namespace

RandomizationResult gaussian_randomize(const MatrixXcd& x, const CascadeOperator& cascade,
                                       const RectennaParams& params, int draws, Rng& rng,
                                       DrawScaling scaling) {
  const Index dim = cascade.dim();
  if (x.rows() != dim || x.cols() != dim) throw Error("gaussian_randomize: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (x + x.adjoint()));
  const VectorXd lambda = es.eigenvalues().cwiseMax(0.0);
  const double top = lambda(dim - 1);

  RandomizationResult res;
  if (top <= 0.0) {
    res.theta = VectorXcd::Zero(dim);
    res.rank_one = true;
    res.idc = 0.0;
    return res;
  }
  const double second = dim > 1 ? lambda(dim - 2) : 0.0;
  if (second <= 1e-6 * top) {
    res.theta = std::sqrt(top) * es.eigenvectors().col(dim - 1);
    res.rank_one = true;
    res.idc = cascade.idc(res.theta, params);
    return res;
  }

  const MatrixXcd factor = es.eigenvectors() * lambda.cwiseSqrt().asDiagonal();
  const VectorXd weights = theta_energy_weights(cascade);
  const double target_energy = static_cast<double>(cascade.num_elements());
  res.idc = -std::numeric_limits<double>::infinity();
  res.draw_idcs.reserve(draws);
  for (int g = 0; g < draws; ++g) {
    VectorXcd theta = factor * complex_normal_vector(dim, rng);
    if (scaling == DrawScaling::kScatteringEnergy) {
      const double energy = (weights.array() * theta.array().abs2()).sum();
      if (energy > 0.0) theta *= std::sqrt(target_energy / energy);
    } else if (scaling == DrawScaling::kUnitModulus) {
      theta = unit_modulus(theta);
    }
    const double value = cascade.idc(theta, params);
    res.draw_idcs.push_back(value);
    if (value > res.idc) {
      res.idc = value;
      res.theta = std::move(theta);
    }
  }
  return res;
}

Takagi takagi(const MatrixXcd& a) {
  const Index m = a.rows();
  if (a.cols() != m) throw Error("takagi: matrix must be square");
  // A conj(q) = sigma q  <=>  [Re A, Im A; Im A, -Re A] [Re q; Im q] = sigma [Re q; Im q].
  MatrixXd embed(2 * m, 2 * m);
  embed << a.real(), a.imag(), a.imag(), -a.real();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(embed);

  Takagi t;
  t.q.resize(m, m);
  t.sigma.resize(m);
  for (Index k = 0; k < m; ++k) {
    const Index src = 2 * m - 1 - k;
    const auto v = es.eigenvectors().col(src);
    t.q.col(k) = v.head(m).cast<cd>() + cd(0.0, 1.0) * v.tail(m).cast<cd>();
    t.sigma(k) = std::max(0.0, es.eigenvalues()(src));
  }

  // Columns for (numerically) zero singular values are not determined by the
  // eigenproblem; replace them with an orthonormal complement.
  const double cut = 1e-12 * std::max(t.sigma(0), std::numeric_limits<double>::min());
  Index kept = 0;
  while (kept < m && t.sigma(kept) > cut) ++kept;
  if (kept < m) {
    const MatrixXcd basis = t.q.leftCols(kept);
    const MatrixXcd perp = MatrixXcd::Identity(m, m) - basis * basis.adjoint();
    Eigen::SelfAdjointEigenSolver<MatrixXcd> pe(perp);
    t.q.rightCols(m - kept) = pe.eigenvectors().rightCols(m - kept);
    t.sigma.tail(m - kept).setZero();
  }
  return t;
}

ProjectionResult feasible_projection(const MatrixXcd& theta_relaxed, const ChannelRealization& chan,
                                     const Waveform& waveform, int draws, Rng& rng,
                                     const RectennaParams& params) {
  const Index m = theta_relaxed.rows();
  if (chan.num_elements() != m) throw Error("feasible_projection: size mismatch");
  const double scale = std::max(1.0, theta_relaxed.norm());
  if ((theta_relaxed - theta_relaxed.transpose()).norm() > 1e-12 * scale)
    throw Error("feasible_projection: input is not symmetric");

  const Takagi t = takagi(theta_relaxed);
  const MatrixXcd rebuilt = t.q * t.sigma.cast<cd>().asDiagonal() * t.q.transpose();
  if ((rebuilt - theta_relaxed).norm() > 1e-6 * theta_relaxed.norm())
    throw Error("feasible_projection: Takagi factorization failed");

  // h_n = sum_k (Q^T h_R)_k phi_k (Q^T h_I)_k for Theta = Q diag(phi) Q^T.
  const MatrixXcd u = chan.h_reflect * t.q;
  const MatrixXcd v = chan.h_incident * t.q;
  const MatrixXcd uv = u.cwiseProduct(v);
  auto score = [&](const VectorXcd& phi) {
    return idc_frequency_domain(waveform.weights(), uv * phi, params);
  };

  VectorXcd best_phi = VectorXcd::Ones(m);
  double best = score(best_phi);
  bool deterministic = true;
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  VectorXcd phi(m);
  for (int k = 0; k < draws; ++k) {
    for (Index i = 0; i < m; ++i) phi(i) = unit_phasor(angle(rng));
    const double value = score(phi);
    if (value > best) {
      best = value;
      best_phi = phi;
      deterministic = false;
    }
  }

  MatrixXcd theta = t.q * best_phi.asDiagonal() * t.q.transpose();
  theta = (0.5 * (theta + theta.transpose())).eval();
  ProjectionResult res{ScatteringMatrix::from_symmetric(theta), 0.0, deterministic};
  res.idc = idc_frequency_domain(waveform.weights(), res.theta.cascade_gains(chan), params);
  return res;
}

namespace {

BeamformingResult optimize_alternating(const ChannelRealization& chan, const ScenarioConfig& config,
                                       const RectennaParams& params, RisArchitecture arch) {
  config.validate();
  params.validate();
  chan.validate();
  const bool diagonal = arch == RisArchitecture::kDiagonal;
  const Index m = chan.num_elements();
  Rng rng(mix_seed(mix_seed(config.rng_seed, chan.seed), diagonal ? 2 : 1));

  // Random feasible starting point.
  VectorXcd theta;
  if (diagonal) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    theta.resize(m);
    for (Index i = 0; i < m; ++i) theta(i) = unit_phasor(angle(rng));
  } else {
    const MatrixXcd q0 = haar_unitary(m, rng);
    const MatrixXcd start = q0 * q0.transpose();
    theta = ScatteringMatrix::from_symmetric(0.5 * (start + start.transpose())).half().vec();
  }

  const MatrixXcd a =
      diagonal ? cascade_vectorize_diagonal(chan) : cascade_vectorize(chan);
  VectorXcd gains = a.transpose() * theta;
  VectorXd phases(gains.size());
  for (Index n = 0; n < gains.size(); ++n) phases(n) = std::arg(gains(n));
  Waveform waveform = smf_init(gains.cwiseAbs(), phases, config.smf_exponent, config.transmit_power_watts);
  CascadeOperator op(chan, waveform, arch);

  SdpTolerances tol;
  tol.feas = config.sdp_feas_tol;
  tol.psd = config.sdp_psd_tol;
  tol.rel_objective = config.sdp_rel_tol;
  tol.max_iterations = config.sdp_max_iterations;
  const SdpAlgorithm algorithm = sdp_algorithm_from_string(config.sdp_algorithm);
  const DrawScaling scaling = diagonal ? DrawScaling::kUnitModulus : DrawScaling::kScatteringEnergy;

  BeamformingResult res;
  res.architecture = arch;
  VectorXcd d = op.lags(theta);
  double idc = idc_from_lags(d, params);
  double idc_prev = std::numeric_limits<double>::infinity();

  for (int outer = 1; outer <= config.outer_max_iterations; ++outer) {
    double omega_prev = std::numeric_limits<double>::infinity();
    for (int inner = 1; inner <= config.inner_max_iterations; ++inner) {
      SdpProblem<cd> prob = build_sdp_subproblem(op, d, params, tol);
      prob.algorithm = algorithm;
      const SdpSolution<cd> sol = sdp_solve(prob);
      ++res.sdp_solves;
      if (!sol.converged()) ++res.sdp_nonconverged;
      res.sdr_rank_history.push_back(numerical_rank(sol.x));

      RandomizationResult cand =
          gaussian_randomize(sol.x, op, params, config.randomization_draws_inner, rng, scaling);
      if (diagonal) cand.theta = unit_modulus(cand.theta);
      const double cand_idc = op.idc(cand.theta, params);
      // Randomization can land below the incumbent; keep the incumbent so the
      // alternation never loses ground.
      if (cand_idc < idc) break;  // the next subproblem would be identical
      theta = cand.theta;
      d = op.lags(theta);
      idc = cand_idc;
      const double omega = sol.objective;
      if (std::abs(1.0 - omega_prev / omega) <= config.sca_tolerance) break;
      omega_prev = omega;
    }

    gains = a.transpose() * theta;
    const ScaTrace sca = sca_waveform(gains, config, params, op.waveform());
    if (!sca.converged) ++res.sca_nonconverged;
    if (sca.idc >= idc) {
      op.set_waveform(sca.waveform);
      d = op.lags(theta);
      idc = idc_from_lags(d, params);
    }
    res.outer_trace.emplace_back(outer, idc);
    if (std::abs(1.0 - idc_prev / idc) <= config.sca_tolerance) {
      res.converged = true;
      break;
    }
    idc_prev = idc;
  }
  res.idc_pre_projection = idc;

  ScatteringMatrix final_theta = diagonal ? ScatteringMatrix::diagonal(unit_modulus(theta))
                                          : feasible_projection(RelaxedTheta(theta, m).assemble(), chan,
                                                                op.waveform(), config.randomization_draws_final,
                                                                rng, params)
                                                .theta;

  // Re-fit the waveform to the feasible cascade. Starting from the current
  // amplitudes, SCA cannot end below the re-phased current waveform.
  const VectorXcd final_gains = final_theta.cascade_gains(chan);
  const ScaTrace polish = sca_waveform(final_gains, config, params, op.waveform());
  if (!polish.converged) ++res.sca_nonconverged;
  res.waveform_final = polish.waveform;
  res.theta_final = final_theta;
  res.idc_final = idc_frequency_domain(res.waveform_final.weights(), final_gains, params);
  return res;
}

}  // namespace

BeamformingResult optimize_bdris(const ChannelRealization& chan, const ScenarioConfig& config,
                                 const RectennaParams& params) {
  return optimize_alternating(chan, config, params, RisArchitecture::kFullyConnected);
}

BeamformingResult optimize_dris(const ChannelRealization& chan, const ScenarioConfig& config,
                                const RectennaParams& params) {
  return optimize_alternating(chan, config, params, RisArchitecture::kDiagonal);
}

}  // namespace bdris
