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

// Acceptance run: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (capped at 1).

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "bdris/channel.hpp"
#include "bdris/harness.hpp"
#include "bdris/ris_opt.hpp"
#include "bdris/waveform_opt.hpp"
#include "support.hpp"

using namespace bdris;
using bdris::testing::half_of;
using bdris::testing::random_channel;
using bdris::testing::random_symmetric;
using bdris::testing::random_symmetric_unitary;
using bdris::testing::rel_err;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const RectennaParams kParams;
constexpr int kRuns = 50;

// Every beamforming result produced below, tagged with its surface size.
struct RunLog {
  int m = 0;
  const BeamformingResult* result = nullptr;
};
std::vector<RunLog> g_runs;
std::vector<SweepResult> g_sweeps;  // keeps the logged results alive
int g_failed_runs = 0;

const SweepResult& logged_sweep(SweepResult s) {
  g_sweeps.push_back(std::move(s));
  const SweepResult& out = g_sweeps.back();
  for (const auto& rec : out.records) {
    if (!rec.ok()) {
      ++g_failed_runs;
      std::fprintf(stderr, "run failed (m=%d n=%d seed=%llu %s): %s\n", rec.config.num_ris_elements,
                   rec.config.num_subcarriers, static_cast<unsigned long long>(rec.seed), to_string(rec.method).c_str(),
                   rec.error.c_str());
    }
    if (rec.result) g_runs.push_back({rec.config.num_ris_elements, &*rec.result});
  }
  return out;
}

// Per-run currents of one (value, method) point, in realization order.
std::vector<double> point_idcs(const SweepResult& s, double value, Method method) {
  std::vector<double> out;
  for (const auto& rec : s.records) {
    const double v = s.axis == SweepAxis::kM ? rec.config.num_ris_elements : rec.config.num_subcarriers;
    if (v == value && rec.method == method) out.push_back(rec.ok() ? rec.idc : 0.0);
  }
  return out;
}

std::vector<double> minus(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

SweepResult sweep(ScenarioConfig c, SweepAxis axis, std::vector<double> values, std::vector<Method> methods) {
  SweepOptions o;
  o.axis = axis;
  o.values = std::move(values);
  o.methods = std::move(methods);
  o.runs = kRuns;
  c.rng_seed = 20261016;
  return run_sweep(c, o, kParams);
}

VectorXd harmonic_freqs(Index n) {
  VectorXd f(n);
  for (Index i = 0; i < n; ++i) f(i) = (8 + i) * 1e6;
  return f;
}

// ---------------------------------------------------------------------------

Verdict oracle_equivalence() {
  const auto t0 = Clock::now();
  Rng rng(101);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Index n = 1 + i % 8;
    const VectorXcd s = complex_normal_vector(n, rng), h = complex_normal_vector(n, rng);
    const double td = idc_time_domain_oracle(s, h, harmonic_freqs(n), kParams, 1 << 18);
    worst = std::max(worst, rel_err(idc_frequency_domain(s, h, kParams), td));
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-8 && secs <= 60.0, fmt("max rel err %.2e over 100 instances, %.1f s", worst, secs)};
}

Verdict quadratic_reconciliation() {
  Rng rng(102);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Index m = 1 + i % 8, n = 1 + (i / 8) % 4;
    const ChannelRealization chan = random_channel(n, m, rng);
    const Waveform w(complex_normal_vector(n, rng), 1e6);
    const MatrixXcd theta = random_symmetric(m, rng);
    const CascadeOperator op(chan, w, RisArchitecture::kFullyConnected);
    VectorXcd h(n);
    for (Index k = 0; k < n; ++k) h(k) = (chan.h_reflect.row(k) * theta * chan.h_incident.row(k).transpose())(0, 0);
    const double direct = idc_frequency_domain(w.weights(), h, kParams);
    worst = std::max(worst, rel_err(idc_quadratic_form(half_of(theta), op.dk_matrices(), kParams), direct));
  }
  return {worst <= 1e-9, fmt("max rel err %.2e over 100 triples", worst)};
}

Verdict gradient_correctness() {
  Rng rng(103);
  std::uniform_real_distribution<double> u(0.05, 2.0);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Index n = 1 + i % 8;
    const VectorXd s = VectorXd::NullaryExpr(n, [&] { return u(rng); });
    const VectorXd h = VectorXd::NullaryExpr(n, [&] { return u(rng); });
    const VectorXd g = idc_gradient(s, h, kParams);
    for (Index k = 0; k < n; ++k) {
      const double step = 1e-5 * std::max(1.0, s(k));
      VectorXd up = s, dn = s;
      up(k) += step;
      dn(k) -= step;
      const double fd = (idc_frequency_domain(up.cast<cd>(), h.cast<cd>(), kParams) -
                         idc_frequency_domain(dn.cast<cd>(), h.cast<cd>(), kParams)) /
                        (2.0 * step);
      worst = std::max(worst, rel_err(g(k), fd));
    }
  }
  return {worst <= 1e-6, fmt("max rel err %.2e over 50 instances", worst)};
}

Verdict sca_monotone_optimal() {
  ScenarioConfig c;
  Rng rng(104);
  double worst_drop = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Index n = 1 + i % 8;
    c.num_subcarriers = static_cast<int>(n);
    const ScaTrace t = sca_waveform(0.01 * complex_normal_vector(n, rng), c, kParams);
    for (std::size_t k = 1; k < t.iterations.size(); ++k)
      worst_drop = std::max(worst_drop, t.iterations[k - 1].idc - t.iterations[k].idc);
  }
  c.num_subcarriers = 2;
  double worst_gap = 0.0;
  for (int i = 0; i < 20; ++i) {
    const VectorXcd h = 0.01 * complex_normal_vector(2, rng);
    const VectorXd hb = h.cwiseAbs();
    double best = 0.0;
    for (int g = 0; g < 1000; ++g) {
      const double a = 0.5 * kPi * g / 999.0;
      VectorXd s(2);
      s << std::cos(a), std::sin(a);
      s *= std::sqrt(2.0 * c.transmit_power_watts);
      best = std::max(best, idc_frequency_domain(s.cast<cd>(), hb.cast<cd>(), kParams));
    }
    worst_gap = std::max(worst_gap, 1.0 - sca_waveform(h, c, kParams).idc / best);
  }
  return {worst_drop <= 1e-8 && worst_gap <= 1e-3,
          fmt("max decrease %.2e over 50 traces; worst shortfall vs grid %.2e on 20 channels", worst_drop, worst_gap)};
}

Verdict lifting_machinery() {
  Rng rng(105);
  double worst_vec = 0.0, worst_bilinear = 0.0, worst_constraint = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Index m = 1 + i % 6;
    const MatrixXcd theta = random_symmetric_unitary(m, rng);
    const VectorXcd half = half_of(theta);
    const VectorXcd pv = build_permutation(m).cast<cd>() * half;
    worst_vec = std::max(worst_vec, (pv - Eigen::Map<const VectorXcd>(theta.data(), m * m)).cwiseAbs().maxCoeff());

    const ChannelRealization chan = random_channel(3, m, rng);
    const VectorXcd got = cascade_vectorize(chan).transpose() * half;
    for (Index n = 0; n < 3; ++n)
      worst_bilinear = std::max(
          worst_bilinear, std::abs(got(n) - (chan.h_reflect.row(n) * theta * chan.h_incident.row(n).transpose())(0, 0)));

    const CascadeOperator op(chan, Waveform(VectorXcd::Ones(3), 1.5), RisArchitecture::kFullyConnected);
    const SdpProblem<cd> prob = build_sdp_subproblem(op, VectorXcd::Ones(3), kParams);
    const MatrixXcd x = half * half.adjoint();
    for (const auto& con : prob.constraints)
      worst_constraint = std::max(worst_constraint, std::abs(trace_product<cd>(con.a, x) - con.b));
  }
  return {worst_vec <= 1e-12 && worst_bilinear <= 1e-12 && worst_constraint <= 1e-10,
          fmt("P theta err %.1e, bilinear err %.1e, constraint err %.1e over 100 cases", worst_vec, worst_bilinear,
              worst_constraint)};
}

Verdict feasibility() {
  double worst_sym = 0.0, worst_unit = 0.0;
  for (const auto& r : g_runs) {
    worst_sym = std::max(worst_sym, r.result->theta_final.symmetry_residual());
    worst_unit = std::max(worst_unit, r.result->theta_final.unitarity_residual());
  }
  return {!g_runs.empty() && worst_sym == 0.0 && worst_unit <= 1e-8 && g_failed_runs == 0,
          fmt("%zu runs, max |T-T^T| %.1e, max |T^H T - I|_F %.2e, %d failed runs", g_runs.size(), worst_sym,
              worst_unit, g_failed_runs)};
}

Verdict single_element_collapse() {
  ScenarioConfig c;
  c.num_ris_elements = 1;
  static std::vector<ExperimentRecord> keep;
  keep.reserve(40);
  double worst = 0.0;
  int bad = 0;
  for (int i = 0; i < 20; ++i) {
    c.num_subcarriers = 1 + i % 4;
    const std::uint64_t seed = realization_seed(107, i);
    const ExperimentRecord ref = run_single(c, Method::kWaveformOnly, seed, kParams);
    for (Method m : {Method::kBdris, Method::kDris}) {
      keep.push_back(run_single(c, m, seed, kParams));
      const ExperimentRecord& rec = keep.back();
      if (!rec.ok() || !ref.ok()) {
        ++bad;
        continue;
      }
      g_runs.push_back({1, &*rec.result});
      worst = std::max(worst, rel_err(rec.idc, ref.idc));
    }
  }
  return {bad == 0 && worst <= 1e-3, fmt("max rel deviation %.2e over 20 realizations, %d failed", worst, bad)};
}

Verdict dris_closed_form() {
  ScenarioConfig c;
  c.channel_model = ChannelModel::kLos;
  c.num_subcarriers = 1;
  static std::vector<BeamformingResult> keep;
  keep.reserve(40);
  double worst = 0.0;
  for (int m : {4, 8}) {
    c.num_ris_elements = m;
    for (int i = 0; i < 20; ++i) {
      const ChannelRealization chan = apply_pathloss(gen_channel(c, realization_seed(108, i)), c);
      keep.push_back(optimize_dris(chan, c, kParams));
      g_runs.push_back({m, &keep.back()});
      const double h = chan.h_reflect.row(0).cwiseProduct(chan.h_incident.row(0)).cwiseAbs().sum();
      const double pt = c.transmit_power_watts;
      const double closed = kParams.k2 * pt * h * h + 1.5 * kParams.k4 * pt * pt * std::pow(h, 4);
      worst = std::max(worst, 1.0 - keep.back().idc_final / closed);
    }
  }
  return {worst <= 5e-3, fmt("max shortfall %.2e vs phase alignment over 40 LoS realizations", worst)};
}

Verdict los_parity() {
  const auto t0 = Clock::now();
  ScenarioConfig c;
  c.channel_model = ChannelModel::kLos;
  std::string detail;
  bool pass = true;
  for (int m : {4, 8}) {
    c.num_ris_elements = m;
    const SweepResult& s = logged_sweep(sweep(c, SweepAxis::kN, {1, 4}, {Method::kBdris, Method::kDris}));
    for (double n : {1.0, 4.0}) {
      const auto bd = mean_and_stderr(point_idcs(s, n, Method::kBdris)).first;
      const auto d = mean_and_stderr(point_idcs(s, n, Method::kDris)).first;
      const double ratio = bd / d;
      pass = pass && ratio >= 0.98 && ratio <= 1.02;
      detail += fmt("(M=%d,N=%g) %.4f ", m, n, ratio);
    }
  }
  const double secs = seconds_since(t0);
  pass = pass && secs <= 1800.0;
  return {pass, "BD/D ratios " + detail + fmt("in %.0f s", secs)};
}

struct RicianData {
  const SweepResult* m16 = nullptr;  // N in {1, 2, 4} at M = 16
};
RicianData g_rician;

Verdict rician_advantage() {
  ScenarioConfig c;
  c.channel_model = ChannelModel::kRician;
  c.rician_factor_db = 0.0;
  c.num_ris_elements = 16;
  const SweepResult& s = logged_sweep(sweep(c, SweepAxis::kN, {1, 2, 4}, {Method::kBdris, Method::kDris}));
  g_rician.m16 = &s;

  std::map<double, std::vector<double>> gaps;
  std::string detail;
  bool pass = true;
  for (double n : {1.0, 2.0, 4.0}) {
    gaps[n] = minus(point_idcs(s, n, Method::kBdris), point_idcs(s, n, Method::kDris));
    const auto [gap, se] = mean_and_stderr(gaps[n]);
    pass = pass && gap >= 0.0;
    detail += fmt("gap(N=%g) %.3e+-%.1e ", n, gap, se);
  }
  const auto [diff, diff_se] = mean_and_stderr(minus(gaps[4.0], gaps[1.0]));
  pass = pass && diff > diff_se;
  return {pass, detail + fmt("; gap(4)-gap(1) %.3e vs SE %.1e", diff, diff_se)};
}

// Nondecreasing within one standard error of the difference of means.
bool monotone(const SweepResult& s, const std::vector<double>& values, Method method, std::string& detail) {
  bool ok = true;
  for (std::size_t i = 1; i < values.size(); ++i) {
    const auto [a, sa] = mean_and_stderr(point_idcs(s, values[i - 1], method));
    const auto [b, sb] = mean_and_stderr(point_idcs(s, values[i], method));
    const bool step = b >= a - std::hypot(sa, sb);
    ok = ok && step;
    if (!step) detail += fmt("%s drop %g->%g; ", to_string(method).c_str(), values[i - 1], values[i]);
  }
  return ok;
}

Verdict monotone_sweeps() {
  ScenarioConfig c;
  c.channel_model = ChannelModel::kRician;
  c.num_subcarriers = 4;
  const SweepResult& by_m = logged_sweep(sweep(c, SweepAxis::kM, {2, 4, 8}, {Method::kBdris, Method::kDris}));
  std::string detail;
  bool pass = true;
  for (Method method : {Method::kBdris, Method::kDris}) {
    // Extend the M axis with the M = 16, N = 4 point of the Rician run.
    SweepResult joined = by_m;
    for (const auto& rec : g_rician.m16->records)
      if (rec.config.num_subcarriers == 4) joined.records.push_back(rec);
    pass = monotone(joined, {2, 4, 8, 16}, method, detail) && pass;
    pass = monotone(*g_rician.m16, {1, 2, 4}, method, detail) && pass;
  }
  std::string means;
  for (double m : {2.0, 4.0, 8.0})
    means += fmt("M=%g %.3e/%.3e ", m, mean_and_stderr(point_idcs(by_m, m, Method::kBdris)).first,
                 mean_and_stderr(point_idcs(by_m, m, Method::kDris)).first);
  return {pass, "N=4 BD/D means " + means + "; M=16 N in {1,2,4}" + (detail.empty() ? "" : "; " + detail)};
}

Verdict convergence_traces() {
  int total = 0, converged = 0, nonmonotone = 0;
  for (const auto& r : g_runs) {
    if (r.m > 8) continue;
    ++total;
    if (r.result->converged) ++converged;
    const auto& tr = r.result->outer_trace;
    for (std::size_t i = 1; i < tr.size(); ++i)
      if (tr[i].second < tr[i - 1].second * (1.0 - 1e-6)) {
        ++nonmonotone;
        break;
      }
  }
  const double frac = total ? static_cast<double>(converged) / total : 0.0;
  return {total > 0 && nonmonotone == 0 && frac >= 0.95,
          fmt("%d runs at M<=8: %d non-monotone, %.1f%% converged", total, nonmonotone, 100.0 * frac)};
}

}  // namespace

int main() {
  g_sweeps.reserve(16);
  const std::vector<std::pair<int, std::function<Verdict()>>> order = {
      {1, oracle_equivalence},   {2, quadratic_reconciliation}, {3, gradient_correctness},
      {4, sca_monotone_optimal}, {5, lifting_machinery},        {7, single_element_collapse},
      {8, dris_closed_form},     {9, los_parity},               {10, rician_advantage},
      {11, monotone_sweeps},     {12, convergence_traces},      {6, feasibility},
  };
  std::map<int, Verdict> verdicts;
  for (const auto& [id, fn] : order) {
    const auto t0 = Clock::now();
    try {
      verdicts[id] = fn();
    } catch (const std::exception& e) {
      verdicts[id] = {false, std::string("exception: ") + e.what()};
    }
    std::fprintf(stderr, "criterion %d evaluated in %.1f s\n", id, seconds_since(t0));
  }
  int failed = 0;
  for (const auto& [id, v] : verdicts) {
    std::printf("%s criterion %2d: %s\n", v.pass ? "PASS" : "FAIL", id, v.detail.c_str());
    if (!v.pass) ++failed;
  }
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}
