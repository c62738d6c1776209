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

#include <doctest.h>

#include <sstream>

#include "bdris/waveform_opt.hpp"
#include "support.hpp"

using namespace bdris;
using bdris::testing::rel_err;

namespace {

// Phase-aligned current as a function of the real amplitudes.
double aligned_idc(const VectorXd& s_bars, const VectorXd& h_bars, const RectennaParams& p) {
  return idc_frequency_domain(s_bars.cast<cd>(), h_bars.cast<cd>(), p);
}

VectorXd fd_gradient(const VectorXd& s_bars, const VectorXd& h_bars, const RectennaParams& p) {
  VectorXd g(s_bars.size());
  for (Index i = 0; i < s_bars.size(); ++i) {
    const double step = 1e-5 * std::max(1.0, s_bars(i));
    VectorXd up = s_bars, dn = s_bars;
    up(i) += step;
    dn(i) -= step;
    g(i) = (aligned_idc(up, h_bars, p) - aligned_idc(dn, h_bars, p)) / (2.0 * step);
  }
  return g;
}

// Best current over a uniform grid of amplitude splits on the budget circle.
double grid_oracle_n2(const VectorXcd& h, double p_t, const RectennaParams& p, int points) {
  const VectorXd h_bars = h.cwiseAbs();
  double best = 0.0;
  for (int i = 0; i < points; ++i) {
    const double t = 0.5 * kPi * i / (points - 1);
    VectorXd s(2);
    s << std::cos(t), std::sin(t);
    best = std::max(best, aligned_idc(std::sqrt(2.0 * p_t) * s, h_bars, p));
  }
  return best;
}

}  // namespace

TEST_CASE("smf_init") {
  const double p_t = 100.0;
  SUBCASE("single carrier takes the whole budget") {
    for (double beta : {0.0, 1.0, 3.0, 7.5}) {
      const Waveform w = smf_init(VectorXd::Constant(1, 0.3), VectorXd::Constant(1, 1.2), beta, p_t);
      CHECK(w.amplitudes()(0) == doctest::Approx(std::sqrt(2.0 * p_t)));
      CHECK(std::arg(w.weights()(0)) == doctest::Approx(-1.2));
    }
  }
  SUBCASE("flat channel spreads power evenly") {
    const Waveform w = smf_init(VectorXd::Constant(4, 2.0), VectorXd::Zero(4), 3.0, p_t);
    for (Index n = 0; n < 4; ++n) CHECK(w.amplitudes()(n) == doctest::Approx(std::sqrt(2.0 * p_t / 4.0)));
  }
  SUBCASE("beta = 0 ignores the channel") {
    VectorXd mags(3);
    mags << 0.1, 5.0, 2.0;
    const Waveform w = smf_init(mags, VectorXd::Zero(3), 0.0, p_t);
    for (Index n = 0; n < 3; ++n) CHECK(w.amplitudes()(n) == doctest::Approx(std::sqrt(2.0 * p_t / 3.0)));
  }
  SUBCASE("budget met with equality even for tiny gains") {
    VectorXd mags(3);
    mags << 1e-200, 3e-200, 2e-200;
    const Waveform w = smf_init(mags, VectorXd::Zero(3), 3.0, p_t);
    CHECK(rel_err(w.power_watts(), p_t) <= 1e-12);
    CHECK(w.amplitudes()(1) > w.amplitudes()(2));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(smf_init(VectorXd::Zero(2), VectorXd::Zero(2), 3.0, p_t), Error);
    CHECK_THROWS_AS(smf_init(VectorXd::Ones(2), VectorXd::Zero(3), 3.0, p_t), Error);
  }
}

TEST_CASE("gradient closed form at one carrier") {
  const RectennaParams p;
  const VectorXd one = VectorXd::Ones(1);
  CHECK(idc_gradient(one, one, p)(0) == doctest::Approx(1436.045).epsilon(1e-14));
  CHECK(idc_gradient(VectorXd::Zero(3), VectorXd::Ones(3), p).norm() == 0.0);
  CHECK_THROWS_AS(idc_gradient(VectorXd::Ones(2), VectorXd::Ones(3), p), Error);
}

TEST_CASE("gradient matches finite differences") {
  const RectennaParams p;
  Rng rng(4);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (Index n = 1; n <= 8; ++n) {
    VectorXd s(n), h(n);
    for (Index i = 0; i < n; ++i) {
      s(i) = u(rng);
      h(i) = u(rng);
    }
    const VectorXd g = idc_gradient(s, h, p);
    const VectorXd fd = fd_gradient(s, h, p);
    for (Index i = 0; i < n; ++i) CHECK(rel_err(g(i), fd(i)) <= 1e-6);
  }
}

TEST_CASE("sca_subproblem") {
  VectorXd g(2);
  g << 3.0, 4.0;
  const VectorXd s = sca_subproblem(g, 25.0);
  CHECK(s(0) == doctest::Approx(3.0 * std::sqrt(2.0)));
  CHECK(s(1) == doctest::Approx(4.0 * std::sqrt(2.0)));
  CHECK(0.5 * s.squaredNorm() == doctest::Approx(25.0));

  VectorXd e = VectorXd::Zero(4);
  e(0) = 1.0;
  const VectorXd se = sca_subproblem(e, 8.0);
  CHECK(se(0) == doctest::Approx(4.0));
  CHECK(se.tail(3).norm() == 0.0);

  CHECK_THROWS_AS(sca_subproblem(VectorXd::Zero(3), 1.0), Error);
  g(0) = -1.0;
  CHECK_THROWS_AS(sca_subproblem(g, 1.0), Error);
}

TEST_CASE("sca_subproblem beats random feasible points") {
  Rng rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double p_t = 10.0;
  const VectorXd g = VectorXd::NullaryExpr(5, [&] { return u(rng); });
  const double best = g.dot(sca_subproblem(g, p_t));
  for (int i = 0; i < 10000; ++i) {
    VectorXd s = VectorXd::NullaryExpr(5, [&] { return u(rng); });
    s *= std::sqrt(2.0 * p_t) * u(rng) / s.norm();
    CHECK(g.dot(s) <= best + 1e-12);
  }
}

TEST_CASE("sca_waveform single carrier") {
  const RectennaParams p;
  ScenarioConfig c;
  VectorXcd h(1);
  h << std::polar(0.01, 0.7);
  const ScaTrace t = sca_waveform(h, c, p);
  CHECK(t.converged);
  CHECK(t.iterations.size() <= 2);
  CHECK(t.waveform.amplitudes()(0) == doctest::Approx(std::sqrt(2.0 * c.transmit_power_watts)));
  const double hb2 = std::norm(h(0));
  const double want = p.k2 * c.transmit_power_watts * hb2 +
                      1.5 * p.k4 * c.transmit_power_watts * c.transmit_power_watts * hb2 * hb2;
  CHECK(rel_err(t.idc, want) <= 1e-12);
}

TEST_CASE("sca_waveform flat two-carrier channel") {
  const RectennaParams p;
  ScenarioConfig c;
  c.num_subcarriers = 2;
  VectorXcd h(2);
  h << std::polar(0.01, 0.3), std::polar(0.01, -2.0);
  const ScaTrace t = sca_waveform(h, c, p);
  CHECK(std::abs(t.waveform.amplitudes()(0) - t.waveform.amplitudes()(1)) <= 1e-6);
}

TEST_CASE("sca_waveform properties on random channels") {
  const RectennaParams p;
  ScenarioConfig c;
  Rng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 1 + trial % 8;
    c.num_subcarriers = static_cast<int>(n);
    const VectorXcd h = 0.01 * complex_normal_vector(n, rng);
    const ScaTrace t = sca_waveform(h, c, p);
    CHECK(t.converged);
    for (std::size_t i = 1; i < t.iterations.size(); ++i)
      CHECK(t.iterations[i].idc >= t.iterations[i - 1].idc - 1e-8);
    CHECK(rel_err(t.waveform.power_watts(), c.transmit_power_watts) <= 1e-9);
    for (Index k = 0; k < n; ++k) {
      const cd prod = t.waveform.weights()(k) * h(k);
      CHECK(std::abs(prod.imag()) <= 1e-12 * std::abs(prod));
    }
  }
}

TEST_CASE("sca_waveform reaches the two-carrier grid optimum") {
  const RectennaParams p;
  ScenarioConfig c;
  c.num_subcarriers = 2;
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const VectorXcd h = 0.01 * complex_normal_vector(2, rng);
    const ScaTrace t = sca_waveform(h, c, p);
    CHECK(t.idc >= (1.0 - 1e-3) * grid_oracle_n2(h, c.transmit_power_watts, p, 1000));
  }
}

TEST_CASE("sca_waveform rejects silence and honours the iteration cap") {
  const RectennaParams p;
  ScenarioConfig c;
  CHECK_THROWS_AS(sca_waveform(VectorXcd::Zero(3), c, p), Error);

  c.sca_max_iterations = 1;
  c.sca_tolerance = 1e-15;
  Rng rng(2);
  const ScaTrace t = sca_waveform(0.01 * complex_normal_vector(4, rng), c, p);
  CHECK_FALSE(t.converged);
  CHECK(t.iterations.size() == 1);
}

TEST_CASE("trace csv") {
  ScaTrace t;
  t.iterations = {{1, -2.5, 3.0}, {2, -2.75, 3.5}};
  std::ostringstream os;
  write_trace_csv(os, t);
  CHECK(os.str() == "iteration,xi1,idc\n1,-2.5,3\n2,-2.75,3.5\n");
}
