// Copyright 2026 The pdp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "boost/math/distributions/chi_squared.hpp"
#include "oracle/reference.hpp"
#include "pdp/pdp.hpp"
#include "test_util.hpp"

namespace {

using pdp::Dataset;
using pdp::HyperParams;
using pdp::Weights;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string Fmt(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), fmt, args...);
  return buf;
}

HyperParams SelectionDefaults() {
  HyperParams hp;
  hp.gamma = 0.01;
  hp.sigma = 2.0;
  hp.alpha = 0.01;
  hp.delta = 100.0;
  hp.snr_convention = pdp::SnrConvention::kPaper;
  return hp;
}

Outcome SnrEquivalence() {
  const auto start = Clock::now();
  std::mt19937_64 gen(1001);
  std::uniform_int_distribution<std::size_t> n_dist(2, 50);
  std::uniform_int_distribution<Eigen::Index> d_dist(1, 5);
  const HyperParams hp = SelectionDefaults();
  double worst = 0.0;
  std::size_t checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = n_dist(gen);
    auto inst = pdp::testing::random_instance(gen, n, d_dist(gen));
    for (std::size_t i = 0; i < n; ++i) {
      const double a = pdp::snr_closed_form(inst.ds, i, inst.w, hp).d_v;
      const double b = pdp::snr_definition_form(inst.ds, i, inst.w, hp).d_v;
      worst = std::max(worst, pdp::testing::rel_err(a, b));
      ++checked;
    }
  }
  const double secs = Seconds(start);
  return {worst <= 1e-10 && secs < 5.0,
          Fmt("%zu points, max rel err %.3g (<= 1e-10), %.2f s (< 5 s)",
              checked, worst, secs)};
}

Outcome SelectionOracle() {
  const auto start = Clock::now();
  std::mt19937_64 gen(2002);
  const HyperParams hp = SelectionDefaults();
  int mismatches = 0;
  int selected = 0;
  for (int trial = 0; trial < 200; ++trial) {
    auto inst = pdp::testing::random_instance(gen, 20, 2);
    const auto want = oracle::select_strict(
        pdp::testing::to_oracle(inst.ds), pdp::testing::to_std(inst.w),
        hp.gamma, hp.sigma, hp.alpha, hp.delta);
    const auto got = pdp::find_perfect_deleted_point(inst.ds, inst.w, hp,
                                                     pdp::TieBreak::kPaper);
    const bool same = got.best.has_value() == want.has_value() &&
                      (!want || got.best->position == *want);
    if (!same) ++mismatches;
    if (want) ++selected;
  }
  const double secs = Seconds(start);
  return {mismatches == 0 && secs < 5.0,
          Fmt("200 instances, %d with a selection, %d mismatches, %.2f s "
              "(< 5 s)",
              selected, mismatches, secs)};
}

Outcome AdvantageZeroPoint() {
  double worst_target = 0.0;
  double worst_zero = 0.0;
  for (double alpha : {0.01, 0.05, 0.1}) {
    const double t = 2.0 * pdp::phi_inv(1.0 - alpha);
    worst_target =
        std::max(worst_target, pdp::membership_advantage(t, alpha));
    worst_zero = std::max(
        worst_zero,
        std::abs(pdp::membership_advantage(0.0, alpha) - (1.0 - 2.0 * alpha)));
  }
  return {worst_target <= 1e-10 && worst_zero <= 1e-10,
          Fmt("max adv at target %.3g, max |adv(0) - (1-2a)| %.3g (<= 1e-10)",
              worst_target, worst_zero)};
}

Outcome PrivacyFloorIdentities() {
  bool zero_exact = true;
  for (double alpha : {0.01, 0.05, 0.1}) {
    zero_exact = zero_exact && pdp::privacy_floor(0.0, alpha).eps_lower == 0.0;
  }
  bool nonneg_zero = true;
  for (double alpha : {0.01, 0.05, 0.1}) {
    for (double eps = 0.0; eps <= 20.0; eps += 0.01) {
      nonneg_zero =
          nonneg_zero && pdp::privacy_floor(eps, alpha).eps_lower == 0.0;
    }
  }
  const double got = pdp::privacy_floor(-1.0, 0.05).eps_lower;
  const double want = oracle::privacy_floor(-1.0, 0.05);
  const bool neg_ok = got > 0.0 && std::abs(got - want) <= 1e-6;
  return {zero_exact && nonneg_zero && neg_ok,
          Fmt("pf(0)==0: %s, pf(eps>=0)==0: %s, pf(-1, 0.05) = %.10f "
              "(oracle %.10f)",
              zero_exact ? "yes" : "no", nonneg_zero ? "yes" : "no", got,
              want)};
}

pdp::StepConfig OneStepConfig() {
  pdp::StepConfig cfg;
  cfg.protocol = pdp::Protocol::kNoDelete;
  cfg.steps = 1;
  cfg.iterations = 100;
  cfg.hp = SelectionDefaults();
  cfg.hp.seed = 40;
  cfg.w0 = Weights::Zero(1);
  return cfg;
}

Outcome OneStepVariance() {
  const Dataset ds = pdp::generate(pdp::GenConfig{});
  const auto start = Clock::now();
  const pdp::StepConfig cfg = OneStepConfig();
  const auto r = pdp::run_protocol(cfg, ds);
  const double secs = Seconds(start);
  const double var0 = std::pow(cfg.hp.gamma * cfg.hp.sigma, 2);
  const boost::math::chi_squared chi(99.0);
  const double lo = boost::math::quantile(chi, 0.005) / 99.0 * var0;
  const double hi = boost::math::quantile(chi, 0.995) / 99.0 * var0;
  const double v = r.variance[0];
  return {v >= lo && v <= hi && secs < 1.0,
          Fmt("variance %.4g in [%.4g, %.4g] (reference 0.00046 inside: %s), "
              "%.3f s (< 1 s)",
              v, lo, hi, (0.00046 >= lo && 0.00046 <= hi) ? "yes" : "no",
              secs)};
}

Outcome OneStepMean() {
  const Dataset ds = pdp::generate(pdp::GenConfig{});
  const auto start = Clock::now();
  const pdp::StepConfig cfg = OneStepConfig();
  const auto r = pdp::run_protocol(cfg, ds);
  const double secs = Seconds(start);
  const double want = 2.0 * cfg.hp.gamma * ds.stats().s_yx[0];
  const double tol = 4.0 * cfg.hp.gamma * cfg.hp.sigma / std::sqrt(100.0);
  const double err = std::abs(r.mean[0] - want);
  return {err <= tol && secs < 1.0,
          Fmt("mean %.6f vs 2*gamma*s_yx %.6f, |diff| %.4g (<= %.4g), %.3f s "
              "(< 1 s)",
              r.mean[0], want, err, tol, secs)};
}

Outcome MultiStepRatio() {
  const auto start = Clock::now();
  int passes = 0;
  std::string ratios;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    pdp::GenConfig g;
    g.seed = 39 + seed;
    const Dataset ds = pdp::generate(g);
    pdp::StepConfig cfg;
    cfg.steps = 50;
    cfg.iterations = 100;
    cfg.hp = SelectionDefaults();
    cfg.hp.seed = seed;
    cfg.w0 = Weights::Zero(1);
    cfg.jobs = 4;
    cfg.protocol = pdp::Protocol::kRandomDelete;
    const double v_rand = pdp::run_protocol(cfg, ds).variance[0];
    cfg.protocol = pdp::Protocol::kPerfectDelete;
    const double v_perf = pdp::run_protocol(cfg, ds).variance[0];
    const double ratio = v_rand / v_perf;
    if (ratio >= 3.0) ++passes;
    ratios += Fmt("%s%.1f", ratios.empty() ? "" : " ", ratio);
  }
  const double secs = Seconds(start);
  return {passes >= 8 && secs < 60.0,
          Fmt("%d/10 seeds with ratio >= 3 (need 8), ratios [%s], %.1f s "
              "(< 60 s)",
              passes, ratios.c_str(), secs)};
}

// Each instance fixes a random dataset, weight and point, then picks sigma
// so that the consistent-convention SNR hits a chosen value spread over
// [0.25, 2.2 * target].
Outcome EmpiricalAdvantage() {
  const auto start = Clock::now();
  std::mt19937_64 gen(8008);
  int within = 0;
  double worst_z = 0.0;
  for (int k = 0; k < 20; ++k) {
    auto inst = pdp::testing::random_instance(gen, 10 + 2 * k, 1 + k % 3);
    HyperParams hp;
    hp.gamma = 0.01;
    hp.alpha = k % 2 == 0 ? 0.01 : 0.05;
    hp.snr_convention = pdp::SnrConvention::kConsistent;
    hp.seed = 500 + k;
    const double target = pdp::advantage_target(hp.alpha);
    const double d_want = 0.25 + (2.2 * target - 0.25) * k / 19.0;
    const std::size_t index = k % inst.ds.size();
    hp.sigma = 1.0;
    const double num = pdp::snr_closed_form(inst.ds, index, inst.w, hp).numerator;
    hp.sigma = num / ((static_cast<double>(inst.ds.size()) - 1.0) / 2.0 * d_want);
    const double d = pdp::snr_closed_form(inst.ds, index, inst.w, hp).d_v;
    const double closed = pdp::membership_advantage(d, hp.alpha);
    const auto est =
        pdp::empirical_advantage(inst.ds, index, inst.w, hp, 100000);
    const double z = std::abs(est.estimate - closed) / est.standard_error;
    worst_z = std::max(worst_z, z);
    if (z <= 3.0) ++within;
  }
  const double secs = Seconds(start);
  return {within == 20 && secs < 60.0,
          Fmt("%d/20 within 3 SE, max |z| %.2f, %.1f s (< 60 s)", within,
              worst_z, secs)};
}

Outcome BoundGoldens() {
  std::mt19937_64 gen(9009);
  std::uniform_int_distribution<std::size_t> n_dist(2, 40);
  std::uniform_real_distribution<double> eps_dist(-3.0, 15.0);
  std::uniform_real_distribution<double> gamma_dist(0.001, 0.1);
  std::uniform_real_distribution<double> sigma_dist(0.1, 5.0);
  const double alphas[] = {0.01, 0.05, 0.1};
  double worst = 0.0;
  int contained_a = 0, contained_b = 0, nonneg = 0;
  for (int trial = 0; trial < 50; ++trial) {
    auto inst = pdp::testing::random_instance(gen, n_dist(gen), 1 + trial % 4);
    HyperParams hp;
    hp.gamma = gamma_dist(gen);
    hp.sigma = sigma_dist(gen);
    hp.alpha = alphas[trial % 3];
    const std::size_t i = trial % inst.ds.size();
    const double eps = eps_dist(gen);
    const auto pts = pdp::testing::to_oracle(inst.ds);
    const auto w = pdp::testing::to_std(inst.w);
    const double norm = inst.ds.point(i).x.norm();

    const pdp::RiskBounds b =
        pdp::risk_change_bounds(inst.ds, i, inst.w, hp, eps);
    const auto want = oracle::risk_bounds(pts, w, hp.gamma, hp.sigma, hp.alpha,
                                          eps, norm);
    worst = std::max({worst, pdp::testing::rel_err(b.lower, want.lower),
                      pdp::testing::rel_err(b.upper, want.upper)});

    double b_floor = norm;
    for (const auto& p : inst.ds.points()) b_floor = std::min(b_floor, p.x.norm());
    const pdp::RiskBounds f =
        pdp::risk_change_bounds_floor(inst.ds, i, inst.w, hp, eps, b_floor);
    const auto want_f = oracle::risk_bounds(pts, w, hp.gamma, hp.sigma,
                                            hp.alpha, eps, b_floor);
    worst = std::max({worst, pdp::testing::rel_err(f.lower, want_f.lower),
                      pdp::testing::rel_err(f.upper, want_f.upper)});

    const double pf = pdp::privacy_floor(eps, hp.alpha).eps_lower;
    worst = std::max(worst, std::abs(pf - oracle::privacy_floor(eps, hp.alpha)));

    contained_a += b.contained_a;
    contained_b += b.contained_b;
    nonneg += b.nonnegative_change;
  }
  return {worst <= 1e-10,
          Fmt("50 inputs, max err %.3g (<= 1e-10); containment reported: "
              "A %d/50, B %d/50, nonnegative change %d/50",
              worst, contained_a, contained_b, nonneg)};
}

Outcome LinearScan() {
  const std::vector<double> sizes = {1e3, 1e4, 1e5};
  std::vector<double> times;
  const HyperParams hp = SelectionDefaults();
  for (double n : sizes) {
    std::mt19937_64 gen(static_cast<std::uint64_t>(n));
    auto inst =
        pdp::testing::random_instance(gen, static_cast<std::size_t>(n), 2);
    const int reps = static_cast<int>(2e6 / n);
    double best = 1e300;
    for (int round = 0; round < 5; ++round) {
      const auto start = Clock::now();
      std::size_t sink = 0;
      for (int r = 0; r < reps; ++r) {
        const auto sel = pdp::find_perfect_deleted_point(inst.ds, inst.w, hp);
        sink += sel.best ? sel.best->position : 0;
      }
      const double per_call = Seconds(start) / reps;
      if (sink == static_cast<std::size_t>(-1)) std::puts("");
      best = std::min(best, per_call);
    }
    times.push_back(best);
  }
  const double k = static_cast<double>(sizes.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    mx += sizes[i] / k;
    my += times[i] / k;
  }
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    sxy += (sizes[i] - mx) * (times[i] - my);
    sxx += (sizes[i] - mx) * (sizes[i] - mx);
    syy += (times[i] - my) * (times[i] - my);
  }
  const double r2 = sxy * sxy / (sxx * syy);
  return {r2 >= 0.99,
          Fmt("t(1e3)=%.3g s, t(1e4)=%.3g s, t(1e5)=%.3g s, R^2 %.5f (>= 0.99)",
              times[0], times[1], times[2], r2)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"snr closed form equals definition form", SnrEquivalence},
      {"selection matches exhaustive scan", SelectionOracle},
      {"advantage zero point", AdvantageZeroPoint},
      {"privacy floor identities", PrivacyFloorIdentities},
      {"one-step variance law", OneStepVariance},
      {"one-step mean law", OneStepMean},
      {"multi-step variance ratio", MultiStepRatio},
      {"empirical advantage agreement", EmpiricalAdvantage},
      {"bound formula goldens", BoundGoldens},
      {"linear-scan complexity", LinearScan},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
