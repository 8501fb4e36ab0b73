// Experiment-level reports: exponential decay fits, invariant drift, moment
// curves, the injection/damping balance, inequality audits, and coupled-path
// sensitivity.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "skdv/estimates.hpp"
#include "skdv/spectral.hpp"

using namespace skdv;

namespace {

SimConfig quiet_config(int n_modes) {
  SimConfig cfg;
  cfg.grid = TorusGrid::with_default_points(n_modes);
  cfg.model.gamma = 0.5;
  cfg.model.cutoff = CutoffProfile(100.0);
  cfg.dt = 1e-3;
  cfg.horizon = 1.0;
  cfg.seed = 2;
  cfg.initial.kind = InitialCondition::Kind::single_mode;
  cfg.initial.mode = 1;
  cfg.initial.amp = 1.0;
  return cfg;
}

}  // namespace

TEST_CASE("pure damping follows the closed-form exponential to rounding") {
  SimConfig cfg = quiet_config(32);
  cfg.model.gamma = 1.0;
  const DecayReport rep = decay_test(cfg);
  CHECK_FALSE(rep.trivial_zero);
  CHECK(rep.expected_rate == 1.0);
  // The norm-preserving nonlinear correction plus the exact linear factor
  // keep |u|_{L2} on the exponential up to accumulated rounding.
  CHECK(rep.max_rel_err < 1e-10);
  CHECK(rep.fitted_rate == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("hyperviscosity adds k^4 to the decay rate of a pure mode") {
  SimConfig cfg = quiet_config(16);
  cfg.model.gamma = 0.3;
  cfg.model.epsilon = 1e-3;
  // Pin the taper at zero so the single mode stays pure and decays at
  // exactly gamma + epsilon k^4.
  cfg.model.cutoff = CutoffProfile(1e-300);
  cfg.initial.mode = 2;
  const DecayReport rep = decay_test(cfg);
  CHECK(rep.expected_rate == doctest::Approx(0.3 + 1e-3 * 16.0).epsilon(1e-15));
  CHECK(rep.max_rel_err < 1e-10);
  CHECK(rep.fitted_rate == doctest::Approx(rep.expected_rate).epsilon(1e-6));
}

TEST_CASE("undamped runs fit a zero rate and zero initial data is flagged") {
  SimConfig cfg = quiet_config(16);
  cfg.model.gamma = 0.0;
  const DecayReport flat = decay_test(cfg);
  CHECK(flat.expected_rate == 0.0);
  CHECK(std::abs(flat.fitted_rate) < 1e-8);
  CHECK(flat.max_rel_err < 1e-10);

  cfg.initial.kind = InitialCondition::Kind::zero;
  const DecayReport zero = decay_test(cfg);
  CHECK(zero.trivial_zero);
  CHECK(zero.max_rel_err == 0.0);

  cfg.wiener.q = {0.1};
  cfg.preset.sigma = {0.1};
  CHECK_THROWS_AS(decay_test(cfg), std::invalid_argument);
}

TEST_CASE("conserved functionals drift at the splitting order only") {
  SimConfig cfg = quiet_config(64);
  cfg.model.gamma = 0.0;
  cfg.model.cutoff = CutoffProfile{};  // auto: resolved from the start state
  cfg.initial.kind = InitialCondition::Kind::soliton_like;
  cfg.initial.amp = 3.0;
  cfg.dt = 5e-4;
  cfg.horizon = 0.25;
  cfg.record_stride = 50;

  const ConservationReport rep = conservation_test(cfg);
  CHECK(rep.drift_i0 < 1e-10);  // the quadratic invariant is kept exactly
  CHECK(rep.drift_i1 < 1e-2);
  CHECK(rep.drift_i2 < 1e-2);
  CHECK(rep.drift_i1 > 0.0);

  SimConfig half = cfg;
  half.dt = 2.5e-4;
  half.record_stride = 100;
  const ConservationReport fine = conservation_test(half);
  // First-order one-step error: halving dt should shrink the cubic and
  // quartic drifts by roughly two.
  CHECK(rep.drift_i1 / fine.drift_i1 > 1.5);
  CHECK(rep.drift_i2 / fine.drift_i2 > 1.5);

  SimConfig noisy = cfg;
  noisy.jumps.rate = 1.0;
  noisy.jumps.mark = {MarkDist::Kind::uniform, 0.2, 0.8, 0.0};
  CHECK_THROWS_AS(conservation_test(noisy), std::invalid_argument);
}

TEST_CASE("a zero start conserves everything exactly") {
  SimConfig cfg = quiet_config(16);
  cfg.model.gamma = 0.0;
  cfg.initial.kind = InitialCondition::Kind::zero;
  const ConservationReport rep = conservation_test(cfg);
  CHECK(rep.drift_i0 == 0.0);
  CHECK(rep.drift_i1 == 0.0);
  CHECK(rep.drift_i2 == 0.0);
}

TEST_CASE("noise-free moment curves are flat sups with zero spread") {
  SimConfig cfg = quiet_config(16);
  cfg.record_stride = 100;
  const MomentLedger led = moment_sweep(cfg, {2, 4}, 3, 1);
  CHECK(led.times == record_grid(cfg));
  CHECK(led.blowups == 0);
  CHECK(led.all_finite);
  REQUIRE(led.e_sup_lp.size() == 2);
  const double l0 = hs_norm(make_initial(cfg.grid, cfg.initial), 0.0);
  for (std::size_t i = 0; i < led.times.size(); ++i) {
    // Damping only: the running sup of |u|_{L2} is pinned at time zero.
    CHECK(led.e_sup_lp[0][i] == doctest::Approx(l0 * l0).epsilon(1e-10));
    CHECK(led.e_sup_lp[1][i] ==
          doctest::Approx(l0 * l0 * l0 * l0).epsilon(1e-10));
    CHECK(led.e_sup_lp_se[0][i] <= 1e-12);
    CHECK(led.e_h1_sq_se[i] <= 1e-12);
  }
  CHECK(led.e_h1_sq.back() < led.e_h1_sq.front());
  CHECK(led.e_h2_sq.back() < led.e_h2_sq.front());

  CHECK_THROWS_AS(moment_sweep(cfg, {0}, 3, 1), std::invalid_argument);
  CHECK_THROWS_AS(moment_sweep(cfg, {2}, 0, 1), std::invalid_argument);
}

TEST_CASE("driven moment curves rise monotonically with finite spread") {
  SimConfig cfg = quiet_config(16);
  cfg.initial.kind = InitialCondition::Kind::zero;
  cfg.wiener.q = {0.5, 0.4};
  cfg.preset.g_kind = GKind::additive;
  cfg.preset.sigma = {0.3, 0.2};
  cfg.horizon = 0.5;
  cfg.record_stride = 50;
  const MomentLedger led = moment_sweep(cfg, {2}, 16, 1);
  CHECK(led.all_finite);
  CHECK(led.blowups == 0);
  for (std::size_t i = 1; i < led.times.size(); ++i)
    CHECK(led.e_sup_lp[0][i] >= led.e_sup_lp[0][i - 1]);
  CHECK(led.e_sup_lp[0].back() > 0.0);
  CHECK(led.e_sup_lp_se[0].back() > 0.0);
}

TEST_CASE("the closed-form balance level is the hand-computed quotient") {
  SimConfig cfg = quiet_config(16);
  cfg.model.gamma = 2.0;
  cfg.wiener.q = {1.0, 0.5};
  cfg.preset.g_kind = GKind::additive;
  cfg.preset.sigma = {0.1, 0.2};
  // Injection: 1*1*0.01 + 2*0.5*0.04 = 0.05; level = 0.05 / 4.
  CHECK(closed_form_balance_level(cfg) == doctest::Approx(0.0125).epsilon(1e-12));

  cfg.jumps.rate = 3.0;
  cfg.jumps.mark = {MarkDist::Kind::uniform, 0.2, 0.8, 0.0};
  cfg.preset.k_kind = KKind::additive_mark;
  cfg.preset.psi = SpectralField(cfg.grid);
  cfg.preset.psi.c[1] = cxd{0.0, -0.3};
  // E[xi^2] = (0.2^2 + 0.2*0.8 + 0.8^2)/3 = 0.28; |psi|^2 = 2*0.09 = 0.18.
  const double expect = (0.05 + 3.0 * 0.28 * 0.18) / 4.0;
  CHECK(closed_form_balance_level(cfg) == doctest::Approx(expect).epsilon(1e-12));

  SimConfig bad = cfg;
  bad.model.gamma = 0.0;
  CHECK_THROWS_AS(closed_form_balance_level(bad), std::invalid_argument);
  bad = cfg;
  bad.preset.g_kind = GKind::linear_multiplicative;
  CHECK_THROWS_AS(closed_form_balance_level(bad), std::invalid_argument);
  bad = cfg;
  bad.preset.k_kind = KKind::linear_mark;
  bad.preset.beta_k = 0.5;
  CHECK_THROWS_AS(closed_form_balance_level(bad), std::invalid_argument);
  bad = cfg;
  bad.jumps.large_rate = 0.5;
  bad.jumps.large_mark = {MarkDist::Kind::fixed, 0.0, 0.0, 1.5};
  CHECK_THROWS_AS(closed_form_balance_level(bad), std::invalid_argument);
}

TEST_CASE("a stationary window reproduces the balance level") {
  SimConfig cfg = quiet_config(16);
  cfg.model.gamma = 2.0;
  cfg.initial.kind = InitialCondition::Kind::zero;
  cfg.wiener.q = {1.0, 0.5};
  cfg.preset.g_kind = GKind::additive;
  cfg.preset.sigma = {0.3, 0.25};
  cfg.jumps.rate = 1.0;
  cfg.jumps.mark = {MarkDist::Kind::uniform, 0.2, 0.8, 0.0};
  cfg.preset.k_kind = KKind::additive_mark;
  cfg.preset.psi = SpectralField(cfg.grid);
  cfg.preset.psi.c[1] = cxd{0.0, -0.2};
  cfg.dt = 5e-3;
  cfg.horizon = 8.0;
  cfg.record_stride = 10;

  const BalanceReport rep = stationary_balance_test(cfg, 60, 1);
  CHECK(rep.paths == 60);
  CHECK(rep.closed_form > 0.0);
  CHECK(rep.mc_se > 0.0);
  CHECK(rep.rel_err < 0.25);

  CHECK_THROWS_AS(stationary_balance_test(cfg, 4, 1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(stationary_balance_test(cfg, 4, 1, 1.5), std::invalid_argument);
}

TEST_CASE("interpolation ratios are sharp and never exceed one") {
  const TorusGrid g = TorusGrid::with_default_points(32);
  const InequalityAudit rep = inequality_audit(g, 256, 9);
  CHECK(rep.samples == 256);
  REQUIRE(rep.interp.size() == 3);
  for (const auto& pair : rep.interp) {
    // Every tracked pair satisfies s = 2*theta, so the intermediate-norm
    // bound is an exact Hoelder identity: ratios stay below one and the
    // pure-mode samples touch it.
    CHECK(pair.s == doctest::Approx(2.0 * pair.theta).epsilon(1e-15));
    CHECK(pair.max_ratio <= 1.0 + 1e-9);
    CHECK(pair.max_ratio >= 1.0 - 1e-9);
    CHECK(pair.max_ratio_half <= pair.max_ratio);
    CHECK(pair.max_ratio_half > 0.0);
  }
  CHECK(rep.agmon_max > 0.3);
  CHECK(rep.agmon_max < 2.0);
  CHECK(rep.agmon_max_half <= rep.agmon_max);
  CHECK_THROWS_AS(inequality_audit(g, 4, 9), std::invalid_argument);
}

TEST_CASE("noise-free sensitivity is linear in the kick size") {
  SimConfig cfg = quiet_config(16);
  cfg.dt = 0.01;
  cfg.horizon = 0.3;
  const StabilityReport rep =
      stability_experiment(cfg, {1e-2, 1e-3, 1e-4}, 2);
  REQUIRE(rep.entries.size() == 3);
  CHECK(rep.max_identical_gap == 0.0);
  double lo = 1e300, hi = 0.0;
  for (const auto& e : rep.entries) {
    lo = std::min(lo, e.max_ratio);
    hi = std::max(hi, e.max_ratio);
    CHECK(e.max_ratio > 0.0);
  }
  // The linearized response makes sup|w|/delta nearly delta-independent.
  CHECK(hi / lo < 1.2);
  CHECK(rep.max_ratio < 3.0);

  CHECK_THROWS_AS(stability_experiment(cfg, {0.0}, 2), std::invalid_argument);
  CHECK_THROWS_AS(stability_experiment(cfg, {1e-3}, 0), std::invalid_argument);
}

TEST_CASE("driven sensitivity stays bounded across seeds") {
  SimConfig cfg = quiet_config(12);
  cfg.dt = 0.01;
  cfg.horizon = 0.3;
  cfg.wiener.q = {1.0, 1.0};
  cfg.preset.g_kind = GKind::linear_multiplicative;
  cfg.preset.sigma = {0.3, 0.2};
  cfg.preset.beta_g = 0.5;
  const StabilityReport rep = stability_experiment(cfg, {1e-3}, 3);
  REQUIRE(rep.entries.size() == 1);
  CHECK(rep.entries[0].ratios.size() == 3);
  CHECK(rep.max_identical_gap == 0.0);
  double lo = 1e300, hi = 0.0;
  for (double r : rep.entries[0].ratios) {
    CHECK(std::isfinite(r));
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  CHECK(hi / lo < 5.0);
}
