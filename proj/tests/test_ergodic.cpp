// Long-time statistics: moment-dissipation thresholds, observables, terminal
// ensemble means, time averages, and the occupation/tightness report.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "skdv/ergodic.hpp"
#include "skdv/functionals.hpp"
#include "skdv/integrator.hpp"
#include "skdv/spectral.hpp"

using namespace skdv;

namespace {

SimConfig additive_config(int n_modes) {
  SimConfig cfg;
  cfg.grid = TorusGrid::with_default_points(n_modes);
  cfg.model.gamma = 2.0;
  cfg.model.cutoff = CutoffProfile(100.0);
  cfg.initial.kind = InitialCondition::Kind::zero;
  cfg.wiener.q = {1.0, 0.5};
  cfg.preset.g_kind = GKind::additive;
  cfg.preset.sigma = {0.3, 0.25};
  cfg.dt = 5e-3;
  cfg.horizon = 1.0;
  cfg.seed = 21;
  return cfg;
}

// Exact second-moment recursion for additive coefficients, no fourth-order
// term, zero start: E|u_n|² = L (1 - e^{-2γ n dt}) with
// L = D dt e^{-2γ dt} / (1 - e^{-2γ dt}), D = q₀σ₀² + Σ_{k≥1} 2 q_k σ_k².
double discrete_l2_level(const SimConfig& cfg) {
  double d = cfg.wiener.q[0] * cfg.preset.sigma[0] * cfg.preset.sigma[0];
  for (std::size_t k = 1; k < cfg.preset.sigma.size() && k < cfg.wiener.q.size();
       ++k)
    d += 2.0 * cfg.wiener.q[k] * cfg.preset.sigma[k] * cfg.preset.sigma[k];
  const double e = std::exp(-2.0 * cfg.model.gamma * cfg.dt);
  return d * cfg.dt * e / (1.0 - e);
}

}  // namespace

TEST_CASE("dissipation thresholds match the hand-computed table") {
  // c_tilde(p) = (p² - p) 2^{p-3}
  CHECK(eta_threshold(1.0, 0.0, 0.0, 2).c_tilde == 1.0);
  CHECK(eta_threshold(1.0, 0.0, 0.0, 4).c_tilde == 24.0);
  CHECK(eta_threshold(1.0, 0.0, 0.0, 6).c_tilde == 240.0);
  CHECK(eta_threshold(1.0, 0.0, 0.0, 8).c_tilde == 1792.0);

  const DissipationReport r2 = eta_threshold(1.0, 0.1, 0.05, 2);
  CHECK(r2.eta == doctest::Approx(2.0 - (2.0 * 0.1 + 3.0 * 1.0 * 0.05)).epsilon(1e-15));
  CHECK(r2.eta_second == doctest::Approx(197.0 / 50.0 - 0.15).epsilon(1e-15));
  CHECK(r2.positive);
  CHECK(r2.second_positive);

  const DissipationReport r4 = eta_threshold(1.0, 0.1, 0.05, 4);
  CHECK(r4.eta == doctest::Approx(4.0 - (12.0 * 0.1 + 72.0 * 0.05)).epsilon(1e-12));
  CHECK_FALSE(r4.positive);

  const DissipationReport r0 = eta_threshold(0.0, 0.1, 0.05, 2);
  CHECK_FALSE(r0.positive);
  CHECK_FALSE(r0.second_positive);

  CHECK_THROWS_AS(eta_threshold(1.0, 0.1, 0.05, 1), std::invalid_argument);
  CHECK_THROWS_AS(eta_threshold(-1.0, 0.1, 0.05, 2), std::invalid_argument);
  CHECK_THROWS_AS(eta_threshold(1.0, -0.1, 0.05, 2), std::invalid_argument);
}

TEST_CASE("observables evaluate and round-trip their names") {
  const TorusGrid g = TorusGrid::with_default_points(16);
  SpectralField u(g);
  u.c[1] = cxd{0.25, -std::sqrt(0.25 * kTwoPi)};  // sin(x) plus a real part
  CHECK(eval_observable(Observable::l2_sq, u) ==
        doctest::Approx(hs_norm_sq(u, 0.0)).epsilon(1e-15));
  CHECK(eval_observable(Observable::h1_sq, u) ==
        doctest::Approx(hs_norm_sq(u, 1.0)).epsilon(1e-15));
  CHECK(eval_observable(Observable::h2_sq, u) ==
        doctest::Approx(hs_norm_sq(u, 2.0)).epsilon(1e-15));
  CHECK(eval_observable(Observable::i2, u) ==
        doctest::Approx(functional_I2(u)).epsilon(1e-15));
  CHECK(eval_observable(Observable::re_mode1, u) == 0.25);

  for (Observable o : {Observable::l2_sq, Observable::h1_sq, Observable::h2_sq,
                       Observable::i2, Observable::re_mode1})
    CHECK(observable_from_name(observable_name(o)) == o);
  CHECK_THROWS_AS(observable_from_name("energy"), std::invalid_argument);
}

TEST_CASE("a zero-length horizon returns the initial observable exactly") {
  SimConfig cfg = additive_config(16);
  cfg.horizon = 0.0;
  cfg.initial.kind = InitialCondition::Kind::single_mode;
  cfg.initial.mode = 1;
  cfg.initial.amp = 1.0;
  const SemigroupEstimate est = semigroup_estimate(cfg, Observable::l2_sq, 8, 1);
  CHECK(est.paths == 8);
  CHECK(est.clipped == 0);
  // |sin|² = π for every path
  CHECK(est.mean == doctest::Approx(0.5 * kTwoPi).epsilon(1e-12));
  CHECK(est.se <= 1e-12);
}

TEST_CASE("noise-free terminal means are deterministic") {
  SimConfig cfg = additive_config(16);
  cfg.wiener.q.clear();
  cfg.preset.sigma.clear();
  cfg.model.gamma = 0.5;
  cfg.initial.kind = InitialCondition::Kind::single_mode;
  cfg.initial.mode = 1;
  cfg.initial.amp = 1.0;
  cfg.dt = 1e-3;
  const SemigroupEstimate est = semigroup_estimate(cfg, Observable::l2_sq, 4, 1);
  // pure damping: |u(T)|² = e^{-2γT} |u₀|²
  CHECK(est.mean ==
        doctest::Approx(std::exp(-1.0) * 0.5 * kTwoPi).epsilon(1e-10));
  CHECK(est.se <= 1e-12);
  CHECK(est.clipped == 0);
}

TEST_CASE("additive terminal means match the discrete second-moment recursion") {
  SimConfig cfg = additive_config(16);
  const SemigroupEstimate est =
      semigroup_estimate(cfg, Observable::l2_sq, 200, 1);
  const double level = discrete_l2_level(cfg);
  const double steps = std::round(cfg.horizon / cfg.dt);
  const double expect =
      level * (1.0 - std::exp(-2.0 * cfg.model.gamma * steps * cfg.dt));
  CHECK(est.clipped == 0);
  CHECK(est.se > 0.0);
  CHECK(std::abs(est.mean - expect) <= 4.0 * est.se);
}

TEST_CASE("the clip guard engages and is reported") {
  SimConfig cfg = additive_config(8);
  cfg.wiener.q.clear();
  cfg.preset.sigma.clear();
  cfg.model.gamma = 0.0;
  cfg.initial.kind = InitialCondition::Kind::single_mode;
  cfg.initial.amp = 1.0;
  cfg.horizon = 0.1;
  const SemigroupEstimate est =
      semigroup_estimate(cfg, Observable::l2_sq, 3, 1, 1e-6);
  CHECK(est.clipped == 3);
  CHECK(est.mean == doctest::Approx(1e-6).epsilon(1e-12));

  CHECK_THROWS_AS(semigroup_estimate(cfg, Observable::l2_sq, 0, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(semigroup_estimate(cfg, Observable::l2_sq, 3, 1, 0.0),
                  std::invalid_argument);
}

TEST_CASE("time averages agree with a hand trapezoid over the same records") {
  SimConfig cfg = additive_config(16);
  cfg.dt = 0.01;
  cfg.horizon = 1.0;
  const TrajectoryRecord rec = run(cfg, 0);
  REQUIRE_FALSE(rec.blew_up);

  const TimeAverageReport rep =
      time_average(cfg, {Observable::l2_sq}, 0.0, 1, 1);
  CHECK(rep.blowups == 0);
  double integral = 0.0;
  for (std::size_t i = 1; i < rec.times.size(); ++i)
    integral += 0.5 * (rec.l2[i] * rec.l2[i] + rec.l2[i - 1] * rec.l2[i - 1]) *
                (rec.times[i] - rec.times[i - 1]);
  const double manual = integral / (rec.times.back() - rec.times.front());
  CHECK(rep.full_mean[0] == doctest::Approx(manual).epsilon(1e-12));
  CHECK(rep.burned_mean[0] == doctest::Approx(manual).epsilon(1e-12));
  CHECK(rep.full_se[0] == 0.0);

  const double burn = 0.5;
  const TimeAverageReport late =
      time_average(cfg, {Observable::l2_sq}, burn, 1, 1);
  double bi = 0.0, blen = 0.0;
  for (std::size_t i = 1; i < rec.times.size(); ++i)
    if (rec.times[i - 1] >= burn) {
      bi += 0.5 * (rec.l2[i] * rec.l2[i] + rec.l2[i - 1] * rec.l2[i - 1]) *
            (rec.times[i] - rec.times[i - 1]);
      blen += rec.times[i] - rec.times[i - 1];
    }
  CHECK(late.burned_mean[0] == doctest::Approx(bi / blen).epsilon(1e-12));
  CHECK(late.full_mean[0] == doctest::Approx(manual).epsilon(1e-12));

  CHECK_THROWS_AS(time_average(cfg, {Observable::l2_sq}, 1.0, 1, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(time_average(cfg, {}, 0.0, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(time_average(cfg, {Observable::l2_sq}, 0.0, 0, 1),
                  std::invalid_argument);
}

TEST_CASE("the occupation report obeys its own sample-wise bounds") {
  SimConfig cfg = additive_config(16);
  cfg.horizon = 4.0;
  cfg.record_stride = 10;
  const std::vector<double> radii{0.05, 0.1, 0.2, 0.4, 0.8};
  const int paths = 30;
  const LongRunReport rep = ergodic_long_run(cfg, radii, 2.0, paths, 1);

  CHECK(rep.blowups == 0);
  CHECK(rep.paths == paths);
  CHECK(rep.checkpoint_times == record_grid(cfg));
  CHECK(rep.mean_h2_sq > 0.0);
  CHECK(rep.occupation_samples == 41 * paths);

  REQUIRE(rep.tail_fraction.size() == radii.size());
  for (std::size_t r = 1; r < radii.size(); ++r)
    CHECK(rep.tail_fraction[r] <= rep.tail_fraction[r - 1]);
  // Markov/Chebyshev on the empirical measure holds sample-wise by
  // construction: 1{X > r²} <= X / r².
  for (std::size_t r = 0; r < radii.size(); ++r)
    CHECK(rep.tail_fraction[r] <= rep.chebyshev[r] + 1e-12);
  CHECK(rep.tail_fraction.back() < 0.05);

  for (std::size_t i = 1; i < rep.h2_integral.size(); ++i)
    CHECK(rep.h2_integral[i] >= rep.h2_integral[i - 1]);
  CHECK(rep.fit_slope > 0.0);
  CHECK(rep.fit_residual_frac < 0.2);

  CHECK_THROWS_AS(ergodic_long_run(cfg, {}, 2.0, 2, 1), std::invalid_argument);
  CHECK_THROWS_AS(ergodic_long_run(cfg, {-1.0}, 2.0, 2, 1), std::invalid_argument);
  CHECK_THROWS_AS(ergodic_long_run(cfg, radii, 4.0, 2, 1), std::invalid_argument);
  CHECK_THROWS_AS(ergodic_long_run(cfg, radii, 2.0, 0, 1), std::invalid_argument);
}
