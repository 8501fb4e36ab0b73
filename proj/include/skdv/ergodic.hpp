#pragma once

#include <cstdint>
#include <vector>

#include "skdv/integrator.hpp"

namespace skdv {

// Moment-drift margins:
//   C̃_p  = (p² − p)·2^(p−3)
//   η(p)  = γp − (p(p−1)κ₁ + 3·C̃_p·κ₂)
//   η''   = (197/50)γ − κ₁ − κ₂
struct DissipationReport {
  int p = 0;
  double c_tilde = 0.0;
  double eta = 0.0;
  double eta_second = 0.0;
  bool positive = false;
  bool second_positive = false;
};
DissipationReport eta_threshold(double gamma, double kappa1, double kappa2, int p);

enum class Observable { l2_sq, h1_sq, h2_sq, i2, re_mode1 };
double eval_observable(Observable o, const SpectralField& u);
const char* observable_name(Observable o);
Observable observable_from_name(const std::string& name);

// Monte Carlo E[φ(u_t)] over iid paths; each sample is clipped at `clip` so
// one excursion cannot poison the mean (clip count reported).
struct SemigroupEstimate {
  double mean = 0.0, se = 0.0;
  int clipped = 0;
  int paths = 0;
};
SemigroupEstimate semigroup_estimate(const SimConfig& cfg, Observable phi,
                                     int paths, int threads, double clip = 1e6);

// Trajectory time averages of the observables, full-horizon and past a
// burn-in, aggregated over paths.
struct TimeAverageReport {
  std::vector<Observable> observables;
  std::vector<double> full_mean, full_se;
  std::vector<double> burned_mean, burned_se;
  double burn_in = 0.0;
  int paths = 0;
  int blowups = 0;
};
TimeAverageReport time_average(const SimConfig& cfg,
                               const std::vector<Observable>& observables,
                               double burn_in, int paths, int threads);

// One ensemble pass powering the occupation diagnostics:
//  - tail fractions of the post-burn-in H² occupation beyond each radius,
//    against the Chebyshev ceiling mean(|u|²_{H²})/R²;
//  - the running integral t ↦ ∫₀ᵗ mean|u|²_{H²} ds with a linear fit over the
//    second half (slope = the long-run H² dissipation level).
struct LongRunReport {
  std::vector<double> radii, tail_fraction, tail_se, chebyshev;
  std::vector<double> checkpoint_times, h2_integral;
  double fit_slope = 0.0, fit_intercept = 0.0, fit_residual_frac = 0.0;
  double mean_h2_sq = 0.0;
  int paths = 0;
  long long occupation_samples = 0;
  int blowups = 0;
};
LongRunReport ergodic_long_run(const SimConfig& cfg, const std::vector<double>& radii,
                               double burn_in, int paths, int threads);

}  // namespace skdv
