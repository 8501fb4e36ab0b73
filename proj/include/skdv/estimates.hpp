#pragma once

#include <cstdint>
#include <vector>

#include "skdv/integrator.hpp"

namespace skdv {

// Damping-only decay: noise off, fits the exponential rate of the L² series
// and reports the worst pointwise deviation from the closed form.
struct DecayReport {
  double fitted_rate = 0.0;
  double expected_rate = 0.0;
  double max_rel_err = 0.0;
  bool trivial_zero = false;
};
DecayReport decay_test(const SimConfig& cfg);

// Noise-free drift of the three conserved functionals, normalized by
// max(1, |I_k(u₀)|).
struct ConservationReport {
  double drift_i0 = 0.0, drift_i1 = 0.0, drift_i2 = 0.0;
};
ConservationReport conservation_test(const SimConfig& cfg);

// Ensemble moment curves on the regular record grid: E sup_{s<=t} |u(s)|^p_{L²}
// for each requested p, plus E|u(t)|²_{H¹} and E|u(t)|²_{H²}.
struct MomentLedger {
  std::vector<double> times;
  std::vector<int> p_values;
  std::vector<std::vector<double>> e_sup_lp, e_sup_lp_se;  // [p_index][time]
  std::vector<double> e_h1_sq, e_h1_sq_se;
  std::vector<double> e_h2_sq, e_h2_sq_se;
  int paths = 0;
  int blowups = 0;
  bool all_finite = false;
};
MomentLedger moment_sweep(const SimConfig& cfg, const std::vector<int>& p_values,
                          int paths, int threads);

// Long-run mean of |u|²_{L²} against the injection/damping quotient
//   (Σ_k mult_k q_k σ_k² + λ E[ξ²] |ψ|²_{L²}) / (2γ),
// valid for state-independent noise coefficients and no large jumps.
struct BalanceReport {
  double closed_form = 0.0;
  double mc_mean = 0.0;
  double mc_se = 0.0;
  double rel_err = 0.0;
  int paths = 0;
};
double closed_form_balance_level(const SimConfig& cfg);
BalanceReport stationary_balance_test(const SimConfig& cfg, int paths, int threads,
                                      double window_frac = 0.5);

// Sampled sharp-constant audit: sup-norm versus the L²/H¹ product, and the
// intermediate-norm interpolation ratios at the three tracked exponents.
// Maxima are recorded at half and full sample count.
struct InequalityAudit {
  struct Pair {
    double s = 0.0, theta = 0.0;
    double max_ratio = 0.0, max_ratio_half = 0.0;
  };
  double agmon_max = 0.0, agmon_max_half = 0.0;
  std::vector<Pair> interp;
  int samples = 0;
};
InequalityAudit inequality_audit(const TorusGrid& g, int samples, uint64_t seed);

// Coupled-path sensitivity: perturb the initial state by delta·sin(x), drive
// both copies with identical noise, and report sup_t |w(t)|_{L²} / delta per
// seed. identical_gap is the worst recorded gap when both copies start equal
// (must be exactly zero).
struct StabilityReport {
  struct Entry {
    double delta = 0.0;
    std::vector<double> ratios;
    double max_ratio = 0.0;
    double identical_gap = 0.0;
  };
  std::vector<Entry> entries;
  double max_ratio = 0.0;
  double max_identical_gap = 0.0;
};
StabilityReport stability_experiment(const SimConfig& cfg,
                                     const std::vector<double>& deltas,
                                     int n_seeds);

}  // namespace skdv
