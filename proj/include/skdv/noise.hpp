#pragma once

#include <cstdint>
#include <vector>

#include "skdv/grid.hpp"
#include "skdv/rng.hpp"

namespace skdv {

// Trace-class covariance: finitely many nonzero eigenvalues q_k, one per
// wavenumber k = 0..K-1. For k >= 1 the cosine and sine components are driven
// independently with the same weight (translation-invariant covariance), so
// the complex coefficient at k has E|ΔŴ(k)|² = q_k·dt.
struct WienerSpec {
  std::vector<double> q;  // empty = Wiener forcing off
  bool enabled() const { return !q.empty(); }
  int mode_count() const { return int(q.size()); }
  void validate() const;
};

struct MarkDist {
  enum class Kind { uniform, sym_uniform, fixed };
  Kind kind = Kind::fixed;
  double lo = 0.0, hi = 0.0;  // uniform: ξ ~ U(lo,hi); sym_uniform: |ξ| ~ U(lo,hi), random sign
  double value = 0.0;         // fixed

  double sample(rng::Stream& s) const;
  double mean() const;
  double mean_sq() const;
  double min_abs() const;
  double max_abs() const;
  void validate() const;
};

struct LevySpec {
  double rate = 0.0;        // total mass of the simulated small-jump intensity
  MarkDist mark;            // |ξ| in (0,1)
  double large_rate = 0.0;  // intensity mass of marks with |ξ| >= 1
  MarkDist large_mark;
  void validate() const;
};

struct JumpEvent {
  double time = 0.0;
  double mark = 0.0;
  bool is_large = false;
};

enum class GKind { additive, linear_multiplicative };
enum class KKind { additive_mark, linear_mark };
enum class LargeKind { none, additive_mark, linear_mark };

struct CoefficientPreset {
  GKind g_kind = GKind::additive;
  std::vector<double> sigma;  // per-wavenumber amplitude of the Wiener operator
  double beta_g = 0.0;        // multiplicative coupling strength
  int smooth_modes = 4;       // low-mode projection feeding the coupling
  KKind k_kind = KKind::additive_mark;
  SpectralField psi;          // fixed spatial profile of the small-jump operator
  double beta_k = 0.0;
  LargeKind large_kind = LargeKind::none;
  SpectralField psi_large;
  double beta_large = 0.0;
};

// ΔW = Σ_k √(q_k dt) ζ_k e_k over the orthonormal trigonometric basis,
// returned as Fourier coefficients on g. Consumes 1 + 2·(modes-1) Gaussians.
SpectralField sample_wiener_increment(const WienerSpec& spec, const TorusGrid& g,
                                      double dt, rng::Stream& s);

// Small and large arrivals as independent Poisson streams (exponential
// inter-arrival times), merged and sorted. A zero rate draws nothing, so the
// no-large-jump configuration is bitwise identical to interlacing disabled.
std::vector<JumpEvent> sample_jump_times(const LevySpec& spec, double horizon,
                                         rng::Stream& small_times,
                                         rng::Stream& small_marks,
                                         rng::Stream& large_times,
                                         rng::Stream& large_marks);

// Scalar factor of the linear_multiplicative preset: 1 + β_G·|P_m u|_{L²}.
double g_multiplier(const CoefficientPreset& p, const SpectralField& u);

// G(u) applied to an increment (or any U-valued direction given by its
// coefficients): multiplies coefficient k by σ_k, times the state factor for
// the multiplicative preset.
SpectralField apply_G(const CoefficientPreset& p, const SpectralField& u,
                      const SpectralField& dw);

// Closed form of Σ_k ‖G(u) √(q_k) e_k‖²_{H^s} (Hilbert–Schmidt over the
// covariance-weighted basis).
double g_hs_norm_sq(const CoefficientPreset& p, const WienerSpec& spec,
                    const SpectralField& u, double s);

// K(u, ξ) for |ξ| in (0,1): additive_mark → ξ·ψ, linear_mark → ξ·(ψ + β_K u).
SpectralField apply_K(const CoefficientPreset& p, const SpectralField& u,
                      double mark);

// ∫ K(u,ξ) dν(ξ) = rate·E[ξ]·(ψ [+ β_K u]); closed form since marks enter
// linearly.
SpectralField compensator_drift(const CoefficientPreset& p, const LevySpec& spec,
                                const SpectralField& u);

// Post-jump state u + 𝒦(u, ξ) for |ξ| >= 1; no growth assumptions imposed.
SpectralField apply_large_jump(const CoefficientPreset& p,
                               const SpectralField& u, double mark);

// Numeric certification of the linear-growth/Lipschitz assumption family over
// random fields spanning a range of norms; constants reported at half and
// full sample count so stability under doubling is observable.
struct AssumptionReport {
  double kappa1 = 0.0, kappa2 = 0.0, lipschitz_c = 0.0;
  double kappa1_half = 0.0, kappa2_half = 0.0, lipschitz_half = 0.0;
  bool pass = false;
  int sample_count = 0;
};

AssumptionReport validate_assumptions(const CoefficientPreset& p,
                                      const WienerSpec& w, const LevySpec& l,
                                      const TorusGrid& g, int sample_count,
                                      uint64_t seed);

}  // namespace skdv
