#pragma once

#include "skdv/grid.hpp"

namespace skdv {

// Smooth switch: 1 on [0, radius/2], 0 on [radius, ∞), C^∞ in between via the
// bump quotient θ(t) = ψ(1-t) / (ψ(1-t) + ψ(t-1/2)), ψ(s) = e^{-1/s} (s > 0).
// Symmetric about t = 3/4, so the profile crosses 1/2 at x = 3·radius/4.
// Slope is bounded by kCutoffSlopeBound / radius.
struct CutoffProfile {
  double radius = 0.0;
  explicit CutoffProfile(double r);
  CutoffProfile() = default;
  double operator()(double x) const;
};

// Max slope of the reference profile θ on [0,1], rounded up (measured ≈ 8).
inline constexpr double kCutoffSlopeBound = 9.0;

double cutoff_eval(const CutoffProfile& p, double x);

// ∫ v² dx
double functional_I0(const SpectralField& v);
// ∫ ½(∂ₓv)² − (1/12) v³ dx
double functional_I1(const SpectralField& v);
// ∫ (∂²ₓv)² − (5/3) v (∂ₓv)² + (5/36) v⁴ dx
double functional_I2(const SpectralField& v);

// ⟨I₂'(v), w⟩ = ∫ 2 ∂²ₓv ∂²ₓw − (5/3)(∂ₓv)² w − (5/3) ∂ₓ(v²) ∂ₓw + (5/9) v³ w dx
double frechet_I2_first(const SpectralField& v, const SpectralField& w);

// ⟨I₂''(v)h, w⟩ = ∫ 2 ∂²ₓh ∂²ₓw − (10/3)(∂ₓv ∂ₓh w + ∂ₓv h ∂ₓw + v ∂ₓh ∂ₓw)
//                 + (5/3) v² h w dx     (symmetric in h, w)
double frechet_I2_second(const SpectralField& v, const SpectralField& h,
                         const SpectralField& w);

}  // namespace skdv
