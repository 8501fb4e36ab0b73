#pragma once

#include <vector>

#include "skdv/grid.hpp"

namespace skdv {

// Quadrature transform on the uniform grid; exact for band-limited inputs.
// samples.size() must equal g.n_points.
SpectralField forward_transform(const TorusGrid& g,
                                const std::vector<double>& samples);

// Collocation samples v(x_j), j = 0..n_points-1.
std::vector<double> inverse_transform(const SpectralField& f);

// Coefficients (in)^order * v̂(n).
SpectralField derivative(const SpectralField& f, int order);

// sqrt( Σ_n (1+|n|^2)^s |v̂(n)|^2 ), both signs of n counted.
double hs_norm(const SpectralField& f, double s);
// The same sum without the square root (avoids sqrt/square round trips).
double hs_norm_sq(const SpectralField& f, double s);

// Zero all coefficients with |n| > m. 0 <= m <= n_modes.
SpectralField project(const SpectralField& f, int m);

// Spectral coefficients of f*g via the padded collocation grid; alias-free on
// the retained band since n_points >= 3*n_modes + 1.
SpectralField pointwise_product(const SpectralField& f, const SpectralField& g);

// ∫ v dx over the torus via the quadrature grid: (2π/M) Σ_j samples[j].
double quadrature_integral(const TorusGrid& g, const std::vector<double>& samples);

}  // namespace skdv
