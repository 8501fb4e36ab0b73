#pragma once

#include <complex>
#include <vector>

namespace skdv {

using cxd = std::complex<double>;

// Domain length 2π, fixed.
inline constexpr double kTwoPi = 6.28318530717958647692528676655900577;

// Uniform collocation grid on [0, 2π). n_points carries the 2/3-rule headroom
// for the quadratic nonlinearity: n_points >= 3*n_modes + 1.
struct TorusGrid {
  int n_modes = 0;
  int n_points = 0;

  TorusGrid() = default;
  TorusGrid(int modes, int points);

  // Smallest power of two >= max(4*modes, 3*modes+1): fast-transform friendly
  // and with quartic-quadrature headroom.
  static TorusGrid with_default_points(int modes);

  double point(int j) const { return kTwoPi * double(j) / double(n_points); }
  bool operator==(const TorusGrid&) const = default;
};

// Real-valued field stored as the nonnegative half of its Fourier
// coefficients in the convention
//   v̂(n) = (1/√(2π)) ∫ e^{-inx} v(x) dx,
// c[n] for n = 0..n_modes; coefficients at negative n are conj(c[-n]) and the
// field being real keeps c[0] real.
struct SpectralField {
  TorusGrid grid;
  std::vector<cxd> c;

  SpectralField() = default;
  explicit SpectralField(const TorusGrid& g) : grid(g), c(g.n_modes + 1) {}

  int n_modes() const { return grid.n_modes; }

  // Coefficient at any wavenumber; zero outside the retained band.
  cxd coeff(int n) const {
    const int a = n < 0 ? -n : n;
    if (a > grid.n_modes) return {};
    return n < 0 ? std::conj(c[a]) : c[a];
  }

  void set_zero() { std::fill(c.begin(), c.end(), cxd{}); }
  bool all_finite() const;

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(double s);
  // this += s * o
  SpectralField& add_scaled(double s, const SpectralField& o);
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField f);

}  // namespace skdv
