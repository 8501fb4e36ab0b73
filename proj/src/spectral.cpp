#include "skdv/spectral.hpp"

#include <cmath>
#include <stdexcept>

#include "skdv/fft.hpp"
#include "skdv/kernels.hpp"

namespace skdv {

namespace {
const double kSqrtTwoPi = std::sqrt(kTwoPi);
}

SpectralField forward_transform(const TorusGrid& g,
                                const std::vector<double>& samples) {
  if (int(samples.size()) != g.n_points)
    throw std::invalid_argument("forward_transform: sample count != n_points");
  std::vector<cxd> buf(samples.begin(), samples.end());
  fft::transform(buf.data(), buf.size(), -1);
  SpectralField f(g);
  const double scale = kSqrtTwoPi / double(g.n_points);
  for (int n = 0; n <= g.n_modes; ++n) f.c[n] = scale * buf[n];
  f.c[0] = {f.c[0].real(), 0.0};  // real field: zero-mode coefficient is real
  return f;
}

std::vector<double> inverse_transform(const SpectralField& f) {
  const int m = f.grid.n_points;
  std::vector<cxd> buf(m);
  buf[0] = {f.c[0].real(), 0.0};
  for (int n = 1; n <= f.grid.n_modes; ++n) {
    buf[n] = f.c[n];
    buf[m - n] = std::conj(f.c[n]);
  }
  fft::transform(buf.data(), buf.size(), +1);
  std::vector<double> out(m);
  for (int j = 0; j < m; ++j) out[j] = buf[j].real() / kSqrtTwoPi;
  return out;
}

SpectralField derivative(const SpectralField& f, int order) {
  if (order < 0) throw std::invalid_argument("derivative: order must be >= 0");
  SpectralField out(f.grid);
  // (in)^k = i^k n^k with i^k cycling {1, i, -1, -i}
  const int ph = order & 3;
  for (int n = 0; n <= f.grid.n_modes; ++n) {
    double nk = 1.0;
    for (int j = 0; j < order; ++j) nk *= double(n);
    cxd v = nk * f.c[n];
    switch (ph) {
      case 0: out.c[n] = v; break;
      case 1: out.c[n] = cxd{-v.imag(), v.real()}; break;
      case 2: out.c[n] = -v; break;
      default: out.c[n] = cxd{v.imag(), -v.real()}; break;
    }
  }
  return out;
}

double hs_norm_sq(const SpectralField& f, double s) {
  const int nm = f.grid.n_modes;
  std::vector<double> w(nm + 1);
  w[0] = 1.0;
  const bool int_s = s == std::floor(s) && s >= 0.0 && s <= 8.0;
  for (int n = 1; n <= nm; ++n) {
    const double base = 1.0 + double(n) * double(n);
    double p = 1.0;
    if (int_s) {
      for (int j = 0; j < int(s); ++j) p *= base;
    } else {
      p = std::pow(base, s);
    }
    w[n] = 2.0 * p;  // both signs of n
  }
  return kern::ops().weighted_abs2(w.data(), f.c.data(), nm + 1);
}

double hs_norm(const SpectralField& f, double s) {
  return std::sqrt(hs_norm_sq(f, s));
}

SpectralField project(const SpectralField& f, int m) {
  if (m < 0 || m > f.grid.n_modes)
    throw std::invalid_argument("project: mode bound outside [0, n_modes]");
  SpectralField out = f;
  for (int n = m + 1; n <= f.grid.n_modes; ++n) out.c[n] = {};
  return out;
}

SpectralField pointwise_product(const SpectralField& f,
                                const SpectralField& g) {
  if (!(f.grid == g.grid))
    throw std::invalid_argument("pointwise_product: grids differ");
  const std::vector<double> a = inverse_transform(f);
  const std::vector<double> b = inverse_transform(g);
  std::vector<double> prod(a.size());
  kern::ops().mul(a.data(), b.data(), prod.data(), a.size());
  return forward_transform(f.grid, prod);
}

double quadrature_integral(const TorusGrid& g,
                           const std::vector<double>& samples) {
  double acc = 0.0;
  for (double v : samples) acc += v;
  return acc * kTwoPi / double(g.n_points);
}

}  // namespace skdv
