#include "skdv/functionals.hpp"

#include <cmath>
#include <stdexcept>

#include "skdv/kernels.hpp"
#include "skdv/spectral.hpp"

namespace skdv {

CutoffProfile::CutoffProfile(double r) : radius(r) {
  if (!(r > 0.0)) throw std::invalid_argument("cutoff: radius must be > 0");
}

namespace {
inline double bump(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }
}  // namespace

double CutoffProfile::operator()(double x) const {
  if (!(radius > 0.0)) throw std::logic_error("cutoff: profile not configured");
  if (x < 0.0) throw std::invalid_argument("cutoff: argument must be >= 0");
  const double t = x / radius;
  if (t <= 0.5) return 1.0;
  if (t >= 1.0) return 0.0;
  const double a = bump(1.0 - t);
  return a / (a + bump(t - 0.5));
}

double cutoff_eval(const CutoffProfile& p, double x) { return p(x); }

namespace {

// Σ_n (both signs) n^(2k) |v̂(n)|², i.e. |∂ₓᵏv|²_{L²}.
double deriv_l2_sq(const SpectralField& v, int k) {
  const int nm = v.grid.n_modes;
  std::vector<double> w(nm + 1);
  w[0] = 0.0;
  for (int n = 1; n <= nm; ++n) {
    double p = 1.0;
    for (int j = 0; j < 2 * k; ++j) p *= double(n);
    w[n] = 2.0 * p;
  }
  return kern::ops().weighted_abs2(w.data(), v.c.data(), nm + 1);
}

double dx(const TorusGrid& g) { return kTwoPi / double(g.n_points); }

}  // namespace

double functional_I0(const SpectralField& v) { return hs_norm_sq(v, 0.0); }

double functional_I1(const SpectralField& v) {
  const auto vp = inverse_transform(v);
  const double cubic = kern::ops().sum3(vp.data(), vp.data(), vp.data(), vp.size());
  return 0.5 * deriv_l2_sq(v, 1) - (1.0 / 12.0) * cubic * dx(v.grid);
}

double functional_I2(const SpectralField& v) {
  const auto vp = inverse_transform(v);
  const auto vx = inverse_transform(derivative(v, 1));
  const double mid = kern::ops().sum3(vp.data(), vx.data(), vx.data(), vp.size());
  const double quart =
      kern::ops().sum4(vp.data(), vp.data(), vp.data(), vp.data(), vp.size());
  return deriv_l2_sq(v, 2) +
         (-(5.0 / 3.0) * mid + (5.0 / 36.0) * quart) * dx(v.grid);
}

double frechet_I2_first(const SpectralField& v, const SpectralField& w) {
  if (!(v.grid == w.grid))
    throw std::invalid_argument("frechet_I2_first: grids differ");
  const auto& ops = kern::ops();
  const auto vp = inverse_transform(v);
  const auto vx = inverse_transform(derivative(v, 1));
  const auto vxx = inverse_transform(derivative(v, 2));
  const auto wp = inverse_transform(w);
  const auto wx = inverse_transform(derivative(w, 1));
  const auto wxx = inverse_transform(derivative(w, 2));
  const std::size_t m = vp.size();
  double acc = 2.0 * ops.dot(vxx.data(), wxx.data(), m);
  acc -= (5.0 / 3.0) * ops.sum3(vx.data(), vx.data(), wp.data(), m);
  // ∂ₓ(v²) = 2 v ∂ₓv pointwise
  acc -= (10.0 / 3.0) * ops.sum3(vp.data(), vx.data(), wx.data(), m);
  acc += (5.0 / 9.0) *
         ops.sum4(vp.data(), vp.data(), vp.data(), wp.data(), m);
  return acc * dx(v.grid);
}

double frechet_I2_second(const SpectralField& v, const SpectralField& h,
                         const SpectralField& w) {
  if (!(v.grid == h.grid) || !(v.grid == w.grid))
    throw std::invalid_argument("frechet_I2_second: grids differ");
  const auto& ops = kern::ops();
  const auto vp = inverse_transform(v);
  const auto vx = inverse_transform(derivative(v, 1));
  const auto hp = inverse_transform(h);
  const auto hx = inverse_transform(derivative(h, 1));
  const auto hxx = inverse_transform(derivative(h, 2));
  const auto wp = inverse_transform(w);
  const auto wx = inverse_transform(derivative(w, 1));
  const auto wxx = inverse_transform(derivative(w, 2));
  const std::size_t m = vp.size();
  double acc = 2.0 * ops.dot(hxx.data(), wxx.data(), m);
  acc -= (10.0 / 3.0) * (ops.sum3(vx.data(), hx.data(), wp.data(), m) +
                         ops.sum3(vx.data(), hp.data(), wx.data(), m) +
                         ops.sum3(vp.data(), hx.data(), wx.data(), m));
  acc += (5.0 / 3.0) *
         ops.sum4(vp.data(), vp.data(), hp.data(), wp.data(), m);
  return acc * dx(v.grid);
}

}  // namespace skdv
