#include "skdv/kernels.hpp"

#if defined(__aarch64__) || defined(__ARM_NEON)
#include <arm_neon.h>

namespace skdv::kern::detail {

namespace {

inline double hsum(float64x2_t v) { return vgetq_lane_f64(v, 0) + vgetq_lane_f64(v, 1); }

void mul_neon(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(out + i, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void axpy_neon(double s, const double* x, double* y, std::size_t n) {
  const float64x2_t sv = vdupq_n_f64(s);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t yv = vld1q_f64(y + i);
    yv = vaddq_f64(yv, vmulq_f64(sv, vld1q_f64(x + i)));
    vst1q_f64(y + i, yv);
  }
  for (; i < n; ++i) y[i] += s * x[i];
}

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  double r = hsum(acc);
  for (; i < n; ++i) r += a[i] * b[i];
  return r;
}

double sum3_neon(const double* a, const double* b, const double* c,
                 std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t p = vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    acc = vaddq_f64(acc, vmulq_f64(p, vld1q_f64(c + i)));
  }
  double r = hsum(acc);
  for (; i < n; ++i) r += a[i] * b[i] * c[i];
  return r;
}

double sum4_neon(const double* a, const double* b, const double* c,
                 const double* d, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t p = vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    float64x2_t q = vmulq_f64(vld1q_f64(c + i), vld1q_f64(d + i));
    acc = vaddq_f64(acc, vmulq_f64(p, q));
  }
  double r = hsum(acc);
  for (; i < n; ++i) r += a[i] * b[i] * c[i] * d[i];
  return r;
}

double weighted_abs2_neon(const double* w, const cxd* z, std::size_t n) {
  const double* zd = reinterpret_cast<const double*>(z);
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t z0 = vld1q_f64(zd + 2 * i);
    float64x2_t z1 = vld1q_f64(zd + 2 * i + 2);
    float64x2_t abs2 = vpaddq_f64(vmulq_f64(z0, z0), vmulq_f64(z1, z1));
    acc = vaddq_f64(acc, vmulq_f64(abs2, vld1q_f64(w + i)));
  }
  double r = hsum(acc);
  for (; i < n; ++i) {
    const double re = z[i].real(), im = z[i].imag();
    r += w[i] * (re * re + im * im);
  }
  return r;
}

void scale_sum_neon(const cxd* e, const cxd* a, const cxd* b, cxd* out,
                    std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const cxd s = a[i] + b[i];
    const double er = e[i].real(), ei = e[i].imag();
    out[i] = {er * s.real() - ei * s.imag(), er * s.imag() + ei * s.real()};
  }
}

}  // namespace

const Ops& neon_ops() {
  static const Ops table{
      "neon",       mul_neon,  axpy_neon,
      dot_neon,     sum3_neon, sum4_neon,
      weighted_abs2_neon, scale_sum_neon,
  };
  return table;
}

}  // namespace skdv::kern::detail

#else

namespace skdv::kern::detail {
const Ops& neon_ops() { return scalar_ops(); }
}  // namespace skdv::kern::detail

#endif
