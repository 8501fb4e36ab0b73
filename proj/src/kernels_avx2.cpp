#include <immintrin.h>

#include "skdv/kernels.hpp"

namespace skdv::kern::detail {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

void mul_avx2(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i),
                                            _mm256_loadu_pd(b + i)));
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void axpy_avx2(double s, const double* x, double* y, std::size_t n) {
  const __m256d sv = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d yv = _mm256_loadu_pd(y + i);
    yv = _mm256_add_pd(yv, _mm256_mul_pd(sv, _mm256_loadu_pd(x + i)));
    _mm256_storeu_pd(y + i, yv);
  }
  for (; i < n; ++i) y[i] += s * x[i];
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_add_pd(
        acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  double r = hsum(acc);
  for (; i < n; ++i) r += a[i] * b[i];
  return r;
}

double sum3_avx2(const double* a, const double* b, const double* c,
                 std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d p = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(p, _mm256_loadu_pd(c + i)));
  }
  double r = hsum(acc);
  for (; i < n; ++i) r += a[i] * b[i] * c[i];
  return r;
}

double sum4_avx2(const double* a, const double* b, const double* c,
                 const double* d, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d p = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    __m256d q = _mm256_mul_pd(_mm256_loadu_pd(c + i), _mm256_loadu_pd(d + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(p, q));
  }
  double r = hsum(acc);
  for (; i < n; ++i) r += a[i] * b[i] * c[i] * d[i];
  return r;
}

double weighted_abs2_avx2(const double* w, const cxd* z, std::size_t n) {
  const double* zd = reinterpret_cast<const double*>(z);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d z0 = _mm256_loadu_pd(zd + 2 * i);      // re0 im0 re1 im1
    __m256d z1 = _mm256_loadu_pd(zd + 2 * i + 4);  // re2 im2 re3 im3
    __m256d abs2 =
        _mm256_hadd_pd(_mm256_mul_pd(z0, z0), _mm256_mul_pd(z1, z1));
    // hadd lane order: |z0|^2 |z2|^2 |z1|^2 |z3|^2 -> permute weights to match
    __m256d wv = _mm256_permute4x64_pd(_mm256_loadu_pd(w + i), 0xD8);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(abs2, wv));
  }
  double r = hsum(acc);
  for (; i < n; ++i) {
    const double re = z[i].real(), im = z[i].imag();
    r += w[i] * (re * re + im * im);
  }
  return r;
}

void scale_sum_avx2(const cxd* e, const cxd* a, const cxd* b, cxd* out,
                    std::size_t n) {
  const double* ed = reinterpret_cast<const double*>(e);
  const double* ad = reinterpret_cast<const double*>(a);
  const double* bd = reinterpret_cast<const double*>(b);
  double* od = reinterpret_cast<double*>(out);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d ev = _mm256_loadu_pd(ed + 2 * i);
    __m256d sv = _mm256_add_pd(_mm256_loadu_pd(ad + 2 * i),
                               _mm256_loadu_pd(bd + 2 * i));
    __m256d er = _mm256_movedup_pd(ev);         // re re
    __m256d ei = _mm256_permute_pd(ev, 0xF);    // im im
    __m256d ss = _mm256_permute_pd(sv, 0x5);    // swapped pairs
    __m256d res =
        _mm256_addsub_pd(_mm256_mul_pd(er, sv), _mm256_mul_pd(ei, ss));
    _mm256_storeu_pd(od + 2 * i, res);
  }
  for (; i < n; ++i) out[i] = e[i] * (a[i] + b[i]);
}

}  // namespace

const Ops& avx2_ops() {
  static const Ops table{
      "avx2",       mul_avx2,  axpy_avx2,
      dot_avx2,     sum3_avx2, sum4_avx2,
      weighted_abs2_avx2, scale_sum_avx2,
  };
  return table;
}

}  // namespace skdv::kern::detail
