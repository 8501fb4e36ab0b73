#include "skdv/kernels.hpp"

namespace skdv::kern {

namespace {

void mul_scalar(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void axpy_scalar(double s, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += s * x[i];
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum3_scalar(const double* a, const double* b, const double* c,
                   std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i] * c[i];
  return acc;
}

double sum4_scalar(const double* a, const double* b, const double* c,
                   const double* d, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i] * c[i] * d[i];
  return acc;
}

double weighted_abs2_scalar(const double* w, const cxd* z, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double re = z[i].real(), im = z[i].imag();
    acc += w[i] * (re * re + im * im);
  }
  return acc;
}

void scale_sum_scalar(const cxd* e, const cxd* a, const cxd* b, cxd* out,
                      std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = e[i] * (a[i] + b[i]);
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops table{
      "scalar",       mul_scalar,  axpy_scalar,
      dot_scalar,     sum3_scalar, sum4_scalar,
      weighted_abs2_scalar, scale_sum_scalar,
  };
  return table;
}

#if defined(SKDV_KERNELS_X86)
namespace detail {
const Ops& avx2_ops();
}
#elif defined(SKDV_KERNELS_NEON)
namespace detail {
const Ops& neon_ops();
}
#endif

const Ops& ops() {
#if defined(SKDV_KERNELS_X86)
  static const Ops* chosen =
      __builtin_cpu_supports("avx2") ? &detail::avx2_ops() : &scalar_ops();
  return *chosen;
#elif defined(SKDV_KERNELS_NEON)
  return detail::neon_ops();
#else
  return scalar_ops();
#endif
}

}  // namespace skdv::kern
