#pragma once

#include <complex>
#include <cstddef>

namespace skdv::kern {

using cxd = std::complex<double>;

// Hot inner loops. One table of function pointers per instruction set; the
// dispatched table is chosen once at startup from CPU capabilities. All
// variants compute the same quantities; reductions may differ from the scalar
// path only through summation order.
struct Ops {
  const char* name;
  // out[i] = a[i] * b[i]
  void (*mul)(const double* a, const double* b, double* out, std::size_t n);
  // y[i] += s * x[i]
  void (*axpy)(double s, const double* x, double* y, std::size_t n);
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // sum_i a[i] * b[i] * c[i]
  double (*sum3)(const double* a, const double* b, const double* c, std::size_t n);
  // sum_i a[i] * b[i] * c[i] * d[i]
  double (*sum4)(const double* a, const double* b, const double* c,
                 const double* d, std::size_t n);
  // sum_i w[i] * |z[i]|^2
  double (*weighted_abs2)(const double* w, const cxd* z, std::size_t n);
  // out[i] = e[i] * (a[i] + b[i]), complex
  void (*scale_sum)(const cxd* e, const cxd* a, const cxd* b, cxd* out,
                    std::size_t n);
};

const Ops& scalar_ops();
const Ops& ops();  // runtime-dispatched

}  // namespace skdv::kern
