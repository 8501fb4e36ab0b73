#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace skdv::fft {

using cxd = std::complex<double>;

bool is_pow2(std::size_t n);

// In-place radix-2 transform, n a power of two. sign=-1 computes
// X_k = sum_j x_j e^{-2πi jk/n}, sign=+1 the conjugate kernel. Unnormalized.
void transform_pow2(cxd* x, std::size_t n, int sign);

// Direct O(n^2) evaluation of the same sums, any n >= 1. Reference route and
// fallback for non-power-of-two grids.
std::vector<cxd> transform_direct(const cxd* x, std::size_t n, int sign);

// Fast path when n is a power of two, direct evaluation otherwise.
void transform(cxd* x, std::size_t n, int sign);

}  // namespace skdv::fft
