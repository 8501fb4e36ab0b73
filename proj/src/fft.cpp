#include "skdv/fft.hpp"

#include <cmath>
#include <map>
#include <numbers>

namespace skdv::fft {

namespace {

// Twiddle factors e^{-2πi k/n}, k < n/2, cached per size (per thread: ensemble
// workers must not contend on a lock in the step loop).
const std::vector<cxd>& twiddles(std::size_t n) {
  thread_local std::map<std::size_t, std::vector<cxd>> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<cxd> tw(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double ang = -2.0 * std::numbers::pi * double(k) / double(n);
    tw[k] = {std::cos(ang), std::sin(ang)};
  }
  return cache.emplace(n, std::move(tw)).first->second;
}

}  // namespace

bool is_pow2(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

void transform_pow2(cxd* x, std::size_t n, int sign) {
  if (n < 2) return;
  const auto& tw = twiddles(n);
  // bit-reversal permutation
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2, step = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t j = 0; j < half; ++j) {
        cxd w = tw[j * step];
        if (sign > 0) w = std::conj(w);
        const cxd u = x[i + j];
        const cxd v = x[i + j + half] * w;
        x[i + j] = u + v;
        x[i + j + half] = u - v;
      }
    }
  }
}

std::vector<cxd> transform_direct(const cxd* x, std::size_t n, int sign) {
  std::vector<cxd> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    cxd acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double ang =
          sign * 2.0 * std::numbers::pi * double((j * k) % n) / double(n);
      acc += x[j] * cxd{std::cos(ang), std::sin(ang)};
    }
    out[k] = acc;
  }
  return out;
}

void transform(cxd* x, std::size_t n, int sign) {
  if (is_pow2(n)) {
    transform_pow2(x, n, sign);
  } else {
    auto out = transform_direct(x, n, sign);
    std::copy(out.begin(), out.end(), x);
  }
}

}  // namespace skdv::fft
