#pragma once

#include <cmath>

namespace skdv {

// Numerically stable running mean/variance accumulator (Welford update).
// A naive sum-of-squares pass loses ~half the significant digits to
// cancellation, which matters here: noise-off ensembles feed identical
// samples and their spread must come out exactly zero.
struct RunningStat {
  long long n = 0;
  double mean = 0.0;
  double m2 = 0.0;  // sum of squared deviations from the running mean

  void push(double x) {
    ++n;
    const double d = x - mean;
    mean += d / double(n);
    m2 += d * (x - mean);
  }

  // Standard error of the mean (population-variance convention, zero for
  // fewer than two samples).
  double se() const {
    return n > 1 ? std::sqrt(m2) / double(n) : 0.0;
  }
};

}  // namespace skdv
