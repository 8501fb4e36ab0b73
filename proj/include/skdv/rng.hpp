#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace skdv::rng {

// Counter-based generator: the state is an affine counter and every output is
// a strong 64-bit mix of it, so streams are cheap to fork by key derivation
// and a stream's n-th draw is independent of how earlier draws were consumed.
inline uint64_t mix64(uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

inline constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// Independent sub-streams per trajectory: each consumer owns one, so the draw
// order of one sampler never shifts another's sequence.
enum class Sub : uint64_t {
  wiener = 1,
  jump_times = 2,
  jump_marks = 3,
  large_times = 4,
  large_marks = 5,
  init = 6,
  misc = 7,
};

inline uint64_t derive_key(uint64_t seed, uint64_t path, uint64_t sub) {
  uint64_t k = seed;
  k = mix64(k ^ (path * 0xC2B2AE3D27D4EB4FULL + 0x165667B19E3779F9ULL));
  k = mix64(k ^ (sub * kGolden + 0x27D4EB2F165667C5ULL));
  return k;
}

class Stream {
 public:
  explicit Stream(uint64_t key) : state_(key) {}
  Stream(uint64_t seed, uint64_t path, Sub sub)
      : state_(derive_key(seed, path, uint64_t(sub))) {}

  uint64_t next_u64() {
    state_ += kGolden;
    return mix64(state_);
  }

  // Uniform on the open interval (0, 1).
  double next_unit() {
    return (double(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double next_gaussian() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    const double u1 = next_unit();
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(ang);
    have_cached_ = true;
    return r * std::cos(ang);
  }

  double next_exponential(double rate) { return -std::log(next_unit()) / rate; }

 private:
  uint64_t state_;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace skdv::rng
