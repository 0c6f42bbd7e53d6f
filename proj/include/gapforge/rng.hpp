#pragma once

#include <cmath>
#include <cstdint>

namespace gapforge {

/// Philox-4x32-10 counter-based generator. Streams are addressed by
/// (seed, stream): trajectory i draws from stream i and is reproducible
/// independent of scheduling order.
class Philox {
 public:
  Philox(uint64_t seed, uint64_t stream) {
    key_[0] = static_cast<uint32_t>(seed);
    key_[1] = static_cast<uint32_t>(seed >> 32);
    ctr_[2] = static_cast<uint32_t>(stream);
    ctr_[3] = static_cast<uint32_t>(stream >> 32);
  }

  /// Uniform double in [0, 1).
  double uniform() {
    if (have_ < 2) refill();
    const uint32_t hi = out_[--have_];
    const uint32_t lo = out_[--have_];
    const uint64_t bits = (static_cast<uint64_t>(hi) << 32) | lo;
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller (deterministic pairing).
  double normal() {
    if (has_normal_) {
      has_normal_ = false;
      return cached_normal_;
    }
    double u1 = uniform();
    while (u1 == 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    cached_normal_ = r * std::sin(a);
    has_normal_ = true;
    return r * std::cos(a);
  }

 private:
  static uint64_t mulhilo(uint32_t a, uint32_t b) {
    return static_cast<uint64_t>(a) * b;
  }

  void refill() {
    uint32_t c0 = ctr_[0], c1 = ctr_[1], c2 = ctr_[2], c3 = ctr_[3];
    uint32_t k0 = key_[0], k1 = key_[1];
    for (int round = 0; round < 10; ++round) {
      const uint64_t p0 = mulhilo(0xD2511F53u, c0);
      const uint64_t p1 = mulhilo(0xCD9E8D57u, c2);
      const uint32_t hi0 = static_cast<uint32_t>(p0 >> 32),
                     lo0 = static_cast<uint32_t>(p0);
      const uint32_t hi1 = static_cast<uint32_t>(p1 >> 32),
                     lo1 = static_cast<uint32_t>(p1);
      const uint32_t n0 = hi1 ^ c1 ^ k0, n1 = lo1, n2 = hi0 ^ c3 ^ k1, n3 = lo0;
      c0 = n0;
      c1 = n1;
      c2 = n2;
      c3 = n3;
      k0 += 0x9E3779B9u;
      k1 += 0xBB67AE85u;
    }
    out_[0] = c0;
    out_[1] = c1;
    out_[2] = c2;
    out_[3] = c3;
    have_ = 4;
    if (++ctr_[0] == 0) ++ctr_[1];  // 64-bit position counter in words 0..1
  }

  uint32_t key_[2] = {0, 0};
  uint32_t ctr_[4] = {0, 0, 0, 0};
  uint32_t out_[4] = {0, 0, 0, 0};
  int have_ = 0;
  bool has_normal_ = false;
  double cached_normal_ = 0.0;
};

}  // namespace gapforge
