#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "twistchain/types.hpp"

namespace twistchain {

/// splitmix64 step; the de-facto standard seeding/splitting mixer.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Deterministic random stream with counter-based splitting. Identical
/// sequences on every platform (no std::*_distribution involved), which is
/// what makes reports byte-reproducible for a fixed seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {
    // Decorrelate trivially related seeds.
    splitmix64(state_);
  }

  /// Independent child stream labelled by a tag; the parent is unaffected.
  Rng child(std::uint64_t tag) const {
    std::uint64_t s = state_ ^ (0x9e3779b97f4a7c15ULL * (tag + 1));
    splitmix64(s);
    return Rng(s, /*raw=*/true);
  }

  std::uint64_t next_u64() { return splitmix64(state_); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller (second value cached).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  /// Complex standard normal (unit variance overall).
  Complex normal_complex() {
    const double re = normal();
    const double im = normal();
    return Complex(re, im) / std::sqrt(2.0);
  }

  /// Uniform point on the annulus r_min <= |z| <= r_max.
  Complex annulus(double r_min, double r_max) {
    const double r2 =
        r_min * r_min + (r_max * r_max - r_min * r_min) * uniform();
    const double a = 2.0 * std::numbers::pi * uniform();
    return std::sqrt(r2) * Complex(std::cos(a), std::sin(a));
  }

 private:
  Rng(std::uint64_t raw_state, bool) : state_(raw_state) {}

  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace twistchain
