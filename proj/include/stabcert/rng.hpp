#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>
#include <vector>

#include "stabcert/types.hpp"

namespace stabcert {

/// 64-bit seed wrapper.  Every source of randomness in the library is derived
/// from one master seed through derive_seed, so a run is reproducible from a
/// single integer.
struct Seed {
  std::uint64_t value = 0;
  bool operator==(const Seed&) const = default;
};

namespace detail {

// splitmix64 finalizer; bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace detail

/// Deterministic child seed for (master, stream label, index).  Distinct
/// labels or indices give distinct child seeds (the mixing steps are
/// bijective, so collisions would require an FNV collision between labels).
inline Seed derive_seed(Seed master, std::string_view stream_label,
                        std::uint64_t index) {
  std::uint64_t s = detail::mix64(master.value ^ 0x9E3779B97F4A7C15ull);
  s = detail::mix64(s ^ detail::fnv1a64(stream_label));
  s = detail::mix64(s ^ index);
  return Seed{s};
}

/// splitmix64 stream.  All distribution draws consume a fixed number of
/// uniforms so that sequences stay aligned across code paths and platforms.
class RandomStream {
 public:
  explicit RandomStream(Seed seed) : state_(seed.value) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    return detail::mix64(state_);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n); rejection sampling, no modulo bias.
  std::uint64_t next_below(std::uint64_t n) {
    require(n >= 1, ErrorCode::invalid_argument, "next_below requires n >= 1");
    const std::uint64_t reject_below = (0 - n) % n;  // 2^64 mod n
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x < reject_below);
    return x % n;
  }

  /// Standard normal via Box-Muller; always consumes exactly two uniforms.
  double next_normal() {
    const double u1 = next_unit();
    const double u2 = next_unit();
    // 1 - u1 lies in (0, 1], so the log is finite.
    return std::sqrt(-2.0 * std::log1p(-u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Student-t with integer dof: Z / sqrt(chi2_nu / nu).  Consumes a fixed
  /// 2*(nu+1) uniforms.
  double next_student_t(std::int64_t nu) {
    require(nu >= 1, ErrorCode::invalid_argument,
            "student-t dof must be >= 1");
    const double z = next_normal();
    double chi2 = 0.0;
    for (std::int64_t i = 0; i < nu; ++i) {
      const double g = next_normal();
      chi2 += g * g;
    }
    if (chi2 == 0.0) return 0.0;  // probability-zero guard
    return z / std::sqrt(chi2 / static_cast<double>(nu));
  }

  /// Fisher-Yates shuffle.
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::uint64_t i = v.size(); i > 1; --i) {
      const std::uint64_t j = next_below(i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace stabcert
