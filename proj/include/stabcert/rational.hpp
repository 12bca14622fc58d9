#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <string>

#include "stabcert/types.hpp"

namespace stabcert {

/// Exact rational on int64, reduced form, denominator > 0.  Used wherever the
/// labeled-to-training size ratio enters a formula: the ratio and its floor
/// must be exact, never rounded through a double.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
    require(den != 0, ErrorCode::invalid_argument,
            "rational denominator must be nonzero");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    const std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }
  static Rational from_int(std::int64_t v) { return Rational(v, 1); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  /// Floor division, correct for negatives (quotient rounded toward -inf).
  std::int64_t floor() const {
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
  }

  bool is_integer() const { return den_ == 1; }

  double value() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  /// "p/q", or just "p" when integral.
  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    // Cross-multiply in 128 bits; denominators are positive.
    const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
  friend bool operator==(const Rational& a, const Rational& b) {
    return (a <=> b) == std::strong_ordering::equal;
  }

  static Rational min(const Rational& a, const Rational& b) {
    return a < b ? a : b;
  }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace stabcert
