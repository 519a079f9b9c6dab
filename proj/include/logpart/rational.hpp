#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <string>

namespace logpart {

/// Reduced fraction with positive denominator. Only used for small ratios of
/// vertex and edge counts, so 64-bit parts are plenty.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t num, std::int64_t den = 1) : num_(num), den_(den) {
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

  constexpr std::int64_t num() const noexcept { return num_; }
  constexpr std::int64_t den() const noexcept { return den_; }
  constexpr double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

  friend constexpr bool operator==(const Rational& a, const Rational& b) noexcept {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend constexpr std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept {
    const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    return lhs < rhs ? std::strong_ordering::less
                     : (lhs > rhs ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  std::string str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace logpart
