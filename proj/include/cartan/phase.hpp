#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace cartan {

using Complex = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// A point of the circle group stored exactly as a rational number of turns.
///
/// The value represented is exp(2*pi*i * num/den) with 0 <= num < den and
/// gcd(num, den) == 1, so equality is exact and the modulus is exactly one.
class Phase {
public:
  constexpr Phase() = default;

  Phase(std::int64_t num, std::int64_t den) {
    if (den <= 0) throw std::invalid_argument("phase denominator must be positive");
    num %= den;
    if (num < 0) num += den;
    const std::int64_t g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
  }

  static Phase one() { return {}; }

  [[nodiscard]] std::int64_t num() const { return num_; }
  [[nodiscard]] std::int64_t den() const { return den_; }

  [[nodiscard]] bool is_one() const { return num_ == 0; }

  Phase operator*(const Phase& o) const {
    // a/b + c/d reduced mod 1; lcm keeps the intermediate small
    const std::int64_t l = std::lcm(den_, o.den_);
    return Phase(num_ * (l / den_) + o.num_ * (l / o.den_), l);
  }
  Phase& operator*=(const Phase& o) { return *this = *this * o; }

  [[nodiscard]] Phase conj() const { return Phase(-num_, den_); }

  friend bool operator==(const Phase&, const Phase&) = default;

  /// Complex view. Quarter turns are returned exactly.
  [[nodiscard]] Complex value() const {
    if (num_ == 0) return {1.0, 0.0};
    if (den_ == 2) return {-1.0, 0.0};
    if (den_ == 4) return num_ == 1 ? Complex{0.0, 1.0} : Complex{0.0, -1.0};
    const double angle = kTwoPi * static_cast<double>(num_) / static_cast<double>(den_);
    return {std::cos(angle), std::sin(angle)};
  }

  /// Best rational approximation (continued fractions) of the argument of a
  /// nonzero complex number, with denominator at most max_den.
  static Phase from_complex(Complex z, std::int64_t max_den = 1 << 12) {
    if (std::abs(z) == 0.0) throw std::invalid_argument("phase of zero is undefined");
    double t = std::arg(z) / kTwoPi;
    t -= std::floor(t);
    std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double x = t;
    for (int it = 0; it < 64; ++it) {
      const double a = std::floor(x);
      const auto ai = static_cast<std::int64_t>(a);
      const std::int64_t p2 = ai * p1 + p0;
      const std::int64_t q2 = ai * q1 + q0;
      if (q2 > max_den) break;
      p0 = p1; q0 = q1; p1 = p2; q1 = q2;
      const double frac = x - a;
      if (frac < 1e-12) break;
      x = 1.0 / frac;
    }
    if (q1 == 0) return {};
    return Phase(p1, q1);
  }

private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline std::ostream& operator<<(std::ostream& os, const Phase& p) {
  return os << p.num() << "/" << p.den();
}

}  // namespace cartan
