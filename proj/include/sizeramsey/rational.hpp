#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <ostream>
#include <string>

#include "error.hpp"

namespace sizeramsey {

/// Exact fraction with 64-bit parts, always normalised (den > 0, gcd 1).
/// Comparisons go through 128-bit cross products.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1) : num_(num), den_(den) {
    if (den_ == 0) throw Error(ErrorKind::InvalidArgument, "zero denominator");
    normalise();
  }

  /// Best rational approximation with denominator <= max_den (continued
  /// fractions). Decimal literals such as 0.1 come back exact.
  static Rational approximate(double x, std::int64_t max_den = 1000000) {
    if (!std::isfinite(x)) throw Error(ErrorKind::InvalidArgument, "non-finite value");
    const bool neg = x < 0;
    double r = std::fabs(x);
    std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    for (int iter = 0; iter < 64; ++iter) {
      const double a = std::floor(r);
      const auto ai = static_cast<std::int64_t>(a);
      const std::int64_t q2 = q0 + ai * q1;
      if (q2 > max_den) break;
      const std::int64_t p2 = p0 + ai * p1;
      p0 = p1; q0 = q1; p1 = p2; q1 = q2;
      const double frac = r - a;
      if (frac < 1e-12) break;
      r = 1.0 / frac;
    }
    if (q1 == 0) return Rational(neg ? -p0 : p0, q0);
    return Rational(neg ? -p1 : p1, q1);
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return from_wide(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                     static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return from_wide(static_cast<__int128>(a.num_) * b.den_ - static_cast<__int128>(b.num_) * a.den_,
                     static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from_wide(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw Error(ErrorKind::InvalidArgument, "division by zero");
    return from_wide(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
  }
  friend Rational abs(const Rational& a) { return Rational(a.num_ < 0 ? -a.num_ : a.num_, a.den_); }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend auto operator<=>(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num_) * b.den_ <=> static_cast<__int128>(b.num_) * a.den_;
  }

  std::string str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }
  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  static Rational from_wide(__int128 num, __int128 den) {
    if (den < 0) { num = -num; den = -den; }
    __int128 a = num < 0 ? -num : num, b = den;
    while (b != 0) { const __int128 t = a % b; a = b; b = t; }
    if (a > 1) { num /= a; den /= a; }
    constexpr __int128 lim = static_cast<__int128>(INT64_MAX);
    if (num > lim || -num > lim || den > lim)
      throw Error(ErrorKind::InvalidArgument, "rational overflow");
    Rational r;
    r.num_ = static_cast<std::int64_t>(num);
    r.den_ = static_cast<std::int64_t>(den);
    return r;
  }

  void normalise() {
    if (den_ < 0) { num_ = -num_; den_ = -den_; }
    const std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) { num_ /= g; den_ /= g; }
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// Smallest integer k with k >= r (r >= 0 expected but not required).
inline std::int64_t ceil(const Rational& r) {
  std::int64_t q = r.num() / r.den();
  if (r.num() % r.den() != 0 && r.num() > 0) ++q;
  return q;
}

}  // namespace sizeramsey
