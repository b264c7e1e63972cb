#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "rrw/errors.hpp"

namespace rrw {

// Exact rational on 64-bit words; arithmetic goes through 128-bit
// intermediates and throws instead of wrapping. Coefficients in the
// elimination pipelines stay tiny, so the headroom is enormous.
class Rational {
 public:
  Rational() : n_(0), d_(1) {}
  Rational(long long n) : n_(n), d_(1) {}
  Rational(long long n, long long d) : n_(n), d_(d) { normalize(); }

  long long num() const { return n_; }
  long long den() const { return d_; }
  bool is_zero() const { return n_ == 0; }
  int sign() const { return n_ > 0 ? 1 : n_ < 0 ? -1 : 0; }
  double to_double() const { return double(n_) / double(d_); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational::from128(i128(a.n_) * b.d_ + i128(b.n_) * a.d_, i128(a.d_) * b.d_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return Rational::from128(i128(a.n_) * b.d_ - i128(b.n_) * a.d_, i128(a.d_) * b.d_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational::from128(i128(a.n_) * b.n_, i128(a.d_) * b.d_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.n_ == 0) throw InternalError("Rational: division by zero");
    return Rational::from128(i128(a.n_) * b.d_, i128(a.d_) * b.n_);
  }
  Rational operator-() const { return Rational(-n_, d_); }
  Rational abs() const { return Rational(n_ < 0 ? -n_ : n_, d_); }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.n_ == b.n_ && a.d_ == b.d_;
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return i128(a.n_) * b.d_ < i128(b.n_) * a.d_;
  }
  friend bool operator<=(const Rational& a, const Rational& b) { return a == b || a < b; }

  std::string str() const {
    if (d_ == 1) return std::to_string(n_);
    return std::to_string(n_) + "/" + std::to_string(d_);
  }

 private:
  using i128 = __int128;

  static Rational from128(i128 n, i128 d) {
    if (d == 0) throw InternalError("Rational: zero denominator");
    if (d < 0) { n = -n; d = -d; }
    i128 g = gcd128(n < 0 ? -n : n, d);
    if (g > 1) { n /= g; d /= g; }
    constexpr i128 lim = 0x7fffffffffffffffLL;
    if (n > lim || n < -lim || d > lim) throw InternalError("Rational: overflow");
    Rational r;
    r.n_ = static_cast<long long>(n);
    r.d_ = static_cast<long long>(d);
    return r;
  }

  static i128 gcd128(i128 a, i128 b) {
    while (b) { i128 t = a % b; a = b; b = t; }
    return a < 0 ? -a : a;
  }

  void normalize() {
    if (d_ == 0) throw InternalError("Rational: zero denominator");
    if (d_ < 0) { n_ = -n_; d_ = -d_; }
    long long g = std::gcd(n_ < 0 ? -n_ : n_, d_);
    if (g > 1) { n_ /= g; d_ /= g; }
  }

  long long n_, d_;
};

}  // namespace rrw
