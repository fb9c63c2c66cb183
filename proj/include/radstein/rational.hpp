#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>

#include "radstein/errors.hpp"

namespace radstein {

// Exact rational scalar on 64-bit numerator/denominator with 128-bit
// intermediates.  Used by the identity tests where equalities must hold
// bit-exactly; throws rational_overflow instead of wrapping.
class rational {
 public:
  rational() : num_(0), den_(1) {}
  rational(long long n) : num_(n), den_(1) {}  // NOLINT: implicit by design
  rational(long long n, long long d) { assign(n, d); }

  static rational from_ratio(long long n, long long d) { return rational(n, d); }

  long long num() const { return num_; }
  long long den() const { return den_; }

  double to_double() const {
    return static_cast<double>(static_cast<long double>(num_) /
                               static_cast<long double>(den_));
  }

  bool is_zero() const { return num_ == 0; }

  friend rational operator+(const rational& a, const rational& b) {
    __int128 g = gcd128(a.den_, b.den_);
    __int128 bd = a.den_ / g;
    __int128 dd = b.den_ / g;
    __int128 num = static_cast<__int128>(a.num_) * dd +
                   static_cast<__int128>(b.num_) * bd;
    __int128 den = static_cast<__int128>(a.den_) * dd;
    return make_reduced(num, den);
  }

  friend rational operator-(const rational& a, const rational& b) {
    return a + (-b);
  }

  rational operator-() const {
    rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }

  friend rational operator*(const rational& a, const rational& b) {
    __int128 g1 = gcd128(abs128(a.num_), b.den_);
    __int128 g2 = gcd128(abs128(b.num_), a.den_);
    __int128 num = (static_cast<__int128>(a.num_) / g1) *
                   (static_cast<__int128>(b.num_) / g2);
    __int128 den = (static_cast<__int128>(a.den_) / g2) *
                   (static_cast<__int128>(b.den_) / g1);
    return make_reduced(num, den);
  }

  friend rational operator/(const rational& a, const rational& b) {
    if (b.num_ == 0) throw error("rational division by zero");
    rational inv;
    inv.num_ = b.den_;
    inv.den_ = b.num_;
    if (inv.den_ < 0) {
      inv.num_ = -inv.num_;
      inv.den_ = -inv.den_;
    }
    return a * inv;
  }

  rational& operator+=(const rational& o) { return *this = *this + o; }
  rational& operator-=(const rational& o) { return *this = *this - o; }
  rational& operator*=(const rational& o) { return *this = *this * o; }
  rational& operator/=(const rational& o) { return *this = *this / o; }

  friend bool operator==(const rational& a, const rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const rational& a, const rational& b) { return !(a == b); }
  friend bool operator<(const rational& a, const rational& b) {
    return static_cast<__int128>(a.num_) * b.den_ <
           static_cast<__int128>(b.num_) * a.den_;
  }
  friend bool operator>(const rational& a, const rational& b) { return b < a; }
  friend bool operator<=(const rational& a, const rational& b) { return !(b < a); }
  friend bool operator>=(const rational& a, const rational& b) { return !(a < b); }

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend std::ostream& operator<<(std::ostream& os, const rational& r) {
    return os << r.str();
  }

 private:
  void assign(long long n, long long d) {
    if (d == 0) throw error("rational with zero denominator");
    *this = make_reduced(n, d);
  }

  static __int128 abs128(__int128 v) { return v < 0 ? -v : v; }

  static __int128 gcd128(__int128 a, __int128 b) {
    a = abs128(a);
    b = abs128(b);
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    return a == 0 ? 1 : a;
  }

  static rational make_reduced(__int128 num, __int128 den) {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    __int128 g = gcd128(num, den);
    num /= g;
    den /= g;
    constexpr __int128 lim = static_cast<__int128>(INT64_MAX);
    if (num > lim || num < -lim || den > lim)
      throw rational_overflow();
    rational r;
    r.num_ = static_cast<long long>(num);
    r.den_ = static_cast<long long>(den);
    return r;
  }

  long long num_;
  long long den_;
};

inline rational abs(const rational& a) { return a < rational(0) ? -a : a; }

}  // namespace radstein
