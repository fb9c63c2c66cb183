#pragma once

#include <cmath>
#include <cstdlib>

#include "radstein/rational.hpp"

namespace radstein {

// Abstraction over the two coefficient fields: double (production) and
// rational (exact-identity verification).
template <class T>
struct scalar_traits;

template <>
struct scalar_traits<double> {
  static constexpr bool is_exact = false;
  static double zero() { return 0.0; }
  static double one() { return 1.0; }
  static double from_int(long long v) { return static_cast<double>(v); }
  static double from_ratio(long long n, long long d) {
    return static_cast<double>(n) / static_cast<double>(d);
  }
  static double to_double(double v) { return v; }
  static double abs(double v) { return std::fabs(v); }
  static bool is_zero(double v) { return v == 0.0; }
};

template <>
struct scalar_traits<rational> {
  static constexpr bool is_exact = true;
  static rational zero() { return rational(0); }
  static rational one() { return rational(1); }
  static rational from_int(long long v) { return rational(v); }
  static rational from_ratio(long long n, long long d) { return rational(n, d); }
  static double to_double(const rational& v) { return v.to_double(); }
  static rational abs(const rational& v) { return radstein::abs(v); }
  static bool is_zero(const rational& v) { return v.is_zero(); }
};

template <class T>
T factorial_as(int n) {
  T r = scalar_traits<T>::one();
  for (int i = 2; i <= n; ++i) r *= scalar_traits<T>::from_int(i);
  return r;
}

inline long long factorial_ll(int n) {
  long long r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

inline long long binomial_ll(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace radstein
