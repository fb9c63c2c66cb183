#pragma once

#include <cmath>
#include <functional>

#include "radstein/generator.hpp"
#include "radstein/kernel.hpp"

namespace radstein::testing {

// General (possibly diagonal-hitting, asymmetric) random kernel.
inline general_kernel<double> random_general_kernel(rng_stream& s, int order,
                                                    index_t max_coord, int max_entries) {
  general_kernel<double> k(order);
  const int entries = static_cast<int>(s.next_int(1, max_entries));
  for (int e = 0; e < entries; ++e) {
    index_tuple t(order);
    for (auto& c : t) c = s.next_int(1, max_coord);
    k.set(t, scalar_traits<double>::to_double(random_dyadic<double>(s)));
  }
  return k;
}

// Adaptive Simpson quadrature, used as the independent route for the
// semigroup integral identity.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol, int depth = 24) {
  const double c = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fc = f(c);
  std::function<double(double, double, double, double, double, double, int)> rec =
      [&](double x0, double x2, double f0, double f1, double f2, double whole,
          int lvl) -> double {
    const double x1l = 0.5 * (x0 + 0.5 * (x0 + x2));
    const double xm = 0.5 * (x0 + x2);
    const double x1r = 0.5 * (xm + x2);
    const double fl = f(x1l), fr = f(x1r);
    const double left = (xm - x0) / 6.0 * (f0 + 4.0 * fl + f1);
    const double right = (x2 - xm) / 6.0 * (f1 + 4.0 * fr + f2);
    if (lvl <= 0 || std::fabs(left + right - whole) < 15.0 * tol)
      return left + right + (left + right - whole) / 15.0;
    return rec(x0, xm, f0, fl, f1, left, lvl - 1) +
           rec(xm, x2, f1, fr, f2, right, lvl - 1);
  };
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fc + fb);
  return rec(a, b, fa, fc, fb, whole, depth);
}

}  // namespace radstein::testing
