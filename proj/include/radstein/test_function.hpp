#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>

#include "radstein/errors.hpp"

namespace radstein {

// Test function h for the smooth-distance bounds.  The sup-norm fields are
// certified upper bounds on ||h||, ||h'||, ||h''||, ||h'''||; any of them may
// be left unavailable, and operations that need a missing one throw.
struct test_function {
  std::string name;
  std::function<double(double)> eval;
  std::optional<double> sup_h;
  std::optional<double> sup_h1;
  std::optional<double> sup_h2;
  std::optional<double> sup_h3;

  double require_sup_h() const {
    if (!sup_h) throw missing_norm("||h|| not certified");
    return *sup_h;
  }
  double require_sup_h2() const {
    if (!sup_h2) throw missing_norm("||h''|| not certified");
    return *sup_h2;
  }
};

// Thrice-differentiable scalar function with pointwise derivatives, used by
// the chain-rule check; carries the same certified-norm contract.
struct smooth_function {
  std::string name;
  std::function<double(double)> eval;
  std::function<double(double)> d1;
  std::function<double(double)> d2;
  std::optional<double> sup_d3;
};

// ---------------------------------------------------------------------------
// Built-ins
// ---------------------------------------------------------------------------

// h(x) = cos(a x + b): |h^{(k)}| <= |a|^k.
inline test_function cosine_test(double a, double b = 0.0) {
  test_function h;
  h.name = "cos:a=" + std::to_string(a) + ",b=" + std::to_string(b);
  h.eval = [a, b](double x) { return std::cos(a * x + b); };
  h.sup_h = 1.0;
  h.sup_h1 = std::fabs(a);
  h.sup_h2 = a * a;
  h.sup_h3 = std::fabs(a) * a * a;
  return h;
}

inline test_function sine_test(double a, double b = 0.0) {
  test_function h;
  h.name = "sin:a=" + std::to_string(a) + ",b=" + std::to_string(b);
  h.eval = [a, b](double x) { return std::sin(a * x + b); };
  h.sup_h = 1.0;
  h.sup_h1 = std::fabs(a);
  h.sup_h2 = a * a;
  h.sup_h3 = std::fabs(a) * a * a;
  return h;
}

// C^3 compactly supported bump (1-x^2)^4 on [-1,1].  The derivative bounds
// come from the critical points of the closed forms and carry a little
// headroom; the unit tests re-verify them by dense sampling.
inline test_function bump_test() {
  test_function h;
  h.name = "bump";
  h.eval = [](double x) {
    if (std::fabs(x) >= 1.0) return 0.0;
    const double u = 1.0 - x * x;
    return u * u * u * u;
  };
  h.sup_h = 1.0;
  h.sup_h1 = 1.905;   // max of 8|x|(1-x^2)^3 at x^2 = 1/7
  h.sup_h2 = 8.0;     // attained at x = 0
  h.sup_h3 = 31.63;   // max of 16|x(1-x^2)(9-21x^2)|, about 31.6211
  return h;
}

inline smooth_function cosine_smooth(double a, double b = 0.0) {
  smooth_function f;
  f.name = "cos:a=" + std::to_string(a) + ",b=" + std::to_string(b);
  f.eval = [a, b](double x) { return std::cos(a * x + b); };
  f.d1 = [a, b](double x) { return -a * std::sin(a * x + b); };
  f.d2 = [a, b](double x) { return -a * a * std::cos(a * x + b); };
  f.sup_d3 = std::fabs(a) * a * a;
  return f;
}

inline smooth_function sine_smooth(double a = 1.0, double b = 0.0) {
  smooth_function f;
  f.name = "sin:a=" + std::to_string(a) + ",b=" + std::to_string(b);
  f.eval = [a, b](double x) { return std::sin(a * x + b); };
  f.d1 = [a, b](double x) { return a * std::cos(a * x + b); };
  f.d2 = [a, b](double x) { return -a * a * std::sin(a * x + b); };
  f.sup_d3 = std::fabs(a) * a * a;
  return f;
}

// x^3 has unbounded lower derivatives but a constant third one, which is all
// the chain rule needs.
inline smooth_function cubic_smooth() {
  smooth_function f;
  f.name = "cubic";
  f.eval = [](double x) { return x * x * x; };
  f.d1 = [](double x) { return 3.0 * x * x; };
  f.d2 = [](double x) { return 6.0 * x; };
  f.sup_d3 = 6.0;
  return f;
}

}  // namespace radstein
