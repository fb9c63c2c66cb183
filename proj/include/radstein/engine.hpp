#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "radstein/chaos.hpp"
#include "radstein/quadrature.hpp"
#include "radstein/rng.hpp"
#include "radstein/test_function.hpp"

namespace radstein {

// Numerical verdict with provenance: exact enumeration carries a zero
// standard error and the full atom count.
struct estimate {
  double value = 0.0;
  double std_error = 0.0;
  long long samples = 0;
  std::uint64_t seed = 0;
};

// Exact expectation under the uniform law on {-1,+1}^d, walking the cube in
// Gray-code order so successive points differ in one bit.
template <class Fn>
estimate enumerate_expectation(const Fn& f, int d) {
  if (d < 0 || d > max_enumeration_dimension) throw dimension_limit();
  const std::uint64_t size = std::uint64_t{1} << d;
  double acc = 0.0;
  for (std::uint64_t i = 0; i < size; ++i) {
    const std::uint64_t mask = i ^ (i >> 1);
    acc += f(rademacher_point::from_mask(d, mask));
  }
  estimate res;
  res.value = acc / static_cast<double>(size);
  res.samples = static_cast<long long>(size);
  return res;
}

// Same walk with exact scalar accumulation, for the identity tests.
template <class T, class Fn>
T enumerate_expectation_exact(const Fn& f, int d) {
  if (d < 0 || d > max_enumeration_dimension) throw dimension_limit();
  const std::uint64_t size = std::uint64_t{1} << d;
  T acc = scalar_traits<T>::zero();
  for (std::uint64_t i = 0; i < size; ++i) {
    const std::uint64_t mask = i ^ (i >> 1);
    acc += f(rademacher_point::from_mask(d, mask));
  }
  return acc / scalar_traits<T>::from_int(static_cast<long long>(size));
}

// Seeded Monte Carlo estimate with plug-in standard error.  Each sample is a
// pure function of (seed, sample index): partitions across workers merge to
// the same result regardless of worker count.
template <class Fn>
estimate mc_estimate(const Fn& f, int d, long long samples, std::uint64_t seed) {
  if (samples < 2) throw error("need at least two samples");
  if (d < 0 || d > 64) throw dimension_limit();
  counter_rng rng(seed);
  const std::uint64_t mask_all = d == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << d) - 1);
  double sum = 0.0, sumsq = 0.0;
  for (long long i = 0; i < samples; ++i) {
    const std::uint64_t mask = rng.at(static_cast<std::uint64_t>(i)) & mask_all;
    const double v = f(rademacher_point::from_mask(d, mask));
    sum += v;
    sumsq += v * v;
  }
  estimate res;
  res.value = sum / static_cast<double>(samples);
  const double var = std::max(0.0, (sumsq - sum * sum / samples) / (samples - 1));
  res.std_error = std::sqrt(var / samples);
  res.samples = samples;
  res.seed = seed;
  return res;
}

// E[h(Z)] by 128-node Gauss-Hermite quadrature, cross-checked against the
// 256-node rule; the two must agree to 1e-10.
inline double gaussian_expectation(const test_function& h) {
  const double v128 = gaussian_expectation_with_rule(h.eval, gauss_hermite(128));
  const double v256 = gaussian_expectation_with_rule(h.eval, gauss_hermite(256));
  if (std::fabs(v128 - v256) >= 1e-10)
    throw quadrature_unstable("128/256 node rules disagree: |" +
                              std::to_string(v128) + " - " + std::to_string(v256) + "|");
  return v128;
}

// |E[h(F)] - E[h(Z)]| with the F-side enumerated exactly.
inline double distance(const chaos_decomposition<double>& dec, const test_function& h) {
  const int d = dec.dimension();
  const estimate ef = enumerate_expectation(
      [&](const rademacher_point& p) { return h.eval(evaluate(dec, p)); }, d);
  return std::fabs(ef.value - gaussian_expectation(h));
}

inline estimate distance_mc(const chaos_decomposition<double>& dec, const test_function& h,
                            long long samples, std::uint64_t seed) {
  const int d = dec.dimension();
  estimate ef = mc_estimate(
      [&](const rademacher_point& p) { return h.eval(evaluate(dec, p)); }, d, samples,
      seed);
  ef.value = std::fabs(ef.value - gaussian_expectation(h));
  return ef;
}

// Least-squares slope of log(y) against log(x), for the rate studies.
inline double fit_loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw error("slope fit needs >= 2 points");
  const std::size_t n = xs.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(xs[i]);
    const double ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace radstein
