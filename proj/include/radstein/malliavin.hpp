#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "radstein/chaos.hpp"
#include "radstein/rng.hpp"
#include "radstein/test_function.hpp"

namespace radstein {

// ---------------------------------------------------------------------------
// Gradient
// ---------------------------------------------------------------------------

// D_k F = sum_n n J_{n-1}(f_n(., k)).  The first-chaos part contributes the
// (constant) mean of the component; every kernel of D_k F omits coordinate k,
// which is what makes D_k F independent of X_k.
template <class T>
chaos_decomposition<T> gradient_component(const chaos_decomposition<T>& dec, index_t k) {
  if (k < 1) throw index_out_of_range();
  chaos_decomposition<T> out(dec.dimension());
  for (const auto& [n, f] : dec.kernels()) {
    const T factor = scalar_traits<T>::from_int(n);
    if (n == 1) {
      out.set_mean(out.mean() + factor * f.value_at(index_tuple{k}));
      continue;
    }
    symmetric_kernel<T> g = slice_kernel(f, k);
    if (g.empty()) continue;
    symmetric_kernel<T> scaled = scale(g, factor);
    if (out.has_order(n - 1))
      out.set_kernel(out.kernel(n - 1) + scaled);
    else
      out.set_kernel(scaled);
  }
  return out;
}

// -D_k L^{-1} F = sum_n J_{n-1}(f_n(., k)): the gradient with the 1/n
// eigenvalue scaling folded in.
template <class T>
chaos_decomposition<T> minus_gradient_Linv_component(const chaos_decomposition<T>& dec,
                                                     index_t k) {
  if (k < 1) throw index_out_of_range();
  chaos_decomposition<T> out(dec.dimension());
  for (const auto& [n, f] : dec.kernels()) {
    if (n == 1) {
      out.set_mean(out.mean() + f.value_at(index_tuple{k}));
      continue;
    }
    symmetric_kernel<T> g = slice_kernel(f, k);
    if (g.empty()) continue;
    if (out.has_order(n - 1))
      out.set_kernel(out.kernel(n - 1) + g);
    else
      out.set_kernel(g);
  }
  return out;
}

template <class T>
struct gradient_field {
  int dimension = 0;
  std::vector<chaos_decomposition<T>> components;  // index k-1 holds D_k F

  const chaos_decomposition<T>& component(index_t k) const {
    if (k < 1 || k > dimension) throw index_out_of_range();
    return components[k - 1];
  }
};

template <class T>
gradient_field<T> gradient(const chaos_decomposition<T>& dec) {
  gradient_field<T> out;
  out.dimension = dec.dimension();
  out.components.reserve(out.dimension);
  for (index_t k = 1; k <= out.dimension; ++k)
    out.components.push_back(gradient_component(dec, k));
  return out;
}

// Pathwise form D_k F(omega) = (F_k^+ - F_k^-) / 2.
template <class T>
T pathwise_gradient(const truth_table<T>& table, index_t k, const rademacher_point& p) {
  if (k < 1 || k > table.d || p.dimension != table.d) throw index_out_of_range();
  const std::uint64_t bit = std::uint64_t{1} << (k - 1);
  return (table.at_mask(p.bits | bit) - table.at_mask(p.bits & ~bit)) /
         scalar_traits<T>::from_int(2);
}

// ---------------------------------------------------------------------------
// Ornstein-Uhlenbeck operator, inverse, semigroup
// ---------------------------------------------------------------------------

// L F = -sum_n n J_n(f_n); the mean is annihilated.
template <class T>
chaos_decomposition<T> apply_L(const chaos_decomposition<T>& dec) {
  chaos_decomposition<T> out(dec.dimension());
  for (const auto& [n, f] : dec.kernels())
    out.set_kernel(scale(f, scalar_traits<T>::from_int(-n)));
  return out;
}

// L^{-1} F = -sum_n (1/n) J_n(f_n), defined on centered variables.
template <class T>
chaos_decomposition<T> apply_L_inverse(const chaos_decomposition<T>& dec,
                                       double centered_tol = 1e-12) {
  if (!dec.is_centered(centered_tol)) throw not_centered();
  chaos_decomposition<T> out(dec.dimension());
  for (const auto& [n, f] : dec.kernels())
    out.set_kernel(scale(f, scalar_traits<T>::from_ratio(-1, n)));
  return out;
}

// P_t F = sum_n e^{-nt} J_n(f_n); preserves the mean.
inline chaos_decomposition<double> apply_Pt(const chaos_decomposition<double>& dec,
                                            double t) {
  if (t < 0) throw error("semigroup time must be nonnegative");
  chaos_decomposition<double> out(dec.dimension(), dec.mean());
  for (const auto& [n, f] : dec.kernels())
    out.set_kernel(scale(f, std::exp(-static_cast<double>(n) * t)));
  return out;
}

// ---------------------------------------------------------------------------
// Divergence
// ---------------------------------------------------------------------------

// The adjoint of D under E[F delta(u)] = E[<DF, u>], realized coordinatewise
// on the finite cube: delta(u) = sum_k X_k E[u_k | X_j, j != k].  Averaging
// over bit k and multiplying by the sign is exactly the adjoint of one
// gradient coordinate, so no matrix is ever formed.
template <class T>
chaos_decomposition<T> divergence(const std::vector<chaos_decomposition<T>>& u, int d) {
  if (d < 1 || d > max_enumeration_dimension) throw dimension_limit();
  if (static_cast<int>(u.size()) != d)
    throw index_out_of_range("divergence needs one component per coordinate");
  const std::size_t size = std::size_t{1} << d;
  const T half = scalar_traits<T>::from_ratio(1, 2);

  std::vector<T> delta(size, scalar_traits<T>::zero());
  for (index_t k = 1; k <= d; ++k) {
    truth_table<T> uk = to_truth_table(u[k - 1], d);
    const std::uint64_t bit = std::uint64_t{1} << (k - 1);
    for (std::uint64_t mask = 0; mask < size; ++mask) {
      T avg = half * (uk.at_mask(mask | bit) + uk.at_mask(mask & ~bit));
      if (mask & bit)
        delta[mask] += avg;
      else
        delta[mask] -= avg;
    }
  }
  return decompose_walsh(truth_table<T>(d, std::move(delta)));
}

// ---------------------------------------------------------------------------
// Mehler-type representation of the semigroup
// ---------------------------------------------------------------------------

// P_t F(omega) = E[F(X^t) | X = omega] where each coordinate is kept with
// probability e^{-t} and resampled uniformly otherwise; collapsing the keep /
// resample patterns coordinatewise gives weight (1+e^{-t})/2 per agreeing
// coordinate and (1-e^{-t})/2 per flipped one.
inline double mehler_evaluate(const truth_table<double>& table, double t,
                              const rademacher_point& p) {
  if (t < 0) throw error("semigroup time must be nonnegative");
  const int d = p.dimension;
  if (d != table.d) throw dimension_too_small();
  if (d > 16) throw dimension_limit("exact resampling sum limited to d <= 16");
  const double pe = 0.5 * (1.0 + std::exp(-t));
  const double pf = 0.5 * (1.0 - std::exp(-t));
  std::vector<double> wpow(d + 1);
  for (int i = 0; i <= d; ++i)
    wpow[i] = std::pow(pe, d - i) * std::pow(pf, i);
  double acc = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d); ++mask)
    acc += wpow[std::popcount(mask ^ p.bits)] * table.at_mask(mask);
  return acc;
}

inline double mehler_evaluate(const chaos_decomposition<double>& dec, double t,
                              const rademacher_point& p) {
  if (p.dimension > 16) throw dimension_limit("exact resampling sum limited to d <= 16");
  return mehler_evaluate(to_truth_table(dec, p.dimension), t, p);
}

// Seeded Monte Carlo fallback for dimensions where the exact resampling sum
// is out of reach; returns the standard error alongside the value.
struct mehler_estimate_result {
  double value = 0.0;
  double std_error = 0.0;
  long long samples = 0;
  std::uint64_t seed = 0;
};

inline mehler_estimate_result mehler_estimate(const chaos_decomposition<double>& dec,
                                              double t, const rademacher_point& p,
                                              long long samples, std::uint64_t seed) {
  if (samples < 2) throw error("need at least two samples");
  const int d = p.dimension;
  const double keep = std::exp(-t);
  counter_rng rng(seed);
  double sum = 0.0, sumsq = 0.0;
  for (long long i = 0; i < samples; ++i) {
    rng_stream draws(rng.split(static_cast<std::uint64_t>(i)));
    std::uint64_t mask = p.bits;
    for (int k = 0; k < d; ++k) {
      if (draws.next_uniform01() < keep) continue;
      if (draws.next_sign())
        mask |= std::uint64_t{1} << k;
      else
        mask &= ~(std::uint64_t{1} << k);
    }
    const double v = evaluate(dec, rademacher_point::from_mask(d, mask));
    sum += v;
    sumsq += v * v;
  }
  mehler_estimate_result res;
  res.value = sum / samples;
  const double var = std::max(0.0, (sumsq - sum * sum / samples) / (samples - 1));
  res.std_error = std::sqrt(var / samples);
  res.samples = samples;
  res.seed = seed;
  return res;
}

// ---------------------------------------------------------------------------
// Chain rule
// ---------------------------------------------------------------------------

struct chain_rule_result {
  double residual = 0.0;
  double bound = 0.0;
  bool pass = false;
};

// | D_k phi(F) - phi'(F) D_k F + (phi''(F_k^+)+phi''(F_k^-))/2 (D_k F)^2 X_k |
// is controlled by (10/3) |phi'''|_inf |D_k F|^3.
inline chain_rule_result chain_rule_residual(const truth_table<double>& table,
                                             const smooth_function& phi, index_t k,
                                             const rademacher_point& p) {
  if (k < 1 || k > table.d) throw index_out_of_range();
  if (!phi.sup_d3) throw missing_norm("chain rule needs a certified third derivative");
  const std::uint64_t bit = std::uint64_t{1} << (k - 1);
  const double fplus = table.at_mask(p.bits | bit);
  const double fminus = table.at_mask(p.bits & ~bit);
  const double fval = table.at(p);
  const double dk = 0.5 * (fplus - fminus);
  const double dphi = 0.5 * (phi.eval(fplus) - phi.eval(fminus));
  const double correction =
      0.5 * (phi.d2(fplus) + phi.d2(fminus)) * dk * dk * p.sign(k);
  chain_rule_result res;
  res.residual = std::fabs(dphi - phi.d1(fval) * dk + correction);
  res.bound = (10.0 / 3.0) * (*phi.sup_d3) * std::fabs(dk) * std::fabs(dk) * std::fabs(dk);
  res.pass = res.residual <= res.bound;
  return res;
}

// ---------------------------------------------------------------------------
// Exchangeable pair drift
// ---------------------------------------------------------------------------

template <class T>
struct drift_check_report {
  struct row {
    int order = 0;
    double max_abs_deviation = 0.0;
    bool pass = false;
  };
  std::vector<row> per_order;
  bool pass = true;
};

// Exchange a uniformly chosen coordinate against an independent resample and
// average: E(J_n' - J_n | X) must equal -(n/d) J_n pointwise, order by order.
template <class T>
drift_check_report<T> exchangeable_drift_check(const chaos_decomposition<T>& dec,
                                               double tol = 1e-12) {
  const int d = dec.dimension();
  if (d < 1 || d > max_enumeration_dimension) throw dimension_limit();
  drift_check_report<T> rep;
  const T invd = scalar_traits<T>::from_ratio(1, d);
  const T half = scalar_traits<T>::from_ratio(1, 2);
  for (const auto& [n, f] : dec.kernels()) {
    double worst = 0.0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d); ++mask) {
      const rademacher_point p = rademacher_point::from_mask(d, mask);
      const T base = evaluate_multiple_integral(f, p);
      T drift = scalar_traits<T>::zero();
      for (index_t i = 1; i <= d; ++i) {
        const T plus = evaluate_multiple_integral(f, p.with_sign(i, +1));
        const T minus = evaluate_multiple_integral(f, p.with_sign(i, -1));
        drift += half * (plus + minus) - base;
      }
      drift *= invd;
      const T expected = scalar_traits<T>::from_ratio(-n, d) * base;
      const double dev =
          scalar_traits<T>::to_double(scalar_traits<T>::abs(drift - expected));
      worst = std::max(worst, dev);
    }
    const bool pass = scalar_traits<T>::is_exact ? worst == 0.0 : worst <= tol;
    rep.per_order.push_back({n, worst, pass});
    rep.pass = rep.pass && pass;
  }
  return rep;
}

}  // namespace radstein
