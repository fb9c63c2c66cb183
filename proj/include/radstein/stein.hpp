#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "radstein/contraction.hpp"
#include "radstein/engine.hpp"
#include "radstein/malliavin.hpp"
#include "radstein/sparse.hpp"
#include "radstein/test_function.hpp"
#include "radstein/weights.hpp"

namespace radstein {

// The two addends of the master smooth-distance bound
//   |E h(F) - E h(Z)| <= min(4||h||, ||h''||) B1 + ||h''|| B2,
// with B1 = E|1 - <DF, -DL^{-1}F>| (and its Cauchy-Schwarz variance form)
// and B2 = (20/3) E<|DL^{-1}F|, |DF|^3>.
struct stein_bound {
  double B1 = 0.0;
  double B1_variance_form = 0.0;
  double B2 = 0.0;
  double total = 0.0;
  std::vector<std::pair<std::string, double>> breakdown;
};

// ---------------------------------------------------------------------------
// Master bound from a decomposition
// ---------------------------------------------------------------------------

inline stein_bound bound_general(const chaos_decomposition<double>& dec,
                                 const test_function& h, double centered_tol = 1e-12) {
  if (!dec.is_centered(centered_tol)) throw not_centered();
  const double sup_h = h.require_sup_h();
  const double sup_h2 = h.require_sup_h2();

  stein_bound out;
  if (dec.is_first_chaos_only()) {
    // On the first chaos <DF, -DL^{-1}F> = sum alpha_k^2 is deterministic,
    // so the bound collapses to the Rademacher-average form and needs no
    // enumeration; this is what keeps n ~ 10^3 partial sums feasible.
    double sum_sq = 0.0, sum_quad = 0.0;
    if (dec.has_order(1)) {
      for (const auto& [t, v] : dec.kernel(1).entries()) {
        (void)t;
        sum_sq += v * v;
        sum_quad += v * v * v * v;
      }
    }
    out.B1 = std::fabs(1.0 - sum_sq);
    out.B1_variance_form = out.B1;
    out.B2 = (20.0 / 3.0) * sum_quad;
  } else {
    const int d = dec.dimension();
    if (d > max_enumeration_dimension) throw dimension_limit();
    const std::size_t size = std::size_t{1} << d;
    std::vector<std::vector<double>> dtab(d), gtab(d);
    for (index_t k = 1; k <= d; ++k) {
      dtab[k - 1] = to_truth_table(gradient_component(dec, k), d).values;
      gtab[k - 1] = to_truth_table(minus_gradient_Linv_component(dec, k), d).values;
    }
    double acc1 = 0.0, acc1sq = 0.0, acc2 = 0.0;
    for (std::size_t mask = 0; mask < size; ++mask) {
      double inner = 0.0, quart = 0.0;
      for (int k = 0; k < d; ++k) {
        const double dk = dtab[k][mask];
        const double gk = gtab[k][mask];
        inner += dk * gk;
        quart += std::fabs(gk) * std::fabs(dk) * dk * dk;
      }
      acc1 += std::fabs(1.0 - inner);
      acc1sq += (1.0 - inner) * (1.0 - inner);
      acc2 += quart;
    }
    out.B1 = acc1 / static_cast<double>(size);
    out.B1_variance_form = std::sqrt(acc1sq / static_cast<double>(size));
    out.B2 = (20.0 / 3.0) * acc2 / static_cast<double>(size);
  }
  const double min_h = std::min(4.0 * sup_h, sup_h2);
  out.total = min_h * out.B1 + sup_h2 * out.B2;
  out.breakdown = {{"smooth-term", min_h * out.B1}, {"fourth-term", sup_h2 * out.B2}};
  return out;
}

// ---------------------------------------------------------------------------
// Rademacher averages
// ---------------------------------------------------------------------------

// min(4||h||, ||h''||) |1 - sum alpha_i^2| + (20/3) ||h''|| sum alpha_i^4,
// with certified tail bounds folded in for truncated infinite families.
inline stein_bound bound_average(const weight_sequence& alpha, const test_function& h) {
  const double sup_h = h.require_sup_h();
  const double sup_h2 = h.require_sup_h2();
  if (alpha.truncated_infinite && !alpha.tail) throw missing_tail_certificate();

  const double fin_sq = alpha.sum_sq();
  const double fin_quad = alpha.sum_quad();
  double dev, quad;
  if (alpha.tail) {
    const double lo = fin_sq + alpha.tail->sq_lo;
    const double hi = fin_sq + alpha.tail->sq_hi;
    dev = std::max(std::fabs(1.0 - lo), std::fabs(1.0 - hi));
    quad = fin_quad + alpha.tail->quad_hi;
  } else {
    dev = std::fabs(1.0 - fin_sq);
    quad = fin_quad;
  }

  stein_bound out;
  out.B1 = dev;
  out.B1_variance_form = dev;
  out.B2 = (20.0 / 3.0) * quad;
  const double min_h = std::min(4.0 * sup_h, sup_h2);
  out.total = min_h * out.B1 + sup_h2 * out.B2;
  out.breakdown = {{"deviation-term", min_h * out.B1}, {"quartic-term", sup_h2 * out.B2}};
  return out;
}

// ---------------------------------------------------------------------------
// Fixed chaos
// ---------------------------------------------------------------------------

// Closed contraction form of the master bound for F = J_q(f), q >= 2:
//   E{(1 - ||DF||^2/q)^2} = |1 - q!||f||^2|^2
//     + q^2 sum_p {(p-1)! C(q-1,p-1)^2}^2 (2q-2p)! ||sym(f *_p^p f) 1_Delta||^2
// together with the fourth-moment bound
//   E||DF||_{l^4}^4 <= q^4 sum_p {(p-1)! C(q-1,p-1)^2}^2 (2q-2p)!
//                      ||f *_p^{p-1} f||^2.
struct fixed_chaos_bound {
  stein_bound bound;
  double variance_identity = 0.0;        // the exact E{(1 - ||DF||^2/q)^2}
  double variance_identity_upper = 0.0;  // with unsymmetrized contractions
  double fourth_moment_bound = 0.0;      // bound on E||DF||_{l^4}^4
};

inline fixed_chaos_bound bound_fixed_chaos(const symmetric_kernel<double>& f,
                                           const test_function& h) {
  const int q = f.order();
  if (q < 2) throw order_mismatch("fixed-chaos bound needs q >= 2");
  const double sup_h = h.require_sup_h();
  const double sup_h2 = h.require_sup_h2();

  fixed_chaos_bound out;
  const double nfq = factorial_ll(q) * l2_norm_squared(f);
  const double mismatch = (1.0 - nfq) * (1.0 - nfq);
  out.variance_identity = mismatch;
  out.variance_identity_upper = mismatch;
  out.bound.breakdown.push_back({"variance-mismatch", mismatch});

  for (int p = 1; p <= q - 1; ++p) {
    const double cp = static_cast<double>(factorial_ll(p - 1)) *
                      binomial_ll(q - 1, p - 1) * binomial_ll(q - 1, p - 1);
    const double coeff = static_cast<double>(q) * q * cp * cp *
                         factorial_ll(2 * (q - p));
    const auto norms = contraction_norms(f, f, p, p);
    out.variance_identity += coeff * norms.sym_off_diagonal;
    out.variance_identity_upper += coeff * norms.off_diagonal;
    out.bound.breakdown.push_back(
        {"variance-contraction p=" + std::to_string(p), coeff * norms.sym_off_diagonal});
  }
  for (int p = 1; p <= q; ++p) {
    const double cp = static_cast<double>(factorial_ll(p - 1)) *
                      binomial_ll(q - 1, p - 1) * binomial_ll(q - 1, p - 1);
    const double coeff = static_cast<double>(q) * q * q * q * cp * cp *
                         factorial_ll(2 * (q - p));
    const double term = coeff * contraction_norms(f, f, p, p - 1).full;
    out.fourth_moment_bound += term;
    out.bound.breakdown.push_back({"fourth-contraction p=" + std::to_string(p), term});
  }

  out.bound.B1_variance_form = std::sqrt(out.variance_identity);
  out.bound.B1 = out.bound.B1_variance_form;  // exact form not available here
  out.bound.B2 = (20.0 / (3.0 * q)) * out.fourth_moment_bound;
  const double min_h = std::min(4.0 * sup_h, sup_h2);
  out.bound.total = min_h * out.bound.B1_variance_form + sup_h2 * out.bound.B2;
  out.bound.breakdown.push_back({"smooth-term", min_h * out.bound.B1_variance_form});
  out.bound.breakdown.push_back({"fourth-term", sup_h2 * out.bound.B2});
  return out;
}

// ---------------------------------------------------------------------------
// Normalized double integrals
// ---------------------------------------------------------------------------

struct double_integral_bound {
  double value = 0.0;              // smaller of the two displayed variants
  double via_cross_contraction = 0.0;
  double via_diagonal_restriction = 0.0;
  double trace_chain = 0.0;        // variant through Trace([f]^4)
  double trace = 0.0;
  std::vector<std::pair<std::string, double>> breakdown;
};

// 4 sqrt(2) min(4||h||, ||h''||) ||f *_1^1 f . 1_Delta|| + 160 ||h''|| X,
// with X either ||f *_2^1 f||^2 or ||f *_1^1 f . 1_{Delta^c}||^2, plus the
// trace chain 4 sqrt(2) min(...) sqrt(Tr[f]^4) + 160 ||h''|| Tr[f]^4.
inline double_integral_bound bound_double_integral(const symmetric_kernel<double>& f,
                                                   const test_function& h,
                                                   double normalization_tol = 1e-9) {
  if (f.order() != 2) throw order_mismatch("double-integral bound needs order 2");
  const double sup_h = h.require_sup_h();
  const double sup_h2 = h.require_sup_h2();
  if (std::fabs(2.0 * l2_norm_squared(f) - 1.0) > normalization_tol)
    throw not_normalized("needs 2 ||f||^2 = 1");

  const auto c11 = contraction_norms(f, f, 1, 1);
  const double cross = std::sqrt(c11.off_diagonal);
  const double t21 = contraction_norms(f, f, 2, 1).full;
  const double min_h = std::min(4.0 * sup_h, sup_h2);
  const double lead = 4.0 * std::sqrt(2.0) * min_h * cross;

  double_integral_bound out;
  out.trace = c11.full;
  out.via_cross_contraction = lead + 160.0 * sup_h2 * t21;
  out.via_diagonal_restriction = lead + 160.0 * sup_h2 * c11.diagonal;
  out.value = std::min(out.via_cross_contraction, out.via_diagonal_restriction);
  out.trace_chain =
      4.0 * std::sqrt(2.0) * min_h * std::sqrt(out.trace) + 160.0 * sup_h2 * out.trace;
  out.breakdown = {{"offdiagonal-contraction-term", lead},
                   {"cross-contraction-term", 160.0 * sup_h2 * t21},
                   {"trace", out.trace}};
  return out;
}

// ---------------------------------------------------------------------------
// Sum of a single and a double integral
// ---------------------------------------------------------------------------

struct single_double_bound {
  double value = 0.0;
  double smooth_term = 0.0;
  double fourth_term = 0.0;
  std::vector<std::pair<std::string, double>> breakdown;
};

// min(4||h||,||h''||)(2 sqrt(2) ||g *_1^1 g 1_Delta|| + 3 ||f *_1^1 g||)
//   + (160/3) ||h''|| sum_k [ f(k)^4 + 16 (sum_i |g(i,k)|)^4 ].
inline single_double_bound bound_single_plus_double(const weight_sequence& fvec,
                                                    const symmetric_kernel<double>& g,
                                                    const test_function& h,
                                                    double normalization_tol = 1e-9) {
  if (g.order() != 2) throw order_mismatch("needs an order-2 kernel");
  const double sup_h = h.require_sup_h();
  const double sup_h2 = h.require_sup_h2();
  const symmetric_kernel<double> f = first_order_kernel(fvec);

  const double var = l2_norm_squared(f) + 2.0 * l2_norm_squared(g);
  if (std::fabs(var - 1.0) > normalization_tol) throw not_normalized("needs Var F = 1");

  const double gterm = std::sqrt(contraction_norms(g, g, 1, 1).off_diagonal);
  const double fg = f.empty() ? 0.0 : std::sqrt(contraction_norms(f, g, 1, 1).full);

  double quart = 0.0;
  for (const auto& [t, v] : f.entries()) {
    (void)t;
    quart += v * v * v * v;
  }
  std::map<index_t, double> row_abs;
  for (const auto& [t, v] : g.entries()) {
    row_abs[t[0]] += std::fabs(v);
    row_abs[t[1]] += std::fabs(v);
  }
  for (const auto& [k, s] : row_abs) {
    (void)k;
    quart += 16.0 * s * s * s * s;
  }

  const double min_h = std::min(4.0 * sup_h, sup_h2);
  single_double_bound out;
  out.smooth_term = min_h * (2.0 * std::sqrt(2.0) * gterm + 3.0 * fg);
  out.fourth_term = (160.0 / 3.0) * sup_h2 * quart;
  out.value = out.smooth_term + out.fourth_term;
  out.breakdown = {{"double-contraction", 2.0 * std::sqrt(2.0) * gterm},
                   {"cross-contraction", 3.0 * fg},
                   {"quartic-sum", quart}};
  return out;
}

// ---------------------------------------------------------------------------
// Weighted 2-runs
// ---------------------------------------------------------------------------

// Var G_n = (3/16) sum alpha_i^2 + (1/8) sum alpha_i alpha_{i+1}.
template <class T>
T two_runs_variance(const std::vector<T>& alpha) {
  T s2 = scalar_traits<T>::zero();
  T s11 = scalar_traits<T>::zero();
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    s2 += alpha[i] * alpha[i];
    if (i + 1 < alpha.size()) s11 += alpha[i] * alpha[i + 1];
  }
  return scalar_traits<T>::from_ratio(3, 16) * s2 +
         scalar_traits<T>::from_ratio(1, 8) * s11;
}

struct two_runs_bound {
  double value = 0.0;
  double var_g = 0.0;
  double first_term = 0.0;   // (7/16) min(4||h||,||h''||) sqrt(sum alpha^4) / VarG
  double second_term = 0.0;  // (35/24) ||h''|| sum alpha^4 / VarG^2
};

inline two_runs_bound bound_two_runs(const weight_sequence& alpha, const test_function& h) {
  const double sup_h = h.require_sup_h();
  const double sup_h2 = h.require_sup_h2();
  const double var_g = two_runs_variance(alpha.values);
  if (!(var_g > 0.0)) throw degenerate_variance();
  const double quad = alpha.sum_quad();
  const double min_h = std::min(4.0 * sup_h, sup_h2);

  two_runs_bound out;
  out.var_g = var_g;
  out.first_term = (7.0 / 16.0) * min_h * std::sqrt(quad) / var_g;
  out.second_term = (35.0 / 24.0) * sup_h2 * quad / (var_g * var_g);
  out.value = out.first_term + out.second_term;
  return out;
}

// ---------------------------------------------------------------------------
// Wasserstein smoothing and the quadratic comparison bound
// ---------------------------------------------------------------------------

// d_W(F, Z) <= sqrt(2 (B1 + B2)(5 + E|F|)) whenever 4(B1 + B2) <= 5; the
// empty optional signals that the smoothing argument does not apply.
inline std::optional<double> wasserstein_bound(double B1, double B2, double eabs_f) {
  if (4.0 * (B1 + B2) > 5.0) return std::nullopt;
  return std::sqrt(2.0 * (B1 + B2) * (5.0 + eabs_f));
}

// sqrt(Tr([f]^4)/2) + (5/2) sum_j (sum_i f(i,j)^2)^{3/2}.
inline double chatterjee_bound(const symmetric_kernel<double>& f) {
  if (f.order() != 2) throw order_mismatch("quadratic bound needs order 2");
  if (f.empty()) return 0.0;
  const double tr = trace_power4(f);
  std::map<index_t, double> row_sq;
  for (const auto& [t, v] : f.entries()) {
    row_sq[t[0]] += v * v;
    row_sq[t[1]] += v * v;
  }
  double rows = 0.0;
  for (const auto& [j, s] : row_sq) {
    (void)j;
    rows += s * std::sqrt(s);
  }
  return std::sqrt(0.5 * tr) + 2.5 * rows;
}

// ---------------------------------------------------------------------------
// Sparse-set statistics
// ---------------------------------------------------------------------------

// The two structural sparseness statistics next to the fully explicit
// contraction bound.  The asymptotic normal-approximation statement behind
// them carries only existential constants, so the statistics and the
// computable bound are what gets returned.
struct sparse_bound_stats {
  double stat1 = 0.0;  // |F#|^{1/2} / |F|
  double stat2 = 0.0;  // (max_j |F*_j| / |F|)^{1/4}
  fixed_chaos_bound exact;
};

inline sparse_bound_stats bound_sparse_stats(const sparse_index_set& F,
                                             const test_function& h) {
  if (F.empty()) throw empty_set();
  sparse_bound_stats out;
  const double card = static_cast<double>(F.cardinality());
  out.stat1 = std::sqrt(static_cast<double>(sharp_count(F))) / card;
  out.stat2 = std::pow(static_cast<double>(max_star_count(F)) / card, 0.25);
  out.exact = bound_fixed_chaos(multilinear_kernel(F), h);
  return out;
}

struct weighted_sparse_stats {
  double stat1 = 0.0;  // m^{2d}(F#)^{1/2} / m^d(F)
  double stat2 = 0.0;  // (sup_j m^d(F*_j) / m^d(F))^{1/4}
};

// Product-measure version: m_beta(A) = sum_{i in A} beta_i^2 and tuples are
// weighted by the product of their coordinate masses.
inline weighted_sparse_stats bound_weighted_sparse(const weight_sequence& beta,
                                                   const sparse_index_set& F,
                                                   const test_function& h) {
  (void)h;  // the statistics do not depend on h; kept for interface symmetry
  if (F.empty()) throw empty_set();
  if (F.d() > max_sharp_dimension) throw dimension_limit();

  const auto& reps = F.reps();
  std::vector<double> rep_weight(reps.size(), 0.0);
  for (std::size_t i = 0; i < reps.size(); ++i) {
    double w = 1.0;
    for (index_t c : reps[i]) {
      const double b = beta.alpha(c);
      w *= b * b;
    }
    rep_weight[i] = w;
  }
  const double dfact = static_cast<double>(factorial_ll(F.d()));
  double md = 0.0;
  for (double w : rep_weight) md += w;
  md *= dfact;
  if (!(md > 0.0)) throw zero_measure();

  std::map<index_t, double> star_measure;
  for (std::size_t i = 0; i < reps.size(); ++i)
    for (index_t c : reps[i]) star_measure[c] += rep_weight[i];
  double max_star = 0.0;
  for (const auto& [c, w] : star_measure) {
    (void)c;
    max_star = std::max(max_star, w);
  }
  max_star *= dfact;

  const auto scan = detail::sharp_scan(F, [&](int id) { return rep_weight[id]; });
  const double m2d_sharp = dfact * dfact * scan.weighted_pairs;

  weighted_sparse_stats out;
  out.stat1 = std::sqrt(m2d_sharp) / md;
  out.stat2 = std::pow(max_star / md, 0.25);
  return out;
}

// ---------------------------------------------------------------------------
// Scaling study over a fractional-product family
// ---------------------------------------------------------------------------

struct scaling_row {
  index_t N = 0;
  long long cardinality = 0;
  long long max_star = 0;
  long long sharp = 0;
  double stat1 = 0.0;
  double stat2 = 0.0;
  double exact_bound = 0.0;
  double exact_smooth_term = 0.0;  // the contraction (B1) addend alone
};

struct scaling_result {
  std::vector<scaling_row> rows;
  double slope_cardinality = 0.0;
  double slope_star_ratio = 0.0;   // of max|F*|/|F|
  double slope_exact_bound = 0.0;
  double slope_exact_smooth = 0.0;
};

inline scaling_result scaling_table(const cover& cov, const std::vector<index_t>& Ns,
                                    const test_function& h,
                                    const injection_spec& phi = {}) {
  scaling_result out;
  std::vector<double> xs, card_ys, star_ys, bound_ys, smooth_ys;
  for (index_t N : Ns) {
    const sparse_index_set F = fractional_product(cov, N, phi);
    scaling_row row;
    row.N = N;
    row.cardinality = F.cardinality();
    row.max_star = max_star_count(F);
    row.sharp = sharp_count(F);
    const double card = static_cast<double>(row.cardinality);
    row.stat1 = std::sqrt(static_cast<double>(row.sharp)) / card;
    row.stat2 = std::pow(static_cast<double>(row.max_star) / card, 0.25);
    const auto fc = bound_fixed_chaos(multilinear_kernel(F), h);
    row.exact_bound = fc.bound.total;
    row.exact_smooth_term =
        std::min(4.0 * h.require_sup_h(), h.require_sup_h2()) * fc.bound.B1_variance_form;
    out.rows.push_back(row);

    xs.push_back(static_cast<double>(N));
    card_ys.push_back(card);
    star_ys.push_back(static_cast<double>(row.max_star) / card);
    bound_ys.push_back(row.exact_bound);
    smooth_ys.push_back(row.exact_smooth_term);
  }
  if (xs.size() >= 2) {
    out.slope_cardinality = fit_loglog_slope(xs, card_ys);
    out.slope_star_ratio = fit_loglog_slope(xs, star_ys);
    out.slope_exact_bound = fit_loglog_slope(xs, bound_ys);
    out.slope_exact_smooth = fit_loglog_slope(xs, smooth_ys);
  }
  return out;
}

}  // namespace radstein
