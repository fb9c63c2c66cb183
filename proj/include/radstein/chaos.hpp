#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <vector>

#include "radstein/contraction.hpp"
#include "radstein/kernel.hpp"

namespace radstein {

inline constexpr int max_enumeration_dimension = 24;

// A point of {-1,+1}^d; bit k-1 set means X_k = +1.  Coordinates beyond the
// dimension are undefined and accessing them is an error.
struct rademacher_point {
  int dimension = 0;
  std::uint64_t bits = 0;

  static rademacher_point from_mask(int d, std::uint64_t mask) {
    if (d < 0 || d > 64) throw dimension_limit();
    return {d, d == 64 ? mask : (mask & ((std::uint64_t{1} << d) - 1))};
  }

  static rademacher_point from_signs(const std::vector<int>& signs) {
    rademacher_point p{static_cast<int>(signs.size()), 0};
    for (std::size_t i = 0; i < signs.size(); ++i)
      if (signs[i] > 0) p.bits |= std::uint64_t{1} << i;
    return p;
  }

  int sign(index_t k) const {
    if (k < 1 || k > dimension) throw dimension_too_small("coordinate beyond dimension");
    return (bits >> (k - 1)) & 1u ? +1 : -1;
  }

  rademacher_point with_sign(index_t k, int s) const {
    if (k < 1 || k > dimension) throw index_out_of_range();
    rademacher_point p = *this;
    if (s > 0)
      p.bits |= std::uint64_t{1} << (k - 1);
    else
      p.bits &= ~(std::uint64_t{1} << (k - 1));
    return p;
  }
};

// Values of a functional on the full cube, indexed lexicographically with
// coordinate 1 as the least significant bit.
template <class T>
struct truth_table {
  int d = 0;
  std::vector<T> values;

  truth_table() = default;
  truth_table(int dim, std::vector<T> vals) : d(dim), values(std::move(vals)) {
    if (d < 0 || d > max_enumeration_dimension) throw dimension_limit();
    if (values.size() != (std::size_t{1} << d)) throw bad_table_length();
  }

  const T& at_mask(std::uint64_t mask) const { return values[mask]; }
  const T& at(const rademacher_point& p) const {
    if (p.dimension != d) throw dimension_too_small();
    return values[p.bits];
  }
};

// F = c0 + sum_n J_n(f_n): a mean plus at most one symmetric kernel per
// order, all supported inside [dimension].
template <class T>
class chaos_decomposition {
 public:
  chaos_decomposition() : dimension_(0), mean_(scalar_traits<T>::zero()) {}
  explicit chaos_decomposition(int dimension, T mean = scalar_traits<T>::zero())
      : dimension_(dimension), mean_(mean) {
    if (dimension < 0) throw dimension_too_small();
  }

  int dimension() const { return dimension_; }
  const T& mean() const { return mean_; }
  void set_mean(const T& m) { mean_ = m; }

  const std::map<int, symmetric_kernel<T>>& kernels() const { return kernels_; }

  int max_order() const { return kernels_.empty() ? 0 : kernels_.rbegin()->first; }

  bool has_order(int n) const { return kernels_.count(n) > 0; }

  const symmetric_kernel<T>& kernel(int n) const { return kernels_.at(n); }

  void set_kernel(const symmetric_kernel<T>& k) {
    if (k.support_bound() > dimension_)
      throw dimension_too_small("kernel support exceeds declared dimension");
    if (k.empty())
      kernels_.erase(k.order());
    else
      kernels_[k.order()] = k;
  }

  bool is_centered(double tol = 1e-12) const {
    if constexpr (scalar_traits<T>::is_exact)
      return scalar_traits<T>::is_zero(mean_);
    else
      return std::fabs(scalar_traits<T>::to_double(mean_)) <= tol;
  }

  // Pure first chaos: a Rademacher average, possibly plus a mean.
  bool is_first_chaos_only() const {
    for (const auto& [n, k] : kernels_) {
      (void)k;
      if (n != 1) return false;
    }
    return true;
  }

 private:
  int dimension_;
  T mean_;
  std::map<int, symmetric_kernel<T>> kernels_;
};

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

// J_q(f) at a sample point: q! sum over increasing tuples of f times the
// product of the corresponding signs.
template <class T>
T evaluate_multiple_integral(const symmetric_kernel<T>& f, const rademacher_point& p) {
  if (f.support_bound() > p.dimension) throw dimension_too_small();
  T acc = scalar_traits<T>::zero();
  for (const auto& [t, v] : f.entries()) {
    int sgn = 1;
    for (index_t c : t) sgn *= p.sign(c);
    if (sgn > 0)
      acc += v;
    else
      acc -= v;
  }
  return factorial_as<T>(f.order()) * acc;
}

template <class T>
T evaluate(const chaos_decomposition<T>& dec, const rademacher_point& p) {
  T acc = dec.mean();
  for (const auto& [n, k] : dec.kernels()) {
    (void)n;
    acc += evaluate_multiple_integral(k, p);
  }
  return acc;
}

template <class T>
truth_table<T> to_truth_table(const chaos_decomposition<T>& dec, int d = -1) {
  if (d < 0) d = dec.dimension();
  if (d > max_enumeration_dimension) throw dimension_limit();
  for (const auto& [n, k] : dec.kernels()) {
    (void)n;
    if (k.support_bound() > d) throw dimension_too_small();
  }
  std::vector<T> vals;
  vals.reserve(std::size_t{1} << d);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d); ++mask)
    vals.push_back(evaluate(dec, rademacher_point::from_mask(d, mask)));
  return truth_table<T>(d, std::move(vals));
}

// ---------------------------------------------------------------------------
// Decomposition
// ---------------------------------------------------------------------------

// Fast Walsh-Hadamard transform of the table: after the butterflies,
// hat[S] = E[F . prod_{i in S} X_i].  The in-place stage maps the pair
// (value at bit clear, value at bit set) to (sum, difference).
template <class T>
std::vector<T> walsh_coefficients(const truth_table<T>& table) {
  std::vector<T> a = table.values;
  const std::size_t size = a.size();
  for (int b = 0; b < table.d; ++b) {
    const std::size_t stride = std::size_t{1} << b;
    for (std::size_t base = 0; base < size; base += 2 * stride) {
      for (std::size_t off = 0; off < stride; ++off) {
        T x0 = a[base + off];
        T x1 = a[base + off + stride];
        a[base + off] = x0 + x1;
        a[base + off + stride] = x1 - x0;
      }
    }
  }
  const T scale = scalar_traits<T>::one() /
                  scalar_traits<T>::from_int(static_cast<long long>(size));
  for (T& v : a) v *= scale;
  return a;
}

namespace detail {
inline index_tuple mask_to_tuple(std::uint64_t mask) {
  index_tuple t;
  for (index_t k = 1; mask; ++k, mask >>= 1)
    if (mask & 1u) t.push_back(k);
  return t;
}
}  // namespace detail

template <class T>
chaos_decomposition<T> decomposition_from_coefficients(int d, const std::vector<T>& hat) {
  chaos_decomposition<T> dec(d, hat[0]);
  std::map<int, symmetric_kernel<T>> kernels;
  for (std::uint64_t mask = 1; mask < hat.size(); ++mask) {
    if (scalar_traits<T>::is_zero(hat[mask])) continue;
    const int n = std::popcount(mask);
    auto it = kernels.find(n);
    if (it == kernels.end()) it = kernels.emplace(n, symmetric_kernel<T>(n)).first;
    it->second.set(detail::mask_to_tuple(mask), hat[mask] / factorial_as<T>(n));
  }
  for (auto& [n, k] : kernels) {
    (void)n;
    dec.set_kernel(k);
  }
  return dec;
}

// Walsh route: n! f_n(i_1,...,i_n) = E[F . X_{i_1} ... X_{i_n}], computed by
// the fast transform in O(d 2^d).
template <class T>
chaos_decomposition<T> decompose_walsh(const truth_table<T>& table) {
  return decomposition_from_coefficients(table.d, walsh_coefficients(table));
}

// Conditional-expectation route: the alternating sum over subsets of the
// conditioning set.  Kept as an independent oracle for the Walsh path; cost
// grows like 3^d.
template <class T>
chaos_decomposition<T> decompose_hoeffding(const truth_table<T>& table) {
  const int d = table.d;
  const std::size_t size = table.values.size();

  // cond[I] = sum of F over { omega : omega_i = +1 for all i in I }, by a
  // superset sum over the free bits.
  std::vector<T> cond = table.values;
  for (int b = 0; b < d; ++b) {
    const std::size_t bit = std::size_t{1} << b;
    for (std::size_t mask = 0; mask < size; ++mask)
      if (!(mask & bit)) cond[mask] += cond[mask | bit];
  }

  const T inv_size = scalar_traits<T>::one() / scalar_traits<T>::from_int(size);
  const T mean = cond[0] * inv_size;

  chaos_decomposition<T> dec(d, mean);
  std::map<int, symmetric_kernel<T>> kernels;
  for (std::size_t J = 1; J < size; ++J) {
    const int n = std::popcount(J);
    // Evaluated at the all-plus point: n! f_n(J) equals the alternating sum
    // of centered conditional expectations over subsets I of J.
    T acc = scalar_traits<T>::zero();
    std::size_t I = J;
    while (true) {
      const int a = std::popcount(I);
      T ce = cond[I] / scalar_traits<T>::from_int(std::int64_t{1} << (d - a)) - mean;
      if ((n - a) % 2 == 0)
        acc += ce;
      else
        acc -= ce;
      if (I == 0) break;
      I = (I - 1) & J;
    }
    T value = acc / factorial_as<T>(n);
    if (scalar_traits<T>::is_zero(value)) continue;
    auto it = kernels.find(n);
    if (it == kernels.end()) it = kernels.emplace(n, symmetric_kernel<T>(n)).first;
    it->second.set(detail::mask_to_tuple(J), value);
  }
  for (auto& [n, k] : kernels) {
    (void)n;
    dec.set_kernel(k);
  }
  return dec;
}

// ---------------------------------------------------------------------------
// Product formula and covariances
// ---------------------------------------------------------------------------

// J_n(f) J_m(g) = sum_r r! C(n,r) C(m,r) J_{n+m-2r}[ sym(f *_r^r g) . 1_Delta ].
template <class T>
chaos_decomposition<T> product(const symmetric_kernel<T>& f, const symmetric_kernel<T>& g) {
  const int n = f.order(), m = g.order();
  const index_t dim = std::max(f.support_bound(), g.support_bound());
  chaos_decomposition<T> dec(static_cast<int>(dim));

  for (int r = 0; r <= std::min(n, m); ++r) {
    const T coeff = factorial_as<T>(r) *
                    scalar_traits<T>::from_int(binomial_ll(n, r)) *
                    scalar_traits<T>::from_int(binomial_ll(m, r));
    auto classes = star_classes(f, g, r, r);
    const int out_order = n + m - 2 * r;
    if (out_order == 0) {
      auto it = classes.find({index_tuple{}, index_tuple{}, index_tuple{}});
      if (it != classes.end()) dec.set_mean(dec.mean() + coeff * it->second);
      continue;
    }
    // Class-level symmetrization restricted off-diagonal: group the disjoint
    // (u, v) splits by their union.
    std::map<index_tuple, T> acc;
    for (const auto& [key, w] : classes) {
      if (!detail::sorted_disjoint(key[0], key[2])) continue;
      acc[detail::sorted_merge(key[0], key[2])] += w;
    }
    const T factor = coeff * factorial_as<T>(n - r) * factorial_as<T>(m - r) /
                     factorial_as<T>(out_order);
    symmetric_kernel<T> k(out_order);
    for (const auto& [t, w] : acc) {
      T value = factor * w;
      if (!scalar_traits<T>::is_zero(value)) k.set(t, value);
    }
    if (!k.empty()) {
      if (dec.has_order(out_order)) {
        dec.set_kernel(dec.kernel(out_order) + k);
      } else {
        dec.set_kernel(k);
      }
    }
  }
  return dec;
}

// Isometric covariance: sum over common orders of q! <f_q, g_q>; means
// excluded.
template <class T>
T covariance(const chaos_decomposition<T>& a, const chaos_decomposition<T>& b) {
  T acc = scalar_traits<T>::zero();
  for (const auto& [q, fk] : a.kernels()) {
    if (!b.has_order(q)) continue;
    const auto& gk = b.kernel(q);
    T inner = scalar_traits<T>::zero();  // class-level sum
    for (const auto& [t, v] : fk.entries()) {
      T gv = gk.value_at(t);
      if (!scalar_traits<T>::is_zero(gv)) inner += v * gv;
    }
    // <f,g> over ordered tuples is q! times the class sum; the isometry
    // multiplies by another q!.
    const T qf = factorial_as<T>(q);
    acc += qf * qf * inner;
  }
  return acc;
}

template <class T>
T variance(const chaos_decomposition<T>& a) {
  return covariance(a, a);
}

}  // namespace radstein
