#pragma once

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "radstein/errors.hpp"
#include "radstein/scalar.hpp"

namespace radstein {

using index_t = long long;
// 1-based coordinates into the Rademacher sequence.
using index_tuple = std::vector<index_t>;

inline bool has_repeated_coordinate(const index_tuple& t) {
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = i + 1; j < t.size(); ++j)
      if (t[i] == t[j]) return true;
  return false;
}

inline void validate_tuple(const index_tuple& t) {
  if (t.empty()) throw order_mismatch("empty index tuple");
  for (index_t c : t)
    if (c < 1) throw index_out_of_range("coordinates are 1-based positive integers");
}

inline index_tuple sorted_tuple(index_tuple t) {
  std::sort(t.begin(), t.end());
  return t;
}

// Symmetric kernel on positive integers, vanishing on diagonals: entries are
// stored once per symmetry class on the strictly increasing representative,
// with the symmetric extension implicit.  Norm and contraction code expands
// permutations on the fly, so memory stays proportional to the support.
template <class T>
class symmetric_kernel {
 public:
  using entry_map = std::map<index_tuple, T>;

  symmetric_kernel() : order_(1) {}
  explicit symmetric_kernel(int order) : order_(order) {
    if (order < 1) throw order_mismatch("kernel order must be >= 1");
  }

  int order() const { return order_; }
  const entry_map& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t support_size() const { return entries_.size(); }

  // Smallest N with support contained in [N]^q; 0 for the empty kernel.
  index_t support_bound() const {
    index_t b = 0;
    for (const auto& [t, v] : entries_) b = std::max(b, t.back());
    return b;
  }

  // Value at an arbitrary tuple: 0 on diagonals and off support.
  T value_at(const index_tuple& t) const {
    if (static_cast<int>(t.size()) != order_)
      throw order_mismatch("tuple length does not match kernel order");
    if (has_repeated_coordinate(t)) return scalar_traits<T>::zero();
    auto it = entries_.find(sorted_tuple(t));
    return it == entries_.end() ? scalar_traits<T>::zero() : it->second;
  }

  // Canonical insertion; zero coefficients dropped.
  void set(const index_tuple& t, const T& v) {
    if (static_cast<int>(t.size()) != order_)
      throw order_mismatch("tuple length does not match kernel order");
    validate_tuple(t);
    if (has_repeated_coordinate(t)) throw diagonal_entry();
    index_tuple key = sorted_tuple(t);
    if (scalar_traits<T>::is_zero(v))
      entries_.erase(key);
    else
      entries_[key] = v;
  }

  void add(const index_tuple& t, const T& v) {
    index_tuple key = sorted_tuple(t);
    auto it = entries_.find(key);
    T next = it == entries_.end() ? v : it->second + v;
    set(key, next);
  }

 private:
  int order_;
  entry_map entries_;
};

// Possibly asymmetric kernel that may charge diagonal tuples; order 0 means
// a single scalar (keyed by the empty tuple).  Lookups outside the stored
// entries return 0.
template <class T>
class general_kernel {
 public:
  using entry_map = std::map<index_tuple, T>;

  general_kernel() : order_(0) {}
  explicit general_kernel(int order) : order_(order) {
    if (order < 0) throw order_mismatch("general kernel order must be >= 0");
  }

  int order() const { return order_; }
  const entry_map& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  T value_at(const index_tuple& t) const {
    if (static_cast<int>(t.size()) != order_)
      throw order_mismatch("tuple length does not match kernel order");
    auto it = entries_.find(t);
    return it == entries_.end() ? scalar_traits<T>::zero() : it->second;
  }

  T scalar_value() const {
    if (order_ != 0) throw order_mismatch("scalar_value on kernel of positive order");
    return value_at(index_tuple{});
  }

  void set(const index_tuple& t, const T& v) {
    if (static_cast<int>(t.size()) != order_)
      throw order_mismatch("tuple length does not match kernel order");
    if (order_ > 0) validate_tuple(t);
    if (scalar_traits<T>::is_zero(v))
      entries_.erase(t);
    else
      entries_[t] = v;
  }

  void add(const index_tuple& t, const T& v) {
    auto it = entries_.find(t);
    T next = it == entries_.end() ? v : it->second + v;
    set(t, next);
  }

 private:
  int order_;
  entry_map entries_;
};

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

template <class T>
symmetric_kernel<T> make_symmetric_kernel(
    int order, const std::vector<std::pair<index_tuple, T>>& raw_entries,
    double conflict_tol = 1e-12) {
  symmetric_kernel<T> k(order);
  std::map<index_tuple, T> seen;
  for (const auto& [t, v] : raw_entries) {
    if (static_cast<int>(t.size()) != order) throw order_mismatch();
    validate_tuple(t);
    if (has_repeated_coordinate(t)) throw diagonal_entry();
    index_tuple key = sorted_tuple(t);
    auto it = seen.find(key);
    if (it != seen.end()) {
      T diff = it->second - v;
      bool conflict;
      if constexpr (scalar_traits<T>::is_exact)
        conflict = !scalar_traits<T>::is_zero(diff);
      else
        conflict = scalar_traits<T>::to_double(scalar_traits<T>::abs(diff)) > conflict_tol;
      if (conflict) throw conflicting_values();
      continue;
    }
    seen.emplace(key, v);
    if (!scalar_traits<T>::is_zero(v)) k.set(key, v);
  }
  return k;
}

template <class T>
general_kernel<T> make_general_kernel(
    int order, const std::vector<std::pair<index_tuple, T>>& raw_entries) {
  general_kernel<T> k(order);
  for (const auto& [t, v] : raw_entries) k.add(t, v);
  return k;
}

// ---------------------------------------------------------------------------
// Basic calculus
// ---------------------------------------------------------------------------

// Canonical symmetrization (1/n!) sum over permutations.  Entries are grouped
// by coordinate multiset: every arrangement of a class carries the class sum
// times (prod of multiplicities)!/n!.
template <class T>
general_kernel<T> symmetrize(const general_kernel<T>& g) {
  const int n = g.order();
  if (n < 1) throw order_mismatch("symmetrize needs order >= 1");
  std::map<index_tuple, T> class_sum;  // keyed by sorted tuple
  for (const auto& [t, v] : g.entries()) class_sum[sorted_tuple(t)] += v;

  general_kernel<T> out(n);
  const T inv_nfact = scalar_traits<T>::one() / factorial_as<T>(n);
  for (const auto& [key, sum] : class_sum) {
    T mult_fact = scalar_traits<T>::one();
    for (std::size_t i = 0; i < key.size();) {
      std::size_t j = i;
      while (j < key.size() && key[j] == key[i]) ++j;
      mult_fact *= factorial_as<T>(static_cast<int>(j - i));
      i = j;
    }
    T value = sum * mult_fact * inv_nfact;
    if (scalar_traits<T>::is_zero(value)) continue;
    index_tuple arrangement = key;
    // key is sorted, so std::next_permutation enumerates each distinct
    // arrangement exactly once.
    do {
      out.set(arrangement, value);
    } while (std::next_permutation(arrangement.begin(), arrangement.end()));
  }
  return out;
}

template <class T>
T l2_norm_squared(const general_kernel<T>& g) {
  T s = scalar_traits<T>::zero();
  for (const auto& [t, v] : g.entries()) s += v * v;
  return s;
}

template <class T>
T l2_norm_squared(const symmetric_kernel<T>& f) {
  // Each stored class stands for order! distinct off-diagonal tuples.
  T s = scalar_traits<T>::zero();
  for (const auto& [t, v] : f.entries()) s += v * v;
  return factorial_as<T>(f.order()) * s;
}

template <class K>
double l2_norm(const K& k) {
  using T = std::decay_t<decltype(l2_norm_squared(k))>;
  return std::sqrt(scalar_traits<T>::to_double(l2_norm_squared(k)));
}

// Influence of coordinate j: sum of f^2(j, b_1, ..., b_{n-1}) over ordered
// (n-1)-tuples b, i.e. (n-1)! times the class sum over reps containing j.
template <class T>
T influence(const symmetric_kernel<T>& f, index_t j) {
  if (j < 1) throw index_out_of_range();
  T s = scalar_traits<T>::zero();
  for (const auto& [t, v] : f.entries())
    if (std::binary_search(t.begin(), t.end(), j)) s += v * v;
  return factorial_as<T>(f.order() - 1) * s;
}

template <class T>
T max_influence(const symmetric_kernel<T>& f) {
  std::map<index_t, T> per_coord;
  for (const auto& [t, v] : f.entries())
    for (index_t c : t) per_coord[c] += v * v;
  T best = scalar_traits<T>::zero();
  for (const auto& [c, s] : per_coord) {
    (void)c;
    if (best < s) best = s;
  }
  return factorial_as<T>(f.order() - 1) * best;
}

// Multiplication by the off-diagonal indicator: drops every tuple with a
// repeated coordinate.
template <class T>
general_kernel<T> restrict_off_diagonal(const general_kernel<T>& g) {
  general_kernel<T> out(g.order());
  for (const auto& [t, v] : g.entries())
    if (!has_repeated_coordinate(t)) out.set(t, v);
  return out;
}

// Complementary restriction (keeps only diagonal-hitting tuples).
template <class T>
general_kernel<T> restrict_to_diagonal(const general_kernel<T>& g) {
  general_kernel<T> out(g.order());
  for (const auto& [t, v] : g.entries())
    if (has_repeated_coordinate(t)) out.set(t, v);
  return out;
}

// ---------------------------------------------------------------------------
// Arithmetic and comparison helpers
// ---------------------------------------------------------------------------

template <class T>
symmetric_kernel<T> operator+(const symmetric_kernel<T>& a, const symmetric_kernel<T>& b) {
  if (a.order() != b.order()) throw order_mismatch();
  symmetric_kernel<T> out = a;
  for (const auto& [t, v] : b.entries()) out.add(t, v);
  return out;
}

template <class T>
symmetric_kernel<T> operator-(const symmetric_kernel<T>& a, const symmetric_kernel<T>& b) {
  if (a.order() != b.order()) throw order_mismatch();
  symmetric_kernel<T> out = a;
  for (const auto& [t, v] : b.entries()) out.add(t, -v);
  return out;
}

template <class T>
symmetric_kernel<T> scale(const symmetric_kernel<T>& a, const T& c) {
  symmetric_kernel<T> out(a.order());
  for (const auto& [t, v] : a.entries()) out.set(t, c * v);
  return out;
}

template <class T>
general_kernel<T> operator+(const general_kernel<T>& a, const general_kernel<T>& b) {
  if (a.order() != b.order()) throw order_mismatch();
  general_kernel<T> out = a;
  for (const auto& [t, v] : b.entries()) out.add(t, v);
  return out;
}

template <class T>
general_kernel<T> operator-(const general_kernel<T>& a, const general_kernel<T>& b) {
  if (a.order() != b.order()) throw order_mismatch();
  general_kernel<T> out = a;
  for (const auto& [t, v] : b.entries()) out.add(t, -v);
  return out;
}

// Equality of canonical entry maps under an absolute tolerance (exact when
// the scalar type is exact).
template <class K>
bool kernels_equal(const K& a, const K& b, double tol = 1e-12) {
  using T = std::decay_t<decltype(a.entries().begin()->second)>;
  if (a.order() != b.order()) return false;
  auto close = [&](const T& x, const T& y) {
    if constexpr (scalar_traits<T>::is_exact)
      return x == y;
    else
      return scalar_traits<T>::to_double(scalar_traits<T>::abs(x - y)) <= tol;
  };
  for (const auto& [t, v] : a.entries())
    if (!close(v, b.value_at(t))) return false;
  for (const auto& [t, v] : b.entries())
    if (!close(v, a.value_at(t))) return false;
  return true;
}

}  // namespace radstein
