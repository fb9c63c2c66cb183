#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "radstein/kernel.hpp"

namespace radstein {

inline void check_contraction_range(int n, int m, int r, int l) {
  if (r < 0 || l < 0 || l > r || r > std::min(n, m))
    throw contraction_out_of_range();
}

namespace detail {

// Visit every k-subset of the sorted tuple t together with its complement.
template <class Fn>
void for_each_subset(const index_tuple& t, int k, Fn&& fn) {
  const int n = static_cast<int>(t.size());
  if (k < 0 || k > n) return;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  index_tuple chosen(k), rest(n - k);
  while (true) {
    int ci = 0, ri = 0;
    for (int i = 0; i < n; ++i) {
      if (ci < k && idx[ci] == i)
        chosen[ci++] = t[i];
      else
        rest[ri++] = t[i];
    }
    fn(chosen, rest);
    int pos = k - 1;
    while (pos >= 0 && idx[pos] == n - k + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int i = pos + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
  }
}

inline bool sorted_disjoint(const index_tuple& a, const index_tuple& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) return false;
    if (a[i] < b[j])
      ++i;
    else
      ++j;
  }
  return true;
}

inline index_tuple sorted_merge(const index_tuple& a, const index_tuple& b) {
  index_tuple out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace detail

// Class decomposition of f *_r^l g.  An output tuple splits as
// (u | s | v) with |u| = n-r free coordinates of f, |s| = r-l identified
// coordinates that remain free, |v| = m-r free coordinates of g; the value
// depends only on the three coordinate sets, so one map entry stands for
// (n-r)! (r-l)! (m-r)! ordered tuples.
template <class T>
using star_class_map = std::map<std::array<index_tuple, 3>, T>;

template <class T>
star_class_map<T> star_classes(const symmetric_kernel<T>& f,
                               const symmetric_kernel<T>& g, int r, int l) {
  const int n = f.order(), m = g.order();
  check_contraction_range(n, m, r, l);

  // Transient inverted index of g's support on r-subsets.
  std::map<index_tuple, std::vector<const std::pair<const index_tuple, T>*>> buckets;
  for (const auto& entry : g.entries()) {
    detail::for_each_subset(entry.first, r, [&](const index_tuple& c, const index_tuple&) {
      buckets[c].push_back(&entry);
    });
  }

  const T lfact = factorial_as<T>(l);
  star_class_map<T> classes;
  for (const auto& [a, fv] : f.entries()) {
    detail::for_each_subset(a, r, [&](const index_tuple& c, const index_tuple& u) {
      auto it = buckets.find(c);
      if (it == buckets.end()) return;
      for (const auto* gentry : it->second) {
        index_tuple v;
        v.reserve(m - r);
        std::set_difference(gentry->first.begin(), gentry->first.end(), c.begin(),
                            c.end(), std::back_inserter(v));
        const T contrib = lfact * fv * gentry->second;
        // Split the identified set into kept coordinates s and the l summed
        // ones; each split lands on its own class.
        detail::for_each_subset(c, r - l, [&](const index_tuple& s, const index_tuple&) {
          classes[{u, s, v}] += contrib;
        });
      }
    });
  }
  return classes;
}

// Materialized star contraction.  r = l = 0 is the tensor product; r = l = m
// = n yields the order-0 kernel holding <f, g>.
template <class T>
general_kernel<T> star(const symmetric_kernel<T>& f, const symmetric_kernel<T>& g,
                       int r, int l) {
  const int n = f.order(), m = g.order();
  check_contraction_range(n, m, r, l);
  general_kernel<T> out(n + m - r - l);
  for (const auto& [key, w] : star_classes(f, g, r, l)) {
    if (scalar_traits<T>::is_zero(w)) continue;
    index_tuple u = key[0], s = key[1], v = key[2];
    do {
      do {
        do {
          index_tuple tuple;
          tuple.reserve(u.size() + s.size() + v.size());
          tuple.insert(tuple.end(), u.begin(), u.end());
          tuple.insert(tuple.end(), s.begin(), s.end());
          tuple.insert(tuple.end(), v.begin(), v.end());
          out.set(tuple, w);
        } while (std::next_permutation(v.begin(), v.end()));
      } while (std::next_permutation(s.begin(), s.end()));
    } while (std::next_permutation(u.begin(), u.end()));
  }
  return out;
}

// Squared contraction norms, split by the diagonal structure of the output.
// sym_off_diagonal is ||sym(f *_r^r g) . 1_Delta||^2 and is only populated
// when l == r (the case the product formula and the chaos bounds need).
struct contraction_norms_result {
  double full = 0.0;
  double off_diagonal = 0.0;
  double diagonal = 0.0;
  double sym_off_diagonal = 0.0;
};

namespace detail {

// Packed fast path: up to 8 coordinates below 2^16 fit one 128-bit key.
using packed_key = unsigned __int128;

inline bool packable(const symmetric_kernel<double>& f,
                     const symmetric_kernel<double>& g, int slots) {
  return slots <= 8 && f.support_bound() < 0xFFFF && g.support_bound() < 0xFFFF;
}

inline packed_key pack_parts(const index_tuple& u, const index_tuple& s,
                             const index_tuple& v) {
  packed_key k = 0;
  for (index_t c : u) k = (k << 16) | static_cast<std::uint64_t>(c);
  for (index_t c : s) k = (k << 16) | static_cast<std::uint64_t>(c);
  for (index_t c : v) k = (k << 16) | static_cast<std::uint64_t>(c);
  return k;
}

template <class Fn>
void accumulate_sorted(std::vector<std::pair<packed_key, double>>& items, Fn&& per_class) {
  std::sort(items.begin(), items.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::size_t i = 0;
  while (i < items.size()) {
    std::size_t j = i;
    double w = 0.0;
    while (j < items.size() && items[j].first == items[i].first) w += items[j++].second;
    per_class(items[i].first, w);
    i = j;
  }
}

inline void unpack_parts(packed_key k, int nu, int ns, int nv, index_tuple& u,
                         index_tuple& s, index_tuple& v) {
  int total = nu + ns + nv;
  std::array<index_t, 8> buf{};
  for (int i = total - 1; i >= 0; --i) {
    buf[i] = static_cast<index_t>(k & 0xFFFF);
    k >>= 16;
  }
  u.assign(buf.begin(), buf.begin() + nu);
  s.assign(buf.begin() + nu, buf.begin() + nu + ns);
  v.assign(buf.begin() + nu + ns, buf.begin() + total);
}

}  // namespace detail

inline contraction_norms_result contraction_norms(const symmetric_kernel<double>& f,
                                                  const symmetric_kernel<double>& g,
                                                  int r, int l) {
  const int n = f.order(), m = g.order();
  check_contraction_range(n, m, r, l);
  const int nu = n - r, ns = r - l, nv = m - r;
  const double mult = static_cast<double>(factorial_ll(nu)) * factorial_ll(ns) *
                      factorial_ll(nv);
  const int out_order = nu + ns + nv;

  contraction_norms_result res;
  std::vector<std::pair<detail::packed_key, double>> sym_items;
  std::map<index_tuple, double> sym_acc;
  const bool packed_path = detail::packable(f, g, out_order);
  const bool want_sym = (l == r);
  const double sym_factor =
      want_sym && out_order > 0
          ? (static_cast<double>(factorial_ll(nu)) * factorial_ll(nv)) *
                (static_cast<double>(factorial_ll(nu)) * factorial_ll(nv)) /
                factorial_ll(out_order)
          : 1.0;

  auto consume = [&](const index_tuple& u, const index_tuple& s, const index_tuple& v,
                     double w) {
    (void)s;
    const double contrib = mult * w * w;
    res.full += contrib;
    const bool off = detail::sorted_disjoint(u, v);
    if (off) {
      res.off_diagonal += contrib;
      if (want_sym && out_order > 0) {
        index_tuple t = detail::sorted_merge(u, v);
        if (packed_path)
          sym_items.emplace_back(detail::pack_parts(t, {}, {}), w);
        else
          sym_acc[t] += w;
      }
    } else {
      res.diagonal += contrib;
    }
  };

  if (packed_path) {
    // Same class construction as star_classes, accumulated through packed
    // 128-bit keys instead of a tuple-keyed map.
    std::map<index_tuple, std::vector<const std::pair<const index_tuple, double>*>> buckets;
    for (const auto& entry : g.entries()) {
      detail::for_each_subset(entry.first, r,
                              [&](const index_tuple& c, const index_tuple&) {
                                buckets[c].push_back(&entry);
                              });
    }
    const double lfact = static_cast<double>(factorial_ll(l));
    std::vector<std::pair<detail::packed_key, double>> items;
    for (const auto& [a, fv] : f.entries()) {
      detail::for_each_subset(a, r, [&](const index_tuple& c, const index_tuple& u) {
        auto it = buckets.find(c);
        if (it == buckets.end()) return;
        for (const auto* gentry : it->second) {
          index_tuple v;
          v.reserve(nv);
          std::set_difference(gentry->first.begin(), gentry->first.end(), c.begin(),
                              c.end(), std::back_inserter(v));
          const double contrib = lfact * fv * gentry->second;
          detail::for_each_subset(c, ns, [&](const index_tuple& s, const index_tuple&) {
            items.emplace_back(detail::pack_parts(u, s, v), contrib);
          });
        }
      });
    }
    index_tuple u, s, v;
    detail::accumulate_sorted(items, [&](detail::packed_key key, double w) {
      detail::unpack_parts(key, nu, ns, nv, u, s, v);
      consume(u, s, v, w);
    });
  } else {
    for (const auto& [key, w] : star_classes(f, g, r, l)) consume(key[0], key[1], key[2], w);
  }

  if (want_sym) {
    if (out_order == 0) {
      res.sym_off_diagonal = res.full;
    } else if (packed_path) {
      detail::accumulate_sorted(sym_items, [&](detail::packed_key, double acc) {
        res.sym_off_diagonal += sym_factor * acc * acc;
      });
    } else {
      for (const auto& [t, acc] : sym_acc) {
        (void)t;
        res.sym_off_diagonal += sym_factor * acc * acc;
      }
    }
  }
  return res;
}

// Trace of the fourth power of the Hilbert-Schmidt array [f], computed as
// ||f *_1^1 f||^2.
inline double trace_power4(const symmetric_kernel<double>& f) {
  if (f.order() != 2) throw order_mismatch("trace_power4 needs an order-2 kernel");
  return contraction_norms(f, f, 1, 1).full;
}

// f(j, .): the order-(n-1) slice through coordinate j.
template <class T>
symmetric_kernel<T> slice_kernel(const symmetric_kernel<T>& f, index_t j) {
  if (f.order() < 2) throw order_mismatch("slice needs order >= 2");
  symmetric_kernel<T> out(f.order() - 1);
  for (const auto& [t, v] : f.entries()) {
    if (!std::binary_search(t.begin(), t.end(), j)) continue;
    index_tuple rest;
    rest.reserve(t.size() - 1);
    for (index_t c : t)
      if (c != j) rest.push_back(c);
    out.set(rest, v);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Contraction estimate chains
// ---------------------------------------------------------------------------

struct estimate_check {
  std::string id;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

struct estimate_report {
  std::vector<estimate_check> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

// Evaluates the norm inequalities every contraction satisfies: the
// Cauchy-Schwarz bound for all (r, l), the influence chains, the slicewise
// decomposition of ||f *_l^{l-1} g||^2, and the diagonal-restriction chain.
// Violations are reported, not thrown; they indicate implementation bugs.
inline estimate_report check_estimates(const symmetric_kernel<double>& f,
                                       const symmetric_kernel<double>& g,
                                       double tol = 1e-9) {
  estimate_report rep;
  const int n = f.order(), m = g.order();
  const double nf = l2_norm(f), ng = l2_norm(g);
  auto leq = [&](double a, double b) { return a <= b + tol * (1.0 + std::fabs(b)); };
  auto eq = [&](double a, double b) {
    return std::fabs(a - b) <= tol * (1.0 + std::fabs(a) + std::fabs(b));
  };
  auto push = [&](std::string id, double lhs, double rhs, bool pass) {
    rep.checks.push_back({std::move(id), lhs, rhs, pass});
  };

  for (int r = 0; r <= std::min(n, m); ++r) {
    for (int l = 0; l <= r; ++l) {
      double lhs = std::sqrt(contraction_norms(f, g, r, l).full);
      push("cauchy-schwarz r=" + std::to_string(r) + " l=" + std::to_string(l), lhs,
           nf * ng, leq(lhs, nf * ng));
    }
  }

  const double top_sq = contraction_norms(f, f, n, n - 1).full;  // ||f *_n^{n-1} f||^2
  if (n >= 2) {
    const double maxinf = max_influence(f);
    push("influence-lower", maxinf * maxinf, top_sq, leq(maxinf * maxinf, top_sq));
    push("influence-upper", top_sq, nf * nf * maxinf, leq(top_sq, nf * nf * maxinf));
  }
  for (int l = 1; l <= std::min(n, m); ++l) {
    const double lhs_sq = contraction_norms(f, g, l, l - 1).full;
    // Slicewise route through f(j,.) *_{l-1}^{l-1} g(j,.).
    double slice_sum = 0.0;
    std::map<index_t, bool> coords;
    for (const auto& [t, v] : f.entries())
      for (index_t c : t) coords[c] = true;
    for (const auto& [j, unused] : coords) {
      (void)unused;
      if (l == 1) {
        slice_sum += influence(f, j) * influence(g, j);
      } else {
        slice_sum +=
            contraction_norms(slice_kernel(f, j), slice_kernel(g, j), l - 1, l - 1).full;
      }
    }
    push("slice-decomposition l=" + std::to_string(l), lhs_sq, slice_sum,
         eq(lhs_sq, slice_sum));
    const double rhs = std::sqrt(top_sq) * ng * ng;
    push("slice-bound l=" + std::to_string(l), lhs_sq, rhs, leq(lhs_sq, rhs));
  }

  push("first-column-identity", contraction_norms(f, f, 1, 0).full, top_sq,
       eq(contraction_norms(f, f, 1, 0).full, top_sq));
  for (int l = 2; l <= n; ++l) {
    const double a = std::sqrt(contraction_norms(f, f, l, l - 1).full);
    const auto prev = contraction_norms(f, f, l - 1, l - 1);
    const double b = std::sqrt(prev.diagonal);
    const double c = std::sqrt(prev.full);
    push("diagonal-chain-lower l=" + std::to_string(l), a, b, leq(a, b));
    push("diagonal-chain-upper l=" + std::to_string(l), b, c, leq(b, c));
  }
  if (n == 2) {
    const double t21 = contraction_norms(f, f, 2, 1).full;
    const auto c11 = contraction_norms(f, f, 1, 1);
    push("order2-diagonal-equality", t21, c11.diagonal, eq(t21, c11.diagonal));
    push("order2-trace-bound", t21, c11.full, leq(t21, c11.full));
  }
  return rep;
}

}  // namespace radstein
