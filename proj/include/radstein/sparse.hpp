#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <unordered_set>
#include <vector>

#include "radstein/kernel.hpp"
#include "radstein/rational.hpp"
#include "radstein/rng.hpp"
#include "radstein/weights.hpp"

namespace radstein {

inline constexpr int max_sharp_dimension = 6;

// Symmetric off-diagonal subset of [N]^d, stored as strictly increasing
// representative tuples; the symmetric closure is implicit and the full
// cardinality is d! times the representative count.
class sparse_index_set {
 public:
  sparse_index_set(int d, index_t N, std::vector<index_tuple> reps)
      : d_(d), N_(N), reps_(std::move(reps)) {
    if (d_ < 2) throw order_mismatch("sparse sets need d >= 2");
    for (auto& t : reps_) {
      if (static_cast<int>(t.size()) != d_) throw order_mismatch();
      std::sort(t.begin(), t.end());
      if (has_repeated_coordinate(t)) throw diagonal_entry();
      if (t.front() < 1 || t.back() > N_) throw index_out_of_range();
    }
    std::sort(reps_.begin(), reps_.end());
    reps_.erase(std::unique(reps_.begin(), reps_.end()), reps_.end());
  }

  int d() const { return d_; }
  index_t N() const { return N_; }
  const std::vector<index_tuple>& reps() const { return reps_; }
  bool empty() const { return reps_.empty(); }

  // |F_N| over the full symmetric set.
  long long cardinality() const {
    return factorial_ll(d_) * static_cast<long long>(reps_.size());
  }

  bool contains(const index_tuple& sorted) const {
    return std::binary_search(reps_.begin(), reps_.end(), sorted);
  }

 private:
  int d_;
  index_t N_;
  std::vector<index_tuple> reps_;
};

// |F*_{N,j}|: tuples of the full symmetric set containing index j.
inline long long star_count(const sparse_index_set& F, index_t j) {
  if (j < 1 || j > F.N()) throw index_out_of_range();
  long long rep_count = 0;
  for (const auto& t : F.reps())
    if (std::binary_search(t.begin(), t.end(), j)) ++rep_count;
  return factorial_ll(F.d()) * rep_count;
}

inline long long max_star_count(const sparse_index_set& F) {
  std::map<index_t, long long> per;
  for (const auto& t : F.reps())
    for (index_t c : t) ++per[c];
  long long best = 0;
  for (const auto& [c, cnt] : per) {
    (void)c;
    best = std::max(best, cnt);
  }
  return factorial_ll(F.d()) * best;
}

namespace detail {

// Witness-driven recombination scan.  A disjoint pair (A, B) belongs to the
// sharp set when for some p and subsets A' of A, B' of B, both recombined
// sets C = B' + (A \ A') and D = A' + (B \ B') lie in F.  Enumerating
// (A, p, A', C, D) through subset indices reaches exactly those pairs while
// skipping the quadratically many pairs that share no recombination, and a
// per-A dedup set turns witnesses into pairs.  Counts are over representative
// sets; the symmetric closure multiplies by (d!)^2.
struct sharp_scan_result {
  long long rep_pairs = 0;         // ordered pairs of representatives
  double weighted_pairs = 0.0;     // sum of w(A) w(B) over those pairs
};

template <class WeightFn>
sharp_scan_result sharp_scan(const sparse_index_set& F, const WeightFn& weight) {
  const int d = F.d();
  const auto& reps = F.reps();

  std::map<index_tuple, std::vector<int>> subset_index;  // k-subset -> rep ids
  for (int id = 0; id < static_cast<int>(reps.size()); ++id)
    for (int k = 1; k <= d - 1; ++k)
      for_each_subset(reps[id], k,
                      [&](const index_tuple& s, const index_tuple&) {
                        subset_index[s].push_back(id);
                      });

  sharp_scan_result out;
  std::unordered_set<int> found;
  index_tuple bprime, dr, b;
  for (int aid = 0; aid < static_cast<int>(reps.size()); ++aid) {
    const index_tuple& A = reps[aid];
    found.clear();
    for (int p = 1; p <= d - 1; ++p) {
      for_each_subset(A, d - p, [&](const index_tuple& E, const index_tuple& Aprime) {
        auto cit = subset_index.find(E);
        if (cit == subset_index.end()) return;
        auto dit = subset_index.find(Aprime);
        if (dit == subset_index.end()) return;
        for (int cid : cit->second) {
          const index_tuple& C = reps[cid];
          bprime.clear();
          std::set_difference(C.begin(), C.end(), E.begin(), E.end(),
                              std::back_inserter(bprime));
          if (static_cast<int>(bprime.size()) != p) continue;  // C met A beyond E
          if (!sorted_disjoint(bprime, A)) continue;
          for (int did : dit->second) {
            const index_tuple& D = reps[did];
            dr.clear();
            std::set_difference(D.begin(), D.end(), Aprime.begin(), Aprime.end(),
                                std::back_inserter(dr));
            if (static_cast<int>(dr.size()) != d - p) continue;
            if (!sorted_disjoint(dr, A)) continue;
            if (!sorted_disjoint(dr, bprime)) continue;
            b = sorted_merge(bprime, dr);
            auto pos = std::lower_bound(reps.begin(), reps.end(), b);
            if (pos == reps.end() || *pos != b) continue;
            found.insert(static_cast<int>(pos - reps.begin()));
          }
        }
      });
    }
    out.rep_pairs += static_cast<long long>(found.size());
    for (int bid : found) out.weighted_pairs += weight(aid) * weight(bid);
  }
  return out;
}

}  // namespace detail

// |F#_N|: ordered pairs of the full symmetric set that are disjoint and can
// be repartitioned into elements of F_N in a second way.  Exact count via
// the witness scan; d is capped because the subset enumeration grows like
// 3^d per representative.
inline long long sharp_count(const sparse_index_set& F) {
  if (F.d() > max_sharp_dimension) throw dimension_limit();
  const auto scan = detail::sharp_scan(F, [](int) { return 1.0; });
  const long long dfact = factorial_ll(F.d());
  return dfact * dfact * scan.rep_pairs;
}

// Direct-from-definition oracle used by the tests: quadratic over pairs.
inline long long sharp_count_bruteforce(const sparse_index_set& F) {
  if (F.d() > max_sharp_dimension) throw dimension_limit();
  const int d = F.d();
  const auto& reps = F.reps();
  long long rep_pairs = 0;
  for (const auto& A : reps) {
    for (const auto& B : reps) {
      if (!detail::sorted_disjoint(A, B)) continue;
      bool ok = false;
      for (int p = 1; p <= d - 1 && !ok; ++p) {
        detail::for_each_subset(A, p, [&](const index_tuple& Ap, const index_tuple& Arest) {
          if (ok) return;
          detail::for_each_subset(B, p, [&](const index_tuple& Bp, const index_tuple& Brest) {
            if (ok) return;
            if (F.contains(detail::sorted_merge(Bp, Arest)) &&
                F.contains(detail::sorted_merge(Ap, Brest)))
              ok = true;
          });
        });
      }
      if (ok) ++rep_pairs;
    }
  }
  const long long dfact = factorial_ll(d);
  return dfact * dfact * rep_pairs;
}

// f_N = [d! |F_N|]^{-1/2} 1_{F_N}: the kernel of the normalized multilinear
// form over F, with unit variance by construction.
inline symmetric_kernel<double> multilinear_kernel(const sparse_index_set& F) {
  if (F.empty()) throw empty_set();
  const double value =
      1.0 / std::sqrt(static_cast<double>(factorial_ll(F.d())) *
                      static_cast<double>(F.cardinality()));
  symmetric_kernel<double> k(F.d());
  for (const auto& t : F.reps()) k.set(t, value);
  return k;
}

// Exact squared value of that kernel, for the rational-mode normalization
// identity d! ||f_N||^2 = 1.
inline rational multilinear_value_squared(const sparse_index_set& F) {
  if (F.empty()) throw empty_set();
  return rational(1, factorial_ll(F.d()) * F.cardinality());
}

// ---------------------------------------------------------------------------
// Fractional Cartesian products
// ---------------------------------------------------------------------------

// m-uniform connected cover of [d]: every index in exactly m of the d sets.
struct cover {
  int d = 0;
  int m = 0;
  std::vector<std::vector<int>> sets;

  cover(int d_, int m_, std::vector<std::vector<int>> sets_)
      : d(d_), m(m_), sets(std::move(sets_)) {
    if (d < 3 || m < 2 || m > d - 1) throw error("cover needs d >= 3 and 2 <= m <= d-1");
    if (static_cast<int>(sets.size()) != d) throw error("cover needs d subsets");
    std::vector<int> appearances(d + 1, 0);
    for (auto& s : sets) {
      std::sort(s.begin(), s.end());
      s.erase(std::unique(s.begin(), s.end()), s.end());
      if (static_cast<int>(s.size()) != m) throw error("cover sets must have size m");
      for (int idx : s) {
        if (idx < 1 || idx > d) throw index_out_of_range();
        ++appearances[idx];
      }
    }
    for (int idx = 1; idx <= d; ++idx)
      if (appearances[idx] != m)
        throw error("every index must appear in exactly m cover sets");
    // connectivity: the sets must not split into two groups with disjoint
    // unions.
    std::vector<bool> seen(sets.size(), false);
    std::vector<int> stack{0};
    seen[0] = true;
    int reached = 1;
    while (!stack.empty()) {
      int cur = stack.back();
      stack.pop_back();
      for (int other = 0; other < static_cast<int>(sets.size()); ++other) {
        if (seen[other]) continue;
        bool share = false;
        for (int idx : sets[cur])
          if (std::binary_search(sets[other].begin(), sets[other].end(), idx)) {
            share = true;
            break;
          }
        if (share) {
          seen[other] = true;
          stack.push_back(other);
          ++reached;
        }
      }
    }
    if (reached != static_cast<int>(sets.size())) throw error("cover is not connected");
  }
};

// Injections from [n]^m into [N] used by the fractional product.
struct injection_spec {
  enum class kind { mixed_radix, seeded_random, explicit_table };
  kind which = kind::mixed_radix;
  std::uint64_t seed = 0;
  std::vector<index_t> table;  // code -> target, for explicit_table

  static injection_spec mixed_radix() { return {}; }
  static injection_spec seeded(std::uint64_t s) {
    injection_spec spec;
    spec.which = kind::seeded_random;
    spec.seed = s;
    return spec;
  }
  static injection_spec from_table(std::vector<index_t> t) {
    injection_spec spec;
    spec.which = kind::explicit_table;
    spec.table = std::move(t);
    return spec;
  }
};

inline int integer_root(index_t N, int m) {
  int n = 1;
  while (true) {
    index_t pw = 1;
    bool over = false;
    for (int i = 0; i < m; ++i) {
      pw *= (n + 1);
      if (pw > N) {
        over = true;
        break;
      }
    }
    if (over) return n;
    ++n;
  }
}

// F_N = sym(F*_N intersected with the off-diagonal part of [N]^d), where
// F*_N projects [n]^d through the cover and the injection.
inline sparse_index_set fractional_product(const cover& cov, index_t N,
                                           const injection_spec& phi = {}) {
  const int d = cov.d, m = cov.m;
  const int n = integer_root(N, m);
  if (n < 2) throw n_too_small("need floor(N^(1/m)) >= 2");

  // phi maps [n]^m injectively into [N] through mixed-radix codes, optionally
  // composed with a seeded permutation of [N].
  long long codes = 1;
  for (int i = 0; i < m; ++i) codes *= n;
  std::vector<index_t> target(codes);
  if (phi.which == injection_spec::kind::mixed_radix) {
    for (long long c = 0; c < codes; ++c) target[c] = c + 1;
  } else if (phi.which == injection_spec::kind::seeded_random) {
    // partial Fisher-Yates over [N] with counter-based draws
    std::vector<index_t> pool(N);
    for (index_t i = 0; i < N; ++i) pool[i] = i + 1;
    rng_stream draws(phi.seed, 0xF0CAULL);
    for (long long c = 0; c < codes; ++c) {
      const long long pick = c + static_cast<long long>(draws.next_below(N - c));
      std::swap(pool[c], pool[pick]);
      target[c] = pool[c];
    }
  } else {
    if (static_cast<long long>(phi.table.size()) != codes)
      throw not_injective("injection table must cover [n]^m");
    std::set<index_t> seen;
    for (index_t v : phi.table) {
      if (v < 1 || v > N) throw index_out_of_range();
      if (!seen.insert(v).second) throw not_injective();
    }
    target = phi.table;
  }
  auto encode = [&](const std::vector<int>& kvec, const std::vector<int>& s) {
    long long code = 0;
    for (int pos = static_cast<int>(s.size()) - 1; pos >= 0; --pos)
      code = code * n + (kvec[s[pos] - 1] - 1);
    return target[code];
  };

  std::vector<index_tuple> reps;
  std::vector<int> k(d, 1);
  index_tuple z(d);
  while (true) {
    bool diagonal = false;
    for (int i = 0; i < d && !diagonal; ++i) {
      z[i] = encode(k, cov.sets[i]);
      for (int j = 0; j < i; ++j)
        if (z[j] == z[i]) diagonal = true;
    }
    if (!diagonal) {
      index_tuple sorted = z;
      std::sort(sorted.begin(), sorted.end());
      reps.push_back(std::move(sorted));
    }
    int pos = d - 1;
    while (pos >= 0 && k[pos] == n) {
      k[pos] = 1;
      --pos;
    }
    if (pos < 0) break;
    ++k[pos];
  }
  return sparse_index_set(d, N, std::move(reps));
}

}  // namespace radstein
