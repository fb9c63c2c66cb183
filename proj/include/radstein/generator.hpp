#pragma once

#include <vector>

#include "radstein/chaos.hpp"
#include "radstein/kernel.hpp"
#include "radstein/rng.hpp"

namespace radstein {

// Seeded generators for randomized identity checks.  Values are dyadic
// (denominators up to 8) so the same draw is exact in rational mode and
// bit-stable in float mode.
template <class T>
T random_dyadic(rng_stream& s) {
  long long num = s.next_int(-8, 8);
  if (num == 0) num = 1;
  const long long den = 1LL << s.next_int(0, 3);
  return scalar_traits<T>::from_ratio(num, den);
}

template <class T>
symmetric_kernel<T> random_kernel(rng_stream& s, int order, index_t max_coord,
                                  int max_entries) {
  symmetric_kernel<T> k(order);
  const int entries = static_cast<int>(s.next_int(1, max_entries));
  for (int e = 0; e < entries; ++e) {
    // distinct coordinates by rejection; supports are tiny
    index_tuple t;
    int guard = 0;
    while (static_cast<int>(t.size()) < order && guard < 1000) {
      const index_t c = s.next_int(1, max_coord);
      if (std::find(t.begin(), t.end(), c) == t.end()) t.push_back(c);
      ++guard;
    }
    if (static_cast<int>(t.size()) < order) continue;
    k.set(t, random_dyadic<T>(s));
  }
  return k;
}

// Centered decomposition with kernels on a random subset of orders.
template <class T>
chaos_decomposition<T> random_centered_decomposition(rng_stream& s, int dimension,
                                                     int max_order, int max_entries) {
  chaos_decomposition<T> dec(dimension);
  const int orders = static_cast<int>(s.next_int(1, max_order));
  for (int n = 1; n <= orders; ++n) {
    if (n > dimension) break;
    if (n > 1 && s.next_below(3) == 0) continue;  // skip some orders
    auto k = random_kernel<T>(s, n, dimension, max_entries);
    if (k.empty()) continue;
    if (dec.has_order(n))
      dec.set_kernel(dec.kernel(n) + k);
    else
      dec.set_kernel(k);
  }
  return dec;
}

inline truth_table<double> random_table(rng_stream& s, int d) {
  std::vector<double> vals(std::size_t{1} << d);
  for (auto& v : vals) v = scalar_traits<double>::to_double(random_dyadic<double>(s));
  return truth_table<double>(d, std::move(vals));
}

}  // namespace radstein
