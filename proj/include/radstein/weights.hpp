#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "radstein/chaos.hpp"
#include "radstein/errors.hpp"

namespace radstein {

// Certified analytic bounds for the part of an infinite weight family that
// the finite list truncates away: an enclosure of the tail sum of squares
// and an upper bound on the tail sum of fourth powers.
struct tail_certificate {
  double sq_lo = 0.0;
  double sq_hi = 0.0;
  double quad_hi = 0.0;
};

// Finite list of weights alpha_i with an integer offset, so two-sided
// (Z-indexed) families fit the same container.  Infinite families must carry
// a tail certificate; the bound operations refuse silent truncation.
struct weight_sequence {
  std::vector<double> values;
  long long offset = 1;  // index of values.front()
  std::optional<tail_certificate> tail;
  bool truncated_infinite = false;

  long long first_index() const { return offset; }
  long long last_index() const { return offset + static_cast<long long>(values.size()) - 1; }

  double alpha(long long i) const {
    if (i < first_index() || i > last_index()) return 0.0;
    return values[static_cast<std::size_t>(i - offset)];
  }

  double sum_sq() const {
    double s = 0.0;
    for (double v : values) s += v * v;
    return s;
  }
  double sum_quad() const {
    double s = 0.0;
    for (double v : values) s += v * v * v * v;
    return s;
  }
  double sum_adjacent() const {  // sum alpha_i alpha_{i+1}
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < values.size(); ++i) s += values[i] * values[i + 1];
    return s;
  }
};

// Relabel a Z-indexed sequence onto positive integers (coordinate 1 is the
// first stored index); returns the shifted copy.
inline weight_sequence relabel_to_positive(const weight_sequence& w) {
  weight_sequence out = w;
  out.offset = 1;
  return out;
}

inline weight_sequence ones_weights(long long n) {
  weight_sequence w;
  w.values.assign(static_cast<std::size_t>(n), 1.0);
  return w;
}

// The normalized partial-sum family alpha_i = n^{-1/2} on 1..n.
inline weight_sequence partial_sum_weights(long long n) {
  weight_sequence w;
  w.values.assign(static_cast<std::size_t>(n), 1.0 / std::sqrt(static_cast<double>(n)));
  return w;
}

// alpha_i = sqrt(r)/i for i >= r, carried entirely by its analytic
// certificate: the sum of squares lies in [1 - 1/r, 1] and the fourth-power
// sum is at most 1/(r-1).
inline weight_sequence inverse_tail_weights(long long r) {
  if (r < 2) throw error("inverse tail family needs r >= 2");
  weight_sequence w;
  w.truncated_infinite = true;
  w.tail = tail_certificate{1.0 - 1.0 / static_cast<double>(r), 1.0,
                            1.0 / static_cast<double>(r - 1)};
  return w;
}

// First-chaos decomposition sum_i alpha_i X_i from a positive-indexed finite
// sequence.
inline chaos_decomposition<double> first_chaos(const weight_sequence& w) {
  if (w.first_index() < 1)
    throw index_out_of_range("relabel the sequence onto positive indices first");
  symmetric_kernel<double> k(1);
  for (long long i = w.first_index(); i <= w.last_index(); ++i)
    if (w.alpha(i) != 0.0) k.set(index_tuple{i}, w.alpha(i));
  chaos_decomposition<double> dec(static_cast<int>(w.last_index()));
  dec.set_kernel(k);
  return dec;
}

// Order-1 kernel view of the sequence, for the single-plus-double bound.
inline symmetric_kernel<double> first_order_kernel(const weight_sequence& w) {
  if (w.first_index() < 1)
    throw index_out_of_range("relabel the sequence onto positive indices first");
  symmetric_kernel<double> k(1);
  for (long long i = w.first_index(); i <= w.last_index(); ++i)
    if (w.alpha(i) != 0.0) k.set(index_tuple{i}, w.alpha(i));
  return k;
}

}  // namespace radstein
