#pragma once

#include <stdexcept>
#include <string>

namespace radstein {

// Base class for all library errors.
struct error : std::runtime_error {
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

#define RADSTEIN_DEFINE_ERROR(name)                              \
  struct name : error {                                          \
    explicit name(const std::string& what = #name) : error(what) {} \
  }

RADSTEIN_DEFINE_ERROR(diagonal_entry);
RADSTEIN_DEFINE_ERROR(order_mismatch);
RADSTEIN_DEFINE_ERROR(conflicting_values);
RADSTEIN_DEFINE_ERROR(contraction_out_of_range);
RADSTEIN_DEFINE_ERROR(dimension_too_small);
RADSTEIN_DEFINE_ERROR(bad_table_length);
RADSTEIN_DEFINE_ERROR(dimension_limit);
RADSTEIN_DEFINE_ERROR(not_centered);
RADSTEIN_DEFINE_ERROR(index_out_of_range);
RADSTEIN_DEFINE_ERROR(missing_norm);
RADSTEIN_DEFINE_ERROR(missing_tail_certificate);
RADSTEIN_DEFINE_ERROR(not_normalized);
RADSTEIN_DEFINE_ERROR(degenerate_variance);
RADSTEIN_DEFINE_ERROR(empty_set);
RADSTEIN_DEFINE_ERROR(zero_measure);
RADSTEIN_DEFINE_ERROR(n_too_small);
RADSTEIN_DEFINE_ERROR(not_injective);
RADSTEIN_DEFINE_ERROR(quadrature_unstable);
RADSTEIN_DEFINE_ERROR(rational_overflow);
RADSTEIN_DEFINE_ERROR(parse_error);

#undef RADSTEIN_DEFINE_ERROR

}  // namespace radstein
