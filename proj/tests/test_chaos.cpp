#include <doctest.h>

#include "helpers.hpp"
#include "radstein/chaos.hpp"
#include "radstein/engine.hpp"

using namespace radstein;

namespace {

// Indicator of {X_1 = +1, X_2 = +1} on two coordinates: the expansion of
// (1 + X_1)(1 + X_2)/4.
chaos_decomposition<double> corner_indicator() {
  chaos_decomposition<double> dec(2, 0.25);
  dec.set_kernel(make_symmetric_kernel<double>(1, {{{1}, 0.25}, {{2}, 0.25}}));
  dec.set_kernel(make_symmetric_kernel<double>(2, {{{1, 2}, 0.125}}));
  return dec;
}

truth_table<double> product_table_x1x2() {
  // lexicographic, coordinate 1 least significant, bit set <=> +1
  return truth_table<double>(2, {1.0, -1.0, -1.0, 1.0});
}

}  // namespace

TEST_CASE("multiple integrals evaluate as signed sums") {
  auto f = make_symmetric_kernel<double>(2, {{{1, 2}, 0.5}});
  CHECK(evaluate_multiple_integral(f, rademacher_point::from_signs({+1, +1})) ==
        doctest::Approx(1.0));
  CHECK(evaluate_multiple_integral(f, rademacher_point::from_signs({+1, -1})) ==
        doctest::Approx(-1.0));
  auto c = make_symmetric_kernel<double>(1, {{{1}, 0.7}});
  CHECK(evaluate_multiple_integral(c, rademacher_point::from_signs({-1, +1})) ==
        doctest::Approx(-0.7));
  CHECK_THROWS_AS(evaluate_multiple_integral(f, rademacher_point::from_signs({+1})),
                  dimension_too_small);
}

TEST_CASE("decomposition evaluation") {
  auto dec = corner_indicator();
  CHECK(evaluate(dec, rademacher_point::from_signs({+1, +1})) == doctest::Approx(1.0));
  CHECK(evaluate(dec, rademacher_point::from_signs({-1, +1})) == doctest::Approx(0.0));
  chaos_decomposition<double> constant(0, 3.25);
  CHECK(evaluate(constant, rademacher_point::from_mask(0, 0)) == 3.25);
}

TEST_CASE("Walsh decomposition of small tables") {
  auto dec = decompose_walsh(product_table_x1x2());
  CHECK(dec.mean() == doctest::Approx(0.0));
  CHECK(!dec.has_order(1));
  CHECK(dec.kernel(2).value_at({1, 2}) == doctest::Approx(0.5));

  auto const7 = decompose_walsh(truth_table<double>(2, {7.0, 7.0, 7.0, 7.0}));
  CHECK(const7.mean() == doctest::Approx(7.0));
  CHECK(const7.kernels().empty());

  // indicator of the (+,+) corner
  auto ind = decompose_walsh(truth_table<double>(2, {0.0, 0.0, 0.0, 1.0}));
  CHECK(ind.mean() == doctest::Approx(0.25));
  CHECK(ind.kernel(1).value_at({1}) == doctest::Approx(0.25));
  CHECK(ind.kernel(1).value_at({2}) == doctest::Approx(0.25));
  CHECK(ind.kernel(2).value_at({1, 2}) == doctest::Approx(0.125));

  CHECK_THROWS_AS(truth_table<double>(2, {1.0, 2.0, 3.0}), bad_table_length);
  CHECK_THROWS_AS(truth_table<double>(30, {}), dimension_limit);
}

TEST_CASE("conditional-expectation route agrees with the transform") {
  auto viaH = decompose_hoeffding(product_table_x1x2());
  CHECK(viaH.mean() == doctest::Approx(0.0));
  CHECK(viaH.kernel(2).value_at({1, 2}) == doctest::Approx(0.5));

  auto constant = decompose_hoeffding(truth_table<double>(2, {3.0, 3.0, 3.0, 3.0}));
  CHECK(constant.kernels().empty());

  counter_rng master(11);
  for (int s = 0; s < 40; ++s) {
    rng_stream stream(master.split(s));
    const int d = static_cast<int>(stream.next_int(1, 6));
    auto table = random_table(stream, d);
    auto a = decompose_walsh(table);
    auto b = decompose_hoeffding(table);
    CHECK(std::fabs(a.mean() - b.mean()) < 1e-12);
    for (const auto& [n, k] : a.kernels()) {
      REQUIRE(b.has_order(n));
      CHECK(kernels_equal(k, b.kernel(n), 1e-12));
    }
    CHECK(a.kernels().size() == b.kernels().size());
  }
}

TEST_CASE("the two decomposition routes are exactly equal in rational mode") {
  counter_rng master(12);
  for (int s = 0; s < 20; ++s) {
    rng_stream stream(master.split(s));
    const int d = static_cast<int>(stream.next_int(1, 8));
    std::vector<rational> vals(std::size_t{1} << d);
    for (auto& v : vals) v = random_dyadic<rational>(stream);
    truth_table<rational> table(d, vals);
    auto a = decompose_walsh(table);
    auto b = decompose_hoeffding(table);
    CHECK(a.mean() == b.mean());
    REQUIRE(a.kernels().size() == b.kernels().size());
    for (const auto& [n, k] : a.kernels()) CHECK(kernels_equal(k, b.kernel(n)));
  }
}

TEST_CASE("decomposition and evaluation invert each other") {
  counter_rng master(13);
  for (int s = 0; s < 30; ++s) {
    rng_stream stream(master.split(s));
    const int d = static_cast<int>(stream.next_int(1, 6));
    auto table = random_table(stream, d);
    auto dec = decompose_walsh(table);
    auto back = to_truth_table(dec, d);
    for (std::size_t i = 0; i < table.values.size(); ++i)
      CHECK(back.values[i] == doctest::Approx(table.values[i]).epsilon(1e-12));

    auto dec2 = random_centered_decomposition<double>(stream, d, std::min(3, d), 5);
    auto redec = decompose_walsh(to_truth_table(dec2, d));
    CHECK(redec.mean() == doctest::Approx(dec2.mean()).epsilon(1e-12));
    for (const auto& [n, k] : dec2.kernels()) {
      REQUIRE(redec.has_order(n));
      CHECK(kernels_equal(k, redec.kernel(n), 1e-10));
    }
  }
}

TEST_CASE("product formula on first-chaos indicators") {
  auto e1 = make_symmetric_kernel<double>(1, {{{1}, 1.0}});
  auto e2 = make_symmetric_kernel<double>(1, {{{2}, 1.0}});

  // X_1^2 = 1: the diagonal term is killed and only the mean survives
  auto sq = product(e1, e1);
  CHECK(sq.mean() == doctest::Approx(1.0));
  CHECK(sq.kernels().empty());

  auto cross = product(e1, e2);
  CHECK(cross.mean() == doctest::Approx(0.0));
  CHECK(cross.kernel(2).value_at({1, 2}) == doctest::Approx(0.5));
}

TEST_CASE("product formula matches pointwise multiplication exactly") {
  counter_rng master(14);
  for (int s = 0; s < 60; ++s) {
    rng_stream stream(master.split(s));
    const int n = static_cast<int>(stream.next_int(1, 3));
    const int m = static_cast<int>(stream.next_int(1, 3));
    auto f = random_kernel<rational>(stream, n, 5, 4);
    auto g = random_kernel<rational>(stream, m, 5, 4);
    auto prod = product(f, g);
    const int d = 5;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d); ++mask) {
      const auto p = rademacher_point::from_mask(d, mask);
      CHECK(evaluate(prod, p) ==
            evaluate_multiple_integral(f, p) * evaluate_multiple_integral(g, p));
    }
  }
}

TEST_CASE("isometric covariance") {
  chaos_decomposition<double> a(2);
  a.set_kernel(make_symmetric_kernel<double>(2, {{{1, 2}, 0.5}}));
  CHECK(covariance(a, a) == doctest::Approx(1.0));

  chaos_decomposition<double> b(2);
  b.set_kernel(make_symmetric_kernel<double>(1, {{{1}, 1.0}}));
  CHECK(covariance(a, b) == doctest::Approx(0.0));

  counter_rng master(15);
  for (int s = 0; s < 30; ++s) {
    rng_stream stream(master.split(s));
    const int d = static_cast<int>(stream.next_int(2, 6));
    auto x = random_centered_decomposition<double>(stream, d, 3, 5);
    auto y = random_centered_decomposition<double>(stream, d, 3, 5);
    const double by_formula = covariance(x, y);
    const double by_enumeration =
        enumerate_expectation(
            [&](const rademacher_point& p) { return evaluate(x, p) * evaluate(y, p); }, d)
            .value -
        enumerate_expectation([&](const rademacher_point& p) { return evaluate(x, p); }, d)
                .value *
            enumerate_expectation(
                [&](const rademacher_point& p) { return evaluate(y, p); }, d)
                .value;
    CHECK(by_formula == doctest::Approx(by_enumeration).epsilon(1e-9));
  }
}

TEST_CASE("isometry is exact in rational mode") {
  counter_rng master(16);
  for (int s = 0; s < 50; ++s) {
    rng_stream stream(master.split(s));
    const int q = static_cast<int>(stream.next_int(1, 4));
    auto f = random_kernel<rational>(stream, q, 6, 6);
    if (f.empty()) continue;
    const rational lhs = enumerate_expectation_exact<rational>(
        [&](const rademacher_point& p) {
          const rational v = evaluate_multiple_integral(f, p);
          return v * v;
        },
        6);
    CHECK(lhs == factorial_as<rational>(q) * l2_norm_squared(f));
  }
}

TEST_CASE("fixed-chaos moments are finite and stable under padding") {
  counter_rng master(17);
  for (int s = 0; s < 20; ++s) {
    rng_stream stream(master.split(s));
    const int q = static_cast<int>(stream.next_int(1, 3));
    auto f = random_kernel<double>(stream, q, 5, 5);
    auto m4 = enumerate_expectation(
        [&](const rademacher_point& p) {
          const double v = evaluate_multiple_integral(f, p);
          return v * v * v * v;
        },
        5);
    auto m6 = enumerate_expectation(
        [&](const rademacher_point& p) {
          const double v = evaluate_multiple_integral(f, p);
          return v * v * v * v * v * v;
        },
        5);
    CHECK(std::isfinite(m4.value));
    CHECK(std::isfinite(m6.value));
    // padding an unused coordinate changes nothing
    auto m4pad = enumerate_expectation(
        [&](const rademacher_point& p) {
          const double v = evaluate_multiple_integral(f, p);
          return v * v * v * v;
        },
        6);
    CHECK(m4.value == doctest::Approx(m4pad.value).epsilon(1e-12));
  }
}
