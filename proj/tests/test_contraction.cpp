#include <doctest.h>

#include "helpers.hpp"
#include "radstein/contraction.hpp"

using namespace radstein;

namespace {
const symmetric_kernel<double> single_pair =
    make_symmetric_kernel<double>(2, {{{1, 2}, 1.0}});
}

TEST_CASE("star contraction on the single-pair kernel") {
  // r=2, l=1: sum over the summed index of f(i,a)^2
  auto k21 = star(single_pair, single_pair, 2, 1);
  CHECK(k21.order() == 1);
  CHECK(k21.value_at({1}) == doctest::Approx(1.0));
  CHECK(k21.value_at({2}) == doctest::Approx(1.0));
  CHECK(k21.entries().size() == 2);

  // full contraction: <f, f> over ordered pairs
  auto k22 = star(single_pair, single_pair, 2, 2);
  CHECK(k22.order() == 0);
  CHECK(k22.scalar_value() == doctest::Approx(2.0));

  // r=l=1: the matrix product [f][f]^T
  auto k11 = star(single_pair, single_pair, 1, 1);
  CHECK(k11.value_at({1, 1}) == doctest::Approx(1.0));
  CHECK(k11.value_at({2, 2}) == doctest::Approx(1.0));
  CHECK(k11.value_at({1, 2}) == 0.0);

  CHECK_THROWS_AS(star(single_pair, single_pair, 1, 2), contraction_out_of_range);
  CHECK_THROWS_AS(star(single_pair, single_pair, 3, 0), contraction_out_of_range);
}

TEST_CASE("trace of the fourth power") {
  CHECK(trace_power4(single_pair) == doctest::Approx(2.0));
  symmetric_kernel<double> zero(2);
  CHECK(trace_power4(zero) == 0.0);
  auto blocks = make_symmetric_kernel<double>(2, {{{1, 2}, 1.0}, {{3, 4}, 1.0}});
  CHECK(trace_power4(blocks) == doctest::Approx(4.0));
}

TEST_CASE("norm chains on the single-pair kernel") {
  // ||f *_1^1 f|| = sqrt(2) <= ||f||^2 = 2
  CHECK(std::sqrt(contraction_norms(single_pair, single_pair, 1, 1).full) ==
        doctest::Approx(std::sqrt(2.0)));
  CHECK(l2_norm(single_pair) * l2_norm(single_pair) == doctest::Approx(2.0));
  auto rep = check_estimates(single_pair, single_pair);
  CHECK(rep.all_pass());
}

TEST_CASE("class-level norms match materialized contractions") {
  counter_rng master(77);
  for (int s = 0; s < 60; ++s) {
    rng_stream stream(master.split(s));
    const int n = static_cast<int>(stream.next_int(1, 4));
    const int m = static_cast<int>(stream.next_int(1, 4));
    auto f = random_kernel<double>(stream, n, 7, 6);
    auto g = random_kernel<double>(stream, m, 7, 6);
    for (int r = 0; r <= std::min(n, m); ++r) {
      for (int l = 0; l <= r; ++l) {
        auto mat = star(f, g, r, l);
        auto norms = contraction_norms(f, g, r, l);
        CHECK(norms.full ==
              doctest::Approx(l2_norm_squared(mat)).epsilon(1e-9));
        CHECK(norms.off_diagonal ==
              doctest::Approx(l2_norm_squared(restrict_off_diagonal(mat))).epsilon(1e-9));
        CHECK(norms.diagonal ==
              doctest::Approx(l2_norm_squared(restrict_to_diagonal(mat))).epsilon(1e-9));
        if (l == r) {
          if (mat.order() == 0) {
            CHECK(norms.sym_off_diagonal == doctest::Approx(norms.full));
          } else {
            auto sym = restrict_off_diagonal(symmetrize(mat));
            CHECK(norms.sym_off_diagonal ==
                  doctest::Approx(l2_norm_squared(sym)).epsilon(1e-9));
          }
        }
      }
    }
  }
}

TEST_CASE("bilinearity and exact norm identities") {
  counter_rng master(91);
  for (int s = 0; s < 60; ++s) {
    rng_stream stream(master.split(s));
    const int n = static_cast<int>(stream.next_int(1, 3));
    const int m = static_cast<int>(stream.next_int(1, 3));
    auto f1 = random_kernel<double>(stream, n, 6, 5);
    auto f2 = random_kernel<double>(stream, n, 6, 5);
    auto g = random_kernel<double>(stream, m, 6, 5);
    const int r = static_cast<int>(stream.next_int(0, std::min(n, m)));
    const int l = static_cast<int>(stream.next_int(0, r));

    auto lhs = star(f1 + f2, g, r, l);
    auto rhs = star(f1, g, r, l) + star(f2, g, r, l);
    CHECK(kernels_equal(lhs, rhs, 1e-10));

    // tensor product norm is exactly multiplicative
    CHECK(std::sqrt(contraction_norms(f1, g, 0, 0).full) ==
          doctest::Approx(l2_norm(f1) * l2_norm(g)).epsilon(1e-12));

    // full self-contraction is the squared norm
    auto full = star(f1, f1, n, n);
    CHECK(full.scalar_value() == doctest::Approx(l2_norm_squared(f1)).epsilon(1e-12));
  }
}

TEST_CASE("contractions are jointly Lipschitz in their arguments") {
  counter_rng master(123);
  for (int s = 0; s < 50; ++s) {
    rng_stream stream(master.split(s));
    const int n = static_cast<int>(stream.next_int(1, 3));
    const int m = static_cast<int>(stream.next_int(1, 3));
    auto f = random_kernel<double>(stream, n, 6, 5);
    auto g = random_kernel<double>(stream, m, 6, 5);
    auto fp = f + scale(random_kernel<double>(stream, n, 6, 3), 0.125);
    auto gp = g + scale(random_kernel<double>(stream, m, 6, 3), 0.125);
    for (int r = 0; r <= std::min(n, m); ++r) {
      auto a = star(f, g, r, r);
      auto b = star(fp, gp, r, r);
      const double lhs = l2_norm(a - b);
      const double rhs =
          l2_norm(f - fp) * l2_norm(g) + l2_norm(fp) * l2_norm(g - gp);
      CHECK(lhs <= rhs + 1e-10);
    }
  }
}

TEST_CASE("estimate chains hold on randomized instances") {
  counter_rng master(555);
  for (int s = 0; s < 120; ++s) {
    rng_stream stream(master.split(s));
    const int n = static_cast<int>(stream.next_int(1, 4));
    const int m = static_cast<int>(stream.next_int(1, 4));
    auto f = random_kernel<double>(stream, n, 8, 8);
    auto g = random_kernel<double>(stream, m, 8, 8);
    auto rep = check_estimates(f, g);
    for (const auto& c : rep.checks) {
      INFO(c.id, " lhs=", c.lhs, " rhs=", c.rhs, " seed=", s);
      CHECK(c.pass);
    }
  }
}

TEST_CASE("contraction norms are invariant under coordinate relabeling") {
  // shifting every coordinate past 2^16 forces the generic class-map path,
  // so this doubles as a packed-vs-generic consistency check
  counter_rng master(321);
  for (int s = 0; s < 30; ++s) {
    rng_stream stream(master.split(s));
    const int n = static_cast<int>(stream.next_int(1, 3));
    const int m = static_cast<int>(stream.next_int(1, 3));
    auto f = random_kernel<double>(stream, n, 6, 5);
    auto g = random_kernel<double>(stream, m, 6, 5);
    const index_t shift = 70000;
    symmetric_kernel<double> fs(n), gs(m);
    for (const auto& [t, v] : f.entries()) {
      index_tuple u = t;
      for (auto& c : u) c += shift;
      fs.set(u, v);
    }
    for (const auto& [t, v] : g.entries()) {
      index_tuple u = t;
      for (auto& c : u) c += shift;
      gs.set(u, v);
    }
    for (int r = 0; r <= std::min(n, m); ++r) {
      for (int l = 0; l <= r; ++l) {
        const auto a = contraction_norms(f, g, r, l);
        const auto b = contraction_norms(fs, gs, r, l);
        CHECK(a.full == doctest::Approx(b.full).epsilon(1e-12));
        CHECK(a.off_diagonal == doctest::Approx(b.off_diagonal).epsilon(1e-12));
        CHECK(a.diagonal == doctest::Approx(b.diagonal).epsilon(1e-12));
        if (l == r)
          CHECK(a.sym_off_diagonal == doctest::Approx(b.sym_off_diagonal).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("rational contractions are exact") {
  auto f = make_symmetric_kernel<rational>(2, {{{1, 2}, rational(1, 2)}});
  auto k = star(f, f, 2, 2);
  CHECK(k.scalar_value() == rational(1, 2));
  auto t = star(f, f, 1, 1);
  CHECK(t.value_at({1, 1}) == rational(1, 4));
}
