#include <doctest.h>

#include "helpers.hpp"
#include "radstein/engine.hpp"
#include "radstein/sparse.hpp"
#include "radstein/stein.hpp"

using namespace radstein;

namespace {
cover triangle_cover() { return cover(3, 2, {{1, 2}, {2, 3}, {1, 3}}); }

sparse_index_set random_sparse(rng_stream& s, int d, index_t N, int max_reps) {
  std::vector<index_tuple> reps;
  const int count = static_cast<int>(s.next_int(1, max_reps));
  for (int i = 0; i < count; ++i) {
    index_tuple t;
    int guard = 0;
    while (static_cast<int>(t.size()) < d && guard++ < 200) {
      index_t c = s.next_int(1, N);
      if (std::find(t.begin(), t.end(), c) == t.end()) t.push_back(c);
    }
    if (static_cast<int>(t.size()) == d) reps.push_back(t);
  }
  if (reps.empty()) reps.push_back([&] {
    index_tuple t(d);
    for (int i = 0; i < d; ++i) t[i] = i + 1;
    return t;
  }());
  return sparse_index_set(d, N, reps);
}
}  // namespace

TEST_CASE("set construction canonicalizes") {
  sparse_index_set F(2, 4, {{2, 1}, {1, 2}, {3, 4}});
  CHECK(F.reps().size() == 2);
  CHECK(F.cardinality() == 4);
  CHECK(F.contains({1, 2}));
  CHECK_THROWS_AS(sparse_index_set(2, 4, {{1, 1}}), diagonal_entry);
  CHECK_THROWS_AS(sparse_index_set(2, 4, {{1, 5}}), index_out_of_range);
}

TEST_CASE("star counts over the symmetric closure") {
  sparse_index_set F(2, 4, {{1, 2}});
  CHECK(star_count(F, 1) == 2);
  CHECK(star_count(F, 3) == 0);
  CHECK_THROWS_AS(star_count(F, 9), index_out_of_range);

  sparse_index_set G(2, 4, {{1, 2}, {1, 3}});
  CHECK(star_count(G, 1) == 4);
  CHECK(max_star_count(G) == 4);

  // sum over j counts each tuple d times
  counter_rng master(61);
  for (int s = 0; s < 30; ++s) {
    rng_stream stream(master.split(s));
    const int d = static_cast<int>(stream.next_int(2, 4));
    auto F2 = random_sparse(stream, d, 10, 8);
    long long total = 0;
    for (index_t j = 1; j <= F2.N(); ++j) total += star_count(F2, j);
    CHECK(total == d * F2.cardinality());
  }
}

TEST_CASE("sharp counts") {
  sparse_index_set disjoint(2, 4, {{1, 2}, {3, 4}});
  CHECK(sharp_count(disjoint) == 0);

  // all increasing pairs of [4]: (1,2),(3,4) recombines through (1,3),(2,4)
  sparse_index_set full(2, 4, {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}});
  CHECK(sharp_count(full) > 0);
  CHECK(sharp_count(full) == sharp_count_bruteforce(full));

  sparse_index_set single(2, 4, {{1, 2}});
  CHECK(sharp_count(single) == 0);
}

TEST_CASE("witness scan equals the brute-force definition") {
  counter_rng master(62);
  for (int s = 0; s < 40; ++s) {
    rng_stream stream(master.split(s));
    const int d = static_cast<int>(stream.next_int(2, 4));
    auto F = random_sparse(stream, d, 12, 12);
    CHECK(sharp_count(F) == sharp_count_bruteforce(F));
  }
  // and on small fractional products
  for (index_t N : {16, 36, 64}) {
    auto F = fractional_product(triangle_cover(), N);
    CHECK(sharp_count(F) == sharp_count_bruteforce(F));
  }
}

TEST_CASE("sharp membership is symmetric in the pair") {
  counter_rng master(63);
  for (int s = 0; s < 10; ++s) {
    rng_stream stream(master.split(s));
    auto F = random_sparse(stream, 2, 8, 8);
    const auto& reps = F.reps();
    for (std::size_t a = 0; a < reps.size(); ++a)
      for (std::size_t b = 0; b < reps.size(); ++b) {
        auto in_sharp = [&](const index_tuple& A, const index_tuple& B) {
          if (!detail::sorted_disjoint(A, B)) return false;
          bool ok = false;
          detail::for_each_subset(A, 1, [&](const index_tuple& Ap, const index_tuple& Ar) {
            detail::for_each_subset(B, 1, [&](const index_tuple& Bp, const index_tuple& Br) {
              if (F.contains(detail::sorted_merge(Bp, Ar)) &&
                  F.contains(detail::sorted_merge(Ap, Br)))
                ok = true;
            });
          });
          return ok;
        };
        CHECK(in_sharp(reps[a], reps[b]) == in_sharp(reps[b], reps[a]));
      }
  }
}

TEST_CASE("weighted sharp scan matches a from-the-definition oracle") {
  counter_rng master(66);
  for (int s = 0; s < 20; ++s) {
    rng_stream stream(master.split(s));
    const int d = static_cast<int>(stream.next_int(2, 3));
    auto F = random_sparse(stream, d, 9, 10);
    std::vector<double> w(F.reps().size());
    for (auto& x : w) x = 0.25 * stream.next_int(1, 4);

    const auto scan = detail::sharp_scan(F, [&](int id) { return w[id]; });

    double oracle = 0.0;
    const auto& reps = F.reps();
    for (std::size_t a = 0; a < reps.size(); ++a)
      for (std::size_t b = 0; b < reps.size(); ++b) {
        if (!detail::sorted_disjoint(reps[a], reps[b])) continue;
        bool ok = false;
        for (int p = 1; p <= d - 1 && !ok; ++p)
          detail::for_each_subset(reps[a], p, [&](const index_tuple& Ap,
                                                  const index_tuple& Ar) {
            detail::for_each_subset(reps[b], p, [&](const index_tuple& Bp,
                                                    const index_tuple& Br) {
              if (F.contains(detail::sorted_merge(Bp, Ar)) &&
                  F.contains(detail::sorted_merge(Ap, Br)))
                ok = true;
            });
          });
        if (ok) oracle += w[a] * w[b];
      }
    CHECK(scan.weighted_pairs == doctest::Approx(oracle).epsilon(1e-12));
  }
}

TEST_CASE("scaling exponents are injection-independent") {
  // the exponents are a property of the cover, not of the particular
  // injection into [N]
  auto mixed = scaling_table(triangle_cover(), {64, 144, 256}, cosine_test(1.0));
  auto seeded = scaling_table(triangle_cover(), {64, 144, 256}, cosine_test(1.0),
                              injection_spec::seeded(17));
  CHECK(mixed.slope_cardinality == doctest::Approx(seeded.slope_cardinality).epsilon(0.05));
  for (std::size_t i = 0; i < mixed.rows.size(); ++i) {
    // the combinatorics only depend on phi through relabeling
    CHECK(mixed.rows[i].cardinality == seeded.rows[i].cardinality);
    CHECK(mixed.rows[i].max_star == seeded.rows[i].max_star);
    CHECK(mixed.rows[i].sharp == seeded.rows[i].sharp);
  }
}

TEST_CASE("multilinear kernel normalization") {
  sparse_index_set F(2, 4, {{1, 2}});
  auto f = multilinear_kernel(F);
  CHECK(f.value_at({1, 2}) == doctest::Approx(0.5));

  // E J_2(f)^2 = 1 by enumeration
  chaos_decomposition<double> dec(4);
  dec.set_kernel(f);
  const double var = enumerate_expectation(
                         [&](const rademacher_point& p) {
                           const double v = evaluate(dec, p);
                           return v * v;
                         },
                         4)
                         .value;
  CHECK(var == doctest::Approx(1.0).epsilon(1e-12));

  // exact normalization identity in rational arithmetic
  counter_rng master(64);
  for (int s = 0; s < 20; ++s) {
    rng_stream stream(master.split(s));
    const int d = static_cast<int>(stream.next_int(2, 4));
    auto G = random_sparse(stream, d, 10, 10);
    const rational vsq = multilinear_value_squared(G);
    const rational nsq = factorial_as<rational>(d) *
                         (factorial_as<rational>(d) *
                          rational(static_cast<long long>(G.reps().size())) * vsq);
    CHECK(nsq == rational(1));
  }

  sparse_index_set empty_F(2, 4, {});
  CHECK_THROWS_AS(multilinear_kernel(empty_F), empty_set);
}

TEST_CASE("fractional product of the triangle cover") {
  // n = 2: only (1,2,1) and (2,1,2) survive the diagonal filter
  auto F = fractional_product(triangle_cover(), 4);
  REQUIRE(F.reps().size() == 2);
  CHECK(F.contains({1, 2, 3}));
  CHECK(F.contains({2, 3, 4}));

  // determinism
  auto F2 = fractional_product(triangle_cover(), 4);
  CHECK(F.reps() == F2.reps());

  // seeded injections give valid sets of the same size profile
  auto Fs = fractional_product(triangle_cover(), 64, injection_spec::seeded(5));
  CHECK(!Fs.empty());
  CHECK(Fs.N() == 64);

  CHECK_THROWS_AS(fractional_product(triangle_cover(), 3), n_too_small);

  // explicit tables must be injective
  CHECK_THROWS_AS(
      fractional_product(triangle_cover(), 4,
                         injection_spec::from_table({1, 1, 2, 3})),
      not_injective);
  auto Ft = fractional_product(triangle_cover(), 4,
                               injection_spec::from_table({1, 2, 3, 4}));
  CHECK(Ft.reps() == F.reps());
}

TEST_CASE("cover validation") {
  CHECK_THROWS_AS(cover(3, 2, {{1, 2}, {2, 3}}), error);          // wrong count
  CHECK_THROWS_AS(cover(3, 2, {{1, 2}, {1, 2}, {1, 3}}), error);  // multiplicities
  CHECK_THROWS_AS(cover(4, 2, {{1, 2}, {1, 2}, {3, 4}, {3, 4}}), error);  // disconnected
  CHECK_NOTHROW(cover(4, 3, {{1, 2, 3}, {2, 3, 4}, {1, 3, 4}, {1, 2, 4}}));
}

TEST_CASE("scaling table over a short grid") {
  auto res = scaling_table(triangle_cover(), {64, 128, 256}, cosine_test(1.0));
  REQUIRE(res.rows.size() == 3);
  CHECK(res.slope_cardinality == doctest::Approx(1.5).epsilon(0.2));
  // max|F*|/|F| ~ 1/N since the per-index counts grow one power below |F|
  CHECK(res.slope_star_ratio == doctest::Approx(-1.0).epsilon(0.3));
  for (std::size_t i = 1; i < res.rows.size(); ++i) {
    CHECK(res.rows[i].stat1 <= res.rows[i - 1].stat1 + 1e-12);
    CHECK(res.rows[i].stat2 <= res.rows[i - 1].stat2 + 1e-12);
  }
}
