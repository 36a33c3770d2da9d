#include <algorithm>
#include <set>
#include <vector>

#include "doctest.h"
#include "fflab/rng.hpp"
#include "fflab/setops.hpp"
#include "fflab/sumprod.hpp"

using namespace fflab;

TEST_SUITE_BEGIN("sumprod");

namespace {

// Brute-force min over n-subsets of max(|A+A|, |A.A|), sets via std::set.
std::size_t brute_min_max(const PrimeField& f, std::uint32_t n) {
  std::vector<Elem> pick(n);
  std::size_t best = ~std::size_t{0};
  auto rec = [&](auto&& self, std::uint32_t depth, Elem lo) -> void {
    if (depth == n) {
      std::set<Elem> sums, prods;
      for (Elem x : pick)
        for (Elem y : pick) {
          sums.insert(f.add(x, y));
          prods.insert(f.mul(x, y));
        }
      best = std::min(best, std::max(sums.size(), prods.size()));
      return;
    }
    for (Elem x = lo; x < f.q(); ++x) {
      pick[depth] = x;
      self(self, depth + 1, x + 1);
    }
  };
  rec(rec, 0, 0);
  return best;
}

}  // namespace

TEST_CASE("boost picks the smallest maximizing dilation") {
  const auto f = make_field(11);
  FSet a = FSet::of(f, {0, 1});
  auto [xi, size] = boost_xi(a, a);
  CHECK(xi == 2);  // xi = 1 and xi = 10 merge endpoints, giving 3 instead of 4
  CHECK(size == 4);
}

TEST_CASE("boost degenerate shapes") {
  const auto f = make_field(11);
  auto [xi1, s1] = boost_xi(FSet::of(f, {3}), FSet::of(f, {5}));
  CHECK(xi1 == 1);
  CHECK(s1 == 1);

  auto [xi2, s2] = boost_xi(FSet::full(f), FSet::of(f, {1}));
  CHECK(xi2 == 1);
  CHECK(s2 == 11);

  CHECK_THROWS_AS(boost_xi(FSet(f), FSet::of(f, {1})), EmptyInput);
}

TEST_CASE("boost guarantee on random pairs") {
  const auto f = make_field(31);
  Rng rng(7);
  for (int t = 0; t < 200; ++t) {
    FSet a = rand_subset(f, 1 + rng.below(31), rng.below(~0ull));
    FSet b = rand_subset(f, 1 + rng.below(31), rng.below(~0ull));
    auto [xi, size] = boost_xi(a, b);
    CHECK(xi >= 1);
    // 2|A+Bxi| >= |A||B| or 10|A+Bxi| >= q
    CHECK((2 * size >= a.size() * b.size() || 10 * size >= f.q()));
  }
}

TEST_CASE("linear cover size by plain accumulation") {
  const auto f = make_field(11);
  FSet b = FSet::of(f, {0, 1});
  CHECK(linear_cover_size(b, std::vector<Elem>{1}) == 2);
  CHECK(linear_cover_size(b, std::vector<Elem>{5}) == 2);
  CHECK(linear_cover_size(b, std::vector<Elem>{1, 2, 4, 3}) == 11);
  CHECK(linear_cover_size(FSet::full(f), std::vector<Elem>{1}) == 11);
}

TEST_CASE("surjection from a two-element set") {
  const auto f3 = make_field(3);
  Surjection s3 = build_surjection(FSet::of(f3, {0, 1}));
  CHECK(s3.coeffs == std::vector<Elem>{1, 1});
  CHECK(s3.surjective());

  const auto f11 = make_field(11);
  Surjection s11 = build_surjection(FSet::of(f11, {0, 1}));
  CHECK(s11.coeffs == std::vector<Elem>{1, 2, 4, 3});
  CHECK(s11.cover_size == 11);
  // never more than the doubling-argument cap for this shape
  CHECK(s11.coeffs.size() <= 8);
}

TEST_CASE("surjection without zero in the source") {
  const auto f = make_field(5);
  Surjection s = build_surjection(FSet::of(f, {1, 2}));
  CHECK(s.coeffs == std::vector<Elem>{1, 2, 1});
  CHECK(s.surjective());
}

TEST_CASE("surjection of the full field is rank 1") {
  const auto f = make_field(7);
  Surjection s = build_surjection(FSet::full(f));
  CHECK(s.coeffs == std::vector<Elem>{1});
  CHECK(s.surjective());
}

TEST_CASE("surjection rejects sets that cannot generate") {
  const auto f = make_field(7);
  CHECK_THROWS_AS(build_surjection(FSet::of(f, {3})), TooSmall);
  CHECK_THROWS_AS(build_surjection(FSet(f)), TooSmall);
}

TEST_CASE("surjection covers the field for every seeded pair") {
  Rng rng(99);
  for (std::uint32_t q : {7u, 11u, 13u}) {
    const auto f = make_field(q);
    for (int t = 0; t < 100; ++t) {
      FSet a = rand_subset(f, 2 + rng.below(q - 1), rng.below(~0ull));
      Surjection s = build_surjection(a);
      CHECK(s.cover_size == q);
      CHECK(linear_cover_size(a, s.coeffs) == q);
    }
  }
}

TEST_CASE("first collision in lex scan order") {
  const auto f = make_field(3);
  FSet b = FSet::of(f, {0, 1});
  Surjection s{3, {1, 1}, b, linear_cover_size(b, std::vector<Elem>{1, 1})};
  Collision c = find_collision(b, s);
  CHECK(c.tuple_a == std::vector<Elem>{0, 1});
  CHECK(c.tuple_b == std::vector<Elem>{1, 0});
}

TEST_CASE("no collision when the domain is too small") {
  const auto f = make_field(7);
  FSet b = FSet::of(f, {0});
  Surjection s{7, {1, 1}, b, 1};
  CHECK_THROWS_AS(find_collision(b, s), NoCollisionInBudget);
}

TEST_CASE("rank reduction keeps leading coefficients over the boosted set") {
  const auto f = make_field(7);
  FSet b = FSet::of(f, {0, 1});
  Surjection s = build_surjection(b);
  CHECK(s.coeffs == std::vector<Elem>{1, 2, 3});

  auto [bt, s2] = reduce_rank(b, s);
  CHECK(bt.elements() == std::vector<Elem>{0, 1, 2, 5, 6});
  CHECK(s2.coeffs == std::vector<Elem>{1, 2});
  CHECK(s2.surjective());
  CHECK(s2.source == bt);

  auto [bt2, s3] = reduce_rank(bt, s2);
  CHECK(s3.coeffs.size() == 1);
  CHECK(s3.surjective());
  CHECK(bt2 == FSet::full(f));
}

TEST_CASE("rank reduction swaps the colliding coordinate to the back") {
  const auto f = make_field(5);
  FSet b = FSet::of(f, {0, 1});
  // 1*b1 + 1*b2 + 2*b3: first lex collision (0,1,0) ~ (1,0,0) differs in the
  // first two slots, so coefficient 1 at index 1 moves last and is dropped.
  Surjection s{5, {1, 1, 2}, b, linear_cover_size(b, std::vector<Elem>{1, 1, 2})};
  REQUIRE(s.surjective());
  auto [bt, s2] = reduce_rank(b, s);
  CHECK(s2.coeffs == std::vector<Elem>{1, 2});
  CHECK(bt == FSet::full(f));
  CHECK(s2.surjective());
}

TEST_CASE("rank reduction of a full-field pair") {
  const auto f = make_field(7);
  FSet b = FSet::full(f);
  Surjection s{7, {1, 1}, b, linear_cover_size(b, std::vector<Elem>{1, 1})};
  auto [bt, s2] = reduce_rank(b, s);
  CHECK(bt == FSet::full(f));
  CHECK(s2.coeffs == std::vector<Elem>{1});
  CHECK(s2.surjective());
}

TEST_CASE("rank reduction preconditions") {
  const auto f = make_field(7);
  FSet b = FSet::of(f, {0, 1});
  Surjection notsur{7, {1, 1}, b, linear_cover_size(b, std::vector<Elem>{1, 1})};
  REQUIRE(!notsur.surjective());
  CHECK_THROWS_AS(reduce_rank(b, notsur), HypothesisFailed);

  Surjection rank1{7, {1}, FSet::full(f), 7};
  CHECK_THROWS_AS(reduce_rank(FSet::full(f), rank1), SizeOutOfRange);
}

TEST_CASE("full reduction chain ends at rank 1") {
  Rng rng(5);
  for (std::uint32_t q : {7u, 11u, 13u}) {
    const auto f = make_field(q);
    for (int t = 0; t < 25; ++t) {
      FSet b = rand_subset(f, 2 + rng.below(q - 1), rng.below(~0ull));
      Surjection s = build_surjection(b);
      FSet cur = b;
      while (s.coeffs.size() > 1) {
        auto [nb, ns] = reduce_rank(cur, s);
        CHECK(ns.coeffs.size() == s.coeffs.size() - 1);
        CHECK(ns.surjective());
        cur = nb;
        s = ns;
      }
      CHECK(s.coeffs.size() == 1);
    }
  }
}

TEST_CASE("exhaustive minimum matches the brute oracle") {
  const auto f = make_field(13);
  ExponentRow r2 = sumprod_min_search(f, 2, SearchMode::Exhaustive, 1, 0);
  CHECK(r2.min_max == 3);
  CHECK(r2.min_max == brute_min_max(f, 2));
  CHECK(r2.argmin == std::vector<Elem>{0, 1});

  ExponentRow r3 = sumprod_min_search(f, 3, SearchMode::Exhaustive, 1, 0);
  CHECK(r3.min_max == 5);
  CHECK(r3.min_max == brute_min_max(f, 3));
  CHECK(r3.argmin == std::vector<Elem>{0, 1, 2});
}

TEST_CASE("taking the whole field pins the value at q") {
  const auto f = make_field(7);
  ExponentRow r = sumprod_min_search(f, 7, SearchMode::Exhaustive, 1, 0);
  CHECK(r.min_max == 7);
  CHECK(r.argmin.size() == 7);
}

TEST_CASE("additive floor holds in both modes") {
  for (std::uint32_t q : {7u, 11u}) {
    const auto f = make_field(q);
    for (std::uint32_t n = 2; n <= q; ++n) {
      ExponentRow r = sumprod_min_search(f, n, SearchMode::HillClimb, 4, 17);
      CHECK(r.min_max >= std::min<std::size_t>(2 * n - 1, q));
    }
  }
}

TEST_CASE("hill climb is deterministic and bounded by the exhaustive value") {
  const auto f = make_field(11);
  ExponentRow a = sumprod_min_search(f, 3, SearchMode::HillClimb, 6, 123);
  ExponentRow b = sumprod_min_search(f, 3, SearchMode::HillClimb, 6, 123);
  CHECK(a.min_max == b.min_max);
  CHECK(a.argmin == b.argmin);
  ExponentRow ex = sumprod_min_search(f, 3, SearchMode::Exhaustive, 1, 0);
  CHECK(a.min_max >= ex.min_max);
}

TEST_CASE("sum-only affine reduction agrees with the raw scan") {
  const auto f = make_field(7);
  ExponentRow raw = sumprod_min_search(f, 3, SearchMode::Exhaustive, 1, 0,
                                       SumProdStat::SumOnly);
  ExponentRow red = sumprod_min_search(f, 3, SearchMode::Exhaustive, 1, 0,
                                       SumProdStat::SumOnly, true);
  CHECK(raw.min_max == 5);
  CHECK(red.min_max == 5);
  CHECK(red.argmin == std::vector<Elem>{0, 1, 2});
}

TEST_CASE("affine reduction is rejected elsewhere") {
  const auto f = make_field(7);
  CHECK_THROWS_AS(sumprod_min_search(f, 3, SearchMode::Exhaustive, 1, 0,
                                     SumProdStat::MaxBoth, true),
                  BadConfig);
  CHECK_THROWS_AS(sumprod_min_search(f, 3, SearchMode::HillClimb, 2, 0,
                                     SumProdStat::SumOnly, true),
                  BadConfig);
}

TEST_CASE("size bounds are enforced") {
  const auto f = make_field(7);
  CHECK_THROWS_AS(sumprod_min_search(f, 1, SearchMode::Exhaustive, 1, 0),
                  SizeOutOfRange);
  CHECK_THROWS_AS(sumprod_min_search(f, 8, SearchMode::Exhaustive, 1, 0),
                  SizeOutOfRange);
  CHECK_THROWS_AS(sumprod_min_search(f, 3, SearchMode::HillClimb, 0, 0),
                  SizeOutOfRange);
}

TEST_SUITE_END();
