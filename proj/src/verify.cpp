#include "fflab/verify.hpp"

#include <algorithm>

#include "fflab/distance.hpp"
#include "fflab/errors.hpp"
#include "fflab/incidence2d.hpp"
#include "fflab/kakeya3d.hpp"
#include "fflab/rng.hpp"
#include "fflab/setops.hpp"
#include "fflab/sumprod.hpp"

namespace fflab {
namespace {

struct Tally {
  std::uint64_t checks = 0;
  std::uint64_t violations = 0;
  void expect(bool ok) {
    ++checks;
    if (!ok) ++violations;
  }
};

FSet from_mask(const PrimeField& f, std::uint32_t mask) {
  FSet s(f);
  for (Elem e = 0; e < f.q(); ++e)
    if ((mask >> e) & 1u) s.insert(e);
  return s;
}

FSet random_nonempty(const PrimeField& f, Rng& rng) {
  const std::size_t n = 1 + static_cast<std::size_t>(rng.below(f.q()));
  return rand_subset(f, n, rng.below(~0ull));
}

void suite_cauchy_davenport(const PrimeField& f, std::uint64_t seed, Tally& t) {
  if (f.q() <= 7) {
    const std::uint32_t top = 1u << f.q();
    for (std::uint32_t ma = 1; ma < top; ++ma)
      for (std::uint32_t mb = 1; mb < top; ++mb)
        t.expect(verify_cauchy_davenport(from_mask(f, ma), from_mask(f, mb)).holds);
    return;
  }
  Rng rng(seed);
  for (int i = 0; i < 2000; ++i)
    t.expect(verify_cauchy_davenport(random_nonempty(f, rng),
                                     random_nonempty(f, rng)).holds);
}

// Progressions with a common difference attain |A+B| = |A|+|B|-1 exactly.
void suite_ap_equality(const PrimeField& f, Tally& t) {
  for (Elem d = 1; d < f.q(); ++d)
    for (Elem a0 : {Elem(0), Elem(1)})
      for (std::uint32_t la = 1; la <= f.q(); ++la)
        for (std::uint32_t lb = 1; la + lb - 1 <= f.q(); ++lb) {
          FSet a(f), b(f);
          for (std::uint32_t i = 0; i < la; ++i)
            a.insert(f.add(a0, f.mul(static_cast<Elem>(i), d)));
          for (std::uint32_t i = 0; i < lb; ++i)
            b.insert(f.mul(static_cast<Elem>(i), d));
          t.expect(sumset(a, b).size() == la + lb - 1);
        }
}

void suite_boost_bound(const PrimeField& f, std::uint64_t seed, Tally& t) {
  const auto check = [&](const FSet& a, const FSet& b) {
    const auto [xi, size] = boost_xi(a, b);
    (void)xi;
    const std::uint64_t ab = std::uint64_t(a.size()) * b.size();
    t.expect(2 * std::uint64_t(size) >= ab || 10 * std::uint64_t(size) >= f.q());
  };
  if (f.q() <= 7) {
    const std::uint32_t top = 1u << f.q();
    for (std::uint32_t ma = 1; ma < top; ++ma)
      for (std::uint32_t mb = 1; mb < top; ++mb)
        check(from_mask(f, ma), from_mask(f, mb));
    return;
  }
  Rng rng(seed);
  for (int i = 0; i < 300; ++i)
    check(random_nonempty(f, rng), random_nonempty(f, rng));
}

void suite_ruzsa_cover(const PrimeField& f, std::uint64_t seed, Tally& t) {
  const auto check = [&](const Cover& c) {
    t.expect(c.covers());
    t.expect(c.counting_bound());
  };
  if (f.q() <= 7) {
    const std::uint32_t top = 1u << f.q();
    for (std::uint32_t ma = 1; ma < top; ++ma)
      for (std::uint32_t mb = 1; mb < top; ++mb)
        check(ruzsa_cover(from_mask(f, ma), from_mask(f, mb)));
    for (std::uint32_t ma = 1; ma < top; ++ma)
      for (Elem x = 0; x < f.q(); ++x)
        check(goodness_cover(x, from_mask(f, ma)));
    return;
  }
  Rng rng(seed);
  for (int i = 0; i < 300; ++i) {
    check(ruzsa_cover(random_nonempty(f, rng), random_nonempty(f, rng)));
    check(goodness_cover(static_cast<Elem>(rng.below(f.q())),
                         random_nonempty(f, rng)));
  }
}

void suite_pluennecke(const PrimeField& f, std::uint64_t seed, Tally& t) {
  static constexpr std::pair<int, int> combos[] = {{1, 1}, {1, 2}, {2, 1},
                                                   {1, 3}, {3, 1}, {2, 2}};
  const auto check = [&](const FSet& a) {
    const unsigned __int128 na = a.size();
    const unsigned __int128 sum = sumset(a, a).size();
    for (const auto& [h, k] : combos) {
      std::vector<int> signs;
      signs.insert(signs.end(), h, 1);
      signs.insert(signs.end(), k, -1);
      const unsigned __int128 lhs = iterated_combination(signs, a).size();
      unsigned __int128 l = lhs, r = na;
      for (int i = 0; i < h + k; ++i) {
        l *= na;
        r *= sum;
      }
      t.expect(l <= r);  // |hA-kA| |A|^{h+k} <= |A+A|^{h+k} |A|
    }
  };
  if (f.q() <= 7) {
    for (std::uint32_t ma = 1; ma < (1u << f.q()); ++ma) check(from_mask(f, ma));
    return;
  }
  Rng rng(seed);
  for (int i = 0; i < 200; ++i) check(random_nonempty(f, rng));
}

void suite_surjection(const PrimeField& f, std::uint64_t seed, Tally& t) {
  Rng rng(seed);
  for (int i = 0; i < 60; ++i) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.below(f.q() - 1));
    FSet a = rand_subset(f, n, rng.below(~0ull));
    Surjection s = build_surjection(a);
    t.expect(s.surjective());
    FSet b = a;
    const bool normalized = b.contains(0) && b.contains(1);
    while (s.coeffs.size() > 1) {
      auto [btilde, reduced] = reduce_rank(b, s);
      t.expect(reduced.surjective());
      if (normalized) t.expect(b.is_subset_of(btilde));
      b = std::move(btilde);
      s = std::move(reduced);
    }
    t.expect(s.coeffs.size() == 1);
  }
}

void suite_elekes(const PrimeField& f, Tally& t) {
  // All A in F^* with |A| <= 3: I >= |A|^3 and the exact pool sizes.
  std::vector<Elem> pool;
  for (Elem e = 1; e < f.q(); ++e) pool.push_back(e);
  std::vector<std::vector<Elem>> subs;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    subs.push_back({pool[i]});
    for (std::size_t j = i + 1; j < pool.size(); ++j) {
      subs.push_back({pool[i], pool[j]});
      for (std::size_t k = j + 1; k < pool.size(); ++k)
        subs.push_back({pool[i], pool[j], pool[k]});
    }
  }
  for (const auto& elems : subs) {
    const FSet a = FSet::from_elements(f, elems);
    const ElekesInstance inst = elekes_construct(a);
    const std::uint64_t n = a.size();
    t.expect(!inst.slope_degenerate);
    t.expect(inst.points.size() ==
             sumset(a, a).size() * prodset(a, a).size());
    t.expect(inst.lines.size() == n * n);
    t.expect(count_incidences(inst.points, inst.lines) >= n * n * n);
  }
}

void suite_easy_bound(const PrimeField& f, std::uint64_t seed, Tally& t) {
  Rng rng(seed);
  const auto pts = all_projective_points(f);
  const auto lines = all_projective_lines(f);
  for (int i = 0; i < 100; ++i) {
    std::vector<PPoint> p;
    std::vector<PLine> l;
    const std::size_t np = 1 + rng.below(std::min<std::uint64_t>(40, pts.size()));
    const std::size_t nl = 1 + rng.below(std::min<std::uint64_t>(40, lines.size()));
    for (std::size_t j = 0; j < np; ++j) p.push_back(pts[rng.below(pts.size())]);
    for (std::size_t j = 0; j < nl; ++j) l.push_back(lines[rng.below(lines.size())]);
    const EasyBoundReport rep = easy_bound_check(p, l);
    t.expect(rep.holds_primal);
    t.expect(rep.holds_dual);
  }
}

void suite_cs_count(const PrimeField& f, std::uint64_t seed, Tally& t) {
  (void)f;
  Rng rng(seed);
  for (int i = 0; i < 100; ++i) {
    const std::size_t nl = 1 + rng.below(20);
    const std::size_t nr = 1 + rng.below(20);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::uint32_t a = 0; a < nl; ++a)
      for (std::uint32_t b = 0; b < nr; ++b)
        if (rng.coin()) edges.emplace_back(a, b);
    t.expect(cs_count(Relation::from_edges(nl, nr, edges)).holds);
  }
}

void suite_popular(const PrimeField& f, std::uint64_t seed, Tally& t) {
  (void)f;
  Rng rng(seed);
  for (int i = 0; i < 100; ++i) {
    std::vector<std::int64_t> mu(1 + rng.below(50));
    std::int64_t total = 0;
    for (auto& m : mu) {
      m = static_cast<std::int64_t>(rng.below(21));
      total += m;
    }
    if (total == 0) {
      mu[0] = 1;
      total = 1;
    }
    const std::int64_t x = 1 + static_cast<std::int64_t>(
                                   rng.below(static_cast<std::uint64_t>(total)));
    const auto kept = popular_restrict(mu, x);
    std::int64_t retained = 0;
    for (const std::size_t idx : kept) retained += mu[idx];
    t.expect(2 * retained > x);
  }
}

void suite_bisector(const PrimeField& f, Tally& t) {
  std::vector<APoint2> plane;
  for (Elem x = 0; x < f.q(); ++x)
    for (Elem y = 0; y < f.q(); ++y) plane.push_back(APoint2{f.q(), x, y});
  for (const APoint2& p0 : plane)
    for (const APoint2& p1 : plane) {
      if (p0 == p1) continue;
      t.expect(dist(p0, p1) != 0);  // q = 3 mod 4 admits no isotropic pair
      const PLine l = bisector(p0, p1);
      for (const APoint2& p : plane) {
        const bool on = incident(affine_point(f, p.x, p.y), l);
        t.expect(on == (dist(p, p0) == dist(p, p1)));
      }
    }
}

void suite_grid_identity(const PrimeField& f, Tally& t) {
  for (std::uint32_t mask = 1; mask < (1u << f.q()); ++mask) {
    const FSet a = from_mask(f, mask);
    std::vector<APoint2> grid;
    a.for_each([&](Elem x) {
      a.for_each([&](Elem y) { grid.push_back(APoint2{f.q(), x, y}); });
    });
    const FSet lhs = distance_set(f, grid);
    const FSet d = diffset(a, a);
    FSet sq(f);
    d.for_each([&](Elem e) { sq.insert(f.mul(e, e)); });
    t.expect(lhs == sumset(sq, sq));
  }
}

ALine3 random_line(const PrimeField& f, Rng& rng,
                   const std::vector<Direction>& dirs) {
  const Direction d = dirs[rng.below(dirs.size())];
  const Vec3 p{static_cast<Elem>(rng.below(f.q())),
               static_cast<Elem>(rng.below(f.q())),
               static_cast<Elem>(rng.below(f.q()))};
  return make_aline(f, d.d, p);
}

bool pairwise_skew(const PrimeField& f, const ALine3& a, const ALine3& b,
                   const ALine3& c) {
  if (a == b || a == c || b == c) return false;
  if (a.dir == b.dir || a.dir == c.dir || b.dir == c.dir) return false;
  return !intersect(f, a, b) && !intersect(f, a, c) && !intersect(f, b, c);
}

void suite_kakeya_geometry(const PrimeField& f, std::uint64_t seed, Tally& t) {
  const auto dirs = enumerate_directions(f);
  t.expect(dirs.size() == std::size_t(f.q()) * f.q() + f.q() + 1);
  for (std::size_t i = 0; i + 1 < dirs.size(); ++i)
    t.expect(dirs[i] < dirs[i + 1]);

  if (f.q() <= 5) {
    const auto lines = all_lines(f);
    t.expect(lines.size() == std::size_t(f.q()) * f.q() * dirs.size());
    for (const ALine3& l : lines) {
      t.expect(make_aline(f, l.dir.d, l.base) == l);
      t.expect(line_contains(f, l, l.base));
    }
    for (std::size_t i = 0; i < lines.size(); ++i)
      for (std::size_t j = i + 1; j < lines.size(); ++j) {
        std::size_t shared = 0;
        for (const Vec3& p : line_points(f, lines[i]))
          if (line_contains(f, lines[j], p)) ++shared;
        t.expect(shared <= 1);
      }
  }

  if (f.q() == 5 || f.q() == 7) {
    Rng rng(seed);
    int found = 0;
    while (found < 20) {
      const ALine3 a = random_line(f, rng, dirs);
      const ALine3 b = random_line(f, rng, dirs);
      const ALine3 c = random_line(f, rng, dirs);
      if (!pairwise_skew(f, a, b, c)) continue;
      ++found;
      const auto fit = regulus_fit(f, a, b, c);
      t.expect(std::holds_alternative<Quadric>(fit));
      const Quadric quad = std::get<Quadric>(fit);
      for (const ALine3& l : lines_meeting_three(f, a, b, c))
        for (const Vec3& p : line_points(f, l))
          t.expect(quadric_eval(f, quad, p) == 0);
    }

    // Stem lines that meet a given line must map to plane incidences, and the
    // point map must be injective; exhaustive over the canonical frame.
    std::vector<ALine3> stems;
    for (Elem x = 1; x < f.q(); ++x)
      for (Elem y = 1; y < f.q(); ++y)
        stems.push_back(line_through(f, Vec3{x, 0, 0}, Vec3{0, y, 1}));
    std::vector<ALine3> ls;
    for (Elem a = 1; a < f.q(); ++a)
      for (Elem b = 1; b < f.q(); ++b)
        for (Elem z = 2; z < f.q(); ++z)
          ls.push_back(make_aline(f, Vec3{a, b, 1}, Vec3{0, 0, z}));
    for (const ALine3& stem : stems) {
      const auto xy = pi_map(f, stem);
      for (const ALine3& l : ls) {
        if (l == stem || !intersect(f, l, stem)) continue;
        t.expect(incident(affine_point(f, xy.first, xy.second), lambda_map(f, l)));
      }
    }
    for (std::size_t i = 0; i < stems.size(); ++i)
      for (std::size_t j = i + 1; j < stems.size(); ++j)
        t.expect(pi_map(f, stems[i]) != pi_map(f, stems[j]));
  }
}

void suite_bsg_recount(const PrimeField& f, std::uint64_t seed, Tally& t) {
  Rng rng(seed);
  for (int i = 0; i < 30; ++i) {
    const std::size_t n =
        2 + static_cast<std::size_t>(rng.below(std::min<std::uint32_t>(5, f.q() - 1)));
    const FSet a = rand_subset(f, n, rng.below(~0ull));
    const FSet b = rand_subset(f, n, rng.below(~0ull));
    EdgeSet g;
    a.for_each([&](Elem x) {
      b.for_each([&](Elem y) {
        if (rng.coin()) g.emplace_back(x, y);
      });
    });
    if (g.empty()) continue;
    FSet sums(f);
    for (const auto& [x, y] : g) sums.insert(f.add(x, y));
    const std::int64_t need =
        static_cast<std::int64_t>((n * n + g.size() - 1) / g.size()) *
        static_cast<std::int64_t>(n);
    const Rat k{std::max<std::int64_t>(static_cast<std::int64_t>(sums.size()), need),
                static_cast<std::int64_t>(n)};
    const BsgCertificate cert = bsg_extract(a, b, g, k);
    t.expect(!cert.a_sub.empty());
    t.expect(!cert.b_sub.empty());
    std::uint64_t lo = ~0ull;
    cert.a_sub.for_each([&](Elem x) {
      cert.b_sub.for_each([&](Elem y) {
        lo = std::min(lo, count_bsg_paths(x, y, a, b, g));
      });
    });
    t.expect(lo == cert.min_reps);
  }
}

}  // namespace

std::vector<SuiteResult> run_verify_suites(std::span<const std::uint32_t> qs,
                                           std::uint64_t seed) {
  std::vector<SuiteResult> out;
  std::uint64_t stream = 0;
  const auto run = [&](const char* name, std::uint32_t q, auto&& body) {
    Tally t;
    body(Rng::derive(seed, stream++), t);
    out.push_back(SuiteResult{name, q, t.checks, t.violations});
  };

  for (const std::uint32_t q : qs) {
    const PrimeField f(q);
    run("cauchy_davenport", q,
        [&](std::uint64_t s, Tally& t) { suite_cauchy_davenport(f, s, t); });
    run("ap_equality", q,
        [&](std::uint64_t, Tally& t) { suite_ap_equality(f, t); });
    run("boost_bound", q,
        [&](std::uint64_t s, Tally& t) { suite_boost_bound(f, s, t); });
    run("ruzsa_cover", q,
        [&](std::uint64_t s, Tally& t) { suite_ruzsa_cover(f, s, t); });
    run("pluennecke", q,
        [&](std::uint64_t s, Tally& t) { suite_pluennecke(f, s, t); });
    if (q >= 3)
      run("surjection", q,
          [&](std::uint64_t s, Tally& t) { suite_surjection(f, s, t); });
    run("elekes", q, [&](std::uint64_t, Tally& t) { suite_elekes(f, t); });
    run("easy_bound", q,
        [&](std::uint64_t s, Tally& t) { suite_easy_bound(f, s, t); });
    run("cs_count", q,
        [&](std::uint64_t s, Tally& t) { suite_cs_count(f, s, t); });
    run("popular", q,
        [&](std::uint64_t s, Tally& t) { suite_popular(f, s, t); });
    if (q % 4 == 3)
      run("bisector", q,
          [&](std::uint64_t, Tally& t) { suite_bisector(f, t); });
    if (q <= 13)
      run("grid_identity", q,
          [&](std::uint64_t, Tally& t) { suite_grid_identity(f, t); });
    if (q <= 31)
      run("kakeya_geometry", q,
          [&](std::uint64_t s, Tally& t) { suite_kakeya_geometry(f, s, t); });
    if (q >= 5)
      run("bsg_recount", q,
          [&](std::uint64_t s, Tally& t) { suite_bsg_recount(f, s, t); });
  }
  return out;
}

}  // namespace fflab
