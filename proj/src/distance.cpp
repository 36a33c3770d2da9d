#include "fflab/distance.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "fflab/errors.hpp"
#include "fflab/rng.hpp"

namespace fflab {
namespace {

Elem sq_norm(const PrimeField& f, Elem dx, Elem dy) {
  return f.add(f.mul(dx, dx), f.mul(dy, dy));
}

std::size_t delta_size(const PrimeField& f, std::span<const APoint2> pts,
                       bool exclude_zero) {
  FSet d(f);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i; j < pts.size(); ++j)
      d.insert(sq_norm(f, f.sub(pts[i].x, pts[j].x), f.sub(pts[i].y, pts[j].y)));
  std::size_t s = d.size();
  if (exclude_zero && d.contains(0)) --s;
  return s;
}

APoint2 point_at(const PrimeField& f, std::uint64_t idx) {
  return APoint2{f.q(), static_cast<Elem>(idx / f.q()),
                 static_cast<Elem>(idx % f.q())};
}

}  // namespace

APoint2 make_apoint(const PrimeField& f, Elem x, Elem y) {
  return APoint2{f.q(), f.reduce(x), f.reduce(y)};
}

Elem dist(const APoint2& p0, const APoint2& p1) {
  if (p0.q != p1.q) throw FieldMismatch("dist: mixed moduli");
  const PrimeField f(p0.q);
  return sq_norm(f, f.sub(p0.x, p1.x), f.sub(p0.y, p1.y));
}

FSet distance_set(const PrimeField& f, std::span<const APoint2> pts) {
  if (pts.empty()) throw EmptyInput("distance_set: no points");
  for (const auto& p : pts)
    if (p.q != f.q()) throw FieldMismatch("distance_set: mixed moduli");
  FSet d(f);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i; j < pts.size(); ++j)
      d.insert(sq_norm(f, f.sub(pts[i].x, pts[j].x), f.sub(pts[i].y, pts[j].y)));
  return d;
}

bool nonsquare_gate(const PrimeField& f) {
  if (f.q() % 4 == 3) return true;
  // q = 2 or q = 1 mod 4: some i satisfies i^2 = -1. The line {(x, ix)} then
  // has every pairwise distance (1+i^2)dx^2 = 0; confirm before reporting the
  // gate closed.
  const Elem m1 = f.neg(1);
  Elem wit = 0;
  bool found = false;
  for (Elem i = 0; i < f.q(); ++i)
    if (f.mul(i, i) == m1) {
      wit = i;
      found = true;
      break;
    }
  if (!found) throw Error("nonsquare_gate: no root of -1 though q != 3 mod 4");
  std::vector<APoint2> line;
  line.reserve(f.q());
  for (Elem x = 0; x < f.q(); ++x)
    line.push_back(APoint2{f.q(), x, f.mul(wit, x)});
  const FSet d = distance_set(f, line);
  if (d.size() != 1 || !d.contains(0))
    throw Error("nonsquare_gate: isotropic line check failed");
  return false;
}

PLine bisector(const APoint2& p0, const APoint2& p1) {
  if (p0.q != p1.q) throw FieldMismatch("bisector: mixed moduli");
  if (p0.q == 2) throw DegenerateField("bisector: q = 2 halves nothing");
  if (p0 == p1) throw EqualPoints("bisector: coincident points");
  const PrimeField f(p0.q);
  const Elem da = f.sub(p1.x, p0.x);
  const Elem db = f.sub(p1.y, p0.y);
  const Elem n1 = f.add(f.mul(p1.x, p1.x), f.mul(p1.y, p1.y));
  const Elem n0 = f.add(f.mul(p0.x, p0.x), f.mul(p0.y, p0.y));
  return make_pline(f, f.mul(2, da), f.mul(2, db), f.neg(f.sub(n1, n0)));
}

DistanceReport distance_min_search(const PrimeField& f, std::uint32_t n,
                                   SearchMode mode, std::uint32_t trials,
                                   std::uint64_t seed, bool exclude_zero) {
  if (!nonsquare_gate(f))
    throw DegenerateField("distance_min_search: -1 is a square mod q");
  const std::uint64_t pool = static_cast<std::uint64_t>(f.q()) * f.q();
  if (n < 2 || n > pool) throw SizeOutOfRange("distance_min_search: bad n");

  DistanceReport rep;
  rep.q = f.q();
  rep.n = n;
  rep.mode = mode;
  rep.trials = trials;
  rep.seed = seed;
  rep.exclude_zero = exclude_zero;
  rep.min_distances = static_cast<std::size_t>(-1);

  const auto eval = [&](const std::vector<APoint2>& pts) {
    return delta_size(f, pts, exclude_zero);
  };

  if (mode == SearchMode::Exhaustive) {
    if (choose_capped(pool, n, 100000000ull) > 100000000ull)
      throw BudgetExceeded("distance_min_search: C(q^2, n) over 1e8");
    std::vector<std::uint64_t> idx(n);
    for (std::uint32_t i = 0; i < n; ++i) idx[i] = i;
    std::vector<APoint2> pts(n);
    for (;;) {
      for (std::uint32_t i = 0; i < n; ++i) pts[i] = point_at(f, idx[i]);
      const std::size_t s = eval(pts);
      if (s < rep.min_distances) {
        rep.min_distances = s;
        rep.witness = pts;
      }
      // next lexicographic combination
      int i = static_cast<int>(n) - 1;
      while (i >= 0 && idx[i] == pool - n + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (std::uint32_t k = i + 1; k < n; ++k) idx[k] = idx[k - 1] + 1;
    }
    return rep;
  }

  if (trials == 0) throw SizeOutOfRange("distance_min_search: zero trials");
  for (std::uint32_t t = 0; t < trials; ++t) {
    Rng rng(Rng::derive(seed, t));
    // Floyd sample of n point indices from [0, pool)
    std::vector<std::uint64_t> cur;
    for (std::uint64_t j = pool - n; j < pool; ++j) {
      std::uint64_t v = rng.below(j + 1);
      if (std::find(cur.begin(), cur.end(), v) != cur.end()) v = j;
      cur.push_back(v);
    }
    std::sort(cur.begin(), cur.end());
    std::vector<APoint2> pts(n);
    for (std::uint32_t i = 0; i < n; ++i) pts[i] = point_at(f, cur[i]);
    std::size_t best = eval(pts);
    std::uint32_t stall = 0;
    while (stall < 200) {
      const std::uint32_t drop = static_cast<std::uint32_t>(rng.below(n));
      std::uint64_t add = rng.below(pool);
      if (std::find(cur.begin(), cur.end(), add) != cur.end()) {
        ++stall;
        continue;
      }
      const std::uint64_t saved = cur[drop];
      cur[drop] = add;
      for (std::uint32_t i = 0; i < n; ++i) pts[i] = point_at(f, cur[i]);
      const std::size_t s = eval(pts);
      if (s < best) {
        best = s;
        stall = 0;
      } else {
        cur[drop] = saved;
        ++stall;
      }
    }
    for (std::uint32_t i = 0; i < n; ++i) pts[i] = point_at(f, cur[i]);
    if (best < rep.min_distances) {
      rep.min_distances = best;
      rep.witness = pts;
      std::sort(rep.witness.begin(), rep.witness.end());
    }
  }
  return rep;
}

void write_points(std::ostream& os, std::span<const APoint2> pts) {
  for (const auto& p : pts) os << p.x << ' ' << p.y << '\n';
}

std::vector<APoint2> read_points(std::istream& is, const PrimeField& f) {
  std::vector<APoint2> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto h = line.find('#');
    if (h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::uint64_t x, y;
    if (!(ls >> x)) continue;  // blank or comment-only
    if (!(ls >> y))
      throw ParseError("points line " + std::to_string(lineno) +
                       ": expected two coordinates");
    std::uint64_t extra;
    if (ls >> extra)
      throw ParseError("points line " + std::to_string(lineno) +
                       ": trailing token");
    out.push_back(APoint2{f.q(), f.reduce(static_cast<Elem>(x % f.q())),
                          f.reduce(static_cast<Elem>(y % f.q()))});
  }
  return out;
}

}  // namespace fflab
