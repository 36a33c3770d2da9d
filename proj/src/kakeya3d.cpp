#include "fflab/kakeya3d.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "fflab/errors.hpp"
#include "fflab/rng.hpp"

namespace fflab {
namespace {

void ensure_line(const PrimeField& f, const ALine3& l, const char* where) {
  if (l.dir.q != f.q()) throw FieldMismatch(std::string(where) + ": mixed moduli");
}

Vec3 vadd(const PrimeField& f, const Vec3& a, const Vec3& b) {
  return {f.add(a[0], b[0]), f.add(a[1], b[1]), f.add(a[2], b[2])};
}

Vec3 vsub(const PrimeField& f, const Vec3& a, const Vec3& b) {
  return {f.sub(a[0], b[0]), f.sub(a[1], b[1]), f.sub(a[2], b[2])};
}

Vec3 vscale(const PrimeField& f, Elem s, const Vec3& a) {
  return {f.mul(s, a[0]), f.mul(s, a[1]), f.mul(s, a[2])};
}

Elem vdot(const PrimeField& f, const Vec3& a, const Vec3& b) {
  return f.add(f.add(f.mul(a[0], b[0]), f.mul(a[1], b[1])), f.mul(a[2], b[2]));
}

Vec3 vcross(const PrimeField& f, const Vec3& a, const Vec3& b) {
  return {f.sub(f.mul(a[1], b[2]), f.mul(a[2], b[1])),
          f.sub(f.mul(a[2], b[0]), f.mul(a[0], b[2])),
          f.sub(f.mul(a[0], b[1]), f.mul(a[1], b[0]))};
}

int leading_index(const Vec3& d) {
  for (int i = 0; i < 3; ++i)
    if (d[i] != 0) return i;
  return -1;
}

Vec3 point_from_index(const PrimeField& f, std::uint64_t idx) {
  const std::uint32_t q = f.q();
  return {static_cast<Elem>(idx / (std::uint64_t(q) * q)),
          static_cast<Elem>((idx / q) % q), static_cast<Elem>(idx % q)};
}

std::array<Elem, 10> monomials(const PrimeField& f, const Vec3& p) {
  const Elem x = p[0], y = p[1], z = p[2];
  return {1,
          x,
          y,
          z,
          f.mul(x, x),
          f.mul(y, y),
          f.mul(z, z),
          f.mul(x, y),
          f.mul(x, z),
          f.mul(y, z)};
}

}  // namespace

Direction make_direction(const PrimeField& f, const Vec3& raw) {
  Vec3 d{f.reduce(raw[0]), f.reduce(raw[1]), f.reduce(raw[2])};
  const int i = leading_index(d);
  if (i < 0) throw ZeroDilation("make_direction: zero direction");
  return Direction{f.q(), vscale(f, f.inv(d[i]), d)};
}

std::vector<Direction> enumerate_directions(const PrimeField& f) {
  std::vector<Direction> out;
  out.reserve(std::size_t(f.q()) * f.q() + f.q() + 1);
  out.push_back(Direction{f.q(), {0, 0, 1}});
  for (Elem b = 0; b < f.q(); ++b) out.push_back(Direction{f.q(), {0, 1, b}});
  for (Elem a = 0; a < f.q(); ++a)
    for (Elem b = 0; b < f.q(); ++b)
      out.push_back(Direction{f.q(), {1, a, b}});
  return out;
}

ALine3 make_aline(const PrimeField& f, const Vec3& raw_dir, const Vec3& through) {
  const Direction dir = make_direction(f, raw_dir);
  const Vec3 p{f.reduce(through[0]), f.reduce(through[1]), f.reduce(through[2])};
  const int i = leading_index(dir.d);
  // dir.d[i] = 1, so subtracting p[i]*dir zeroes the leading coordinate and
  // lands on the lex-least point of the line.
  return ALine3{dir, vsub(f, p, vscale(f, p[i], dir.d))};
}

ALine3 line_through(const PrimeField& f, const Vec3& p, const Vec3& r) {
  const Vec3 d = vsub(f, r, p);
  if (d == Vec3{0, 0, 0}) throw EqualPoints("line_through: coincident points");
  return make_aline(f, d, p);
}

std::vector<Vec3> line_points(const PrimeField& f, const ALine3& l) {
  ensure_line(f, l, "line_points");
  std::vector<Vec3> out;
  out.reserve(f.q());
  for (Elem t = 0; t < f.q(); ++t)
    out.push_back(vadd(f, l.base, vscale(f, t, l.dir.d)));
  return out;
}

bool line_contains(const PrimeField& f, const ALine3& l, const Vec3& p) {
  const Vec3 v = vsub(f, p, l.base);
  const int i = leading_index(l.dir.d);
  return v == vscale(f, v[i], l.dir.d);
}

std::optional<Vec3> intersect(const PrimeField& f, const ALine3& a,
                              const ALine3& b) {
  ensure_line(f, a, "intersect");
  ensure_line(f, b, "intersect");
  if (a == b) throw Error("intersect: identical lines");
  for (Elem t = 0; t < f.q(); ++t) {
    const Vec3 p = vadd(f, a.base, vscale(f, t, a.dir.d));
    if (line_contains(f, b, p)) return p;  // distinct lines share at most one
  }
  return std::nullopt;
}

Plane3 make_plane(const PrimeField& f, const Vec3& raw_n, Elem c) {
  Vec3 n{f.reduce(raw_n[0]), f.reduce(raw_n[1]), f.reduce(raw_n[2])};
  const int i = leading_index(n);
  if (i < 0) throw ZeroDilation("make_plane: zero normal");
  const Elem s = f.inv(n[i]);
  return Plane3{f.q(), vscale(f, s, n), f.mul(s, f.reduce(c))};
}

bool plane_contains(const PrimeField& f, const Plane3& pl, const Vec3& p) {
  return vdot(f, pl.n, p) == pl.c;
}

bool plane_contains_line(const PrimeField& f, const Plane3& pl, const ALine3& l) {
  return plane_contains(f, pl, l.base) && vdot(f, pl.n, l.dir.d) == 0;
}

Grid3::Grid3(std::uint32_t q) : q_(q) {
  if (q == 0 || q > 256) throw SizeOutOfRange("Grid3: q out of range");
  const std::uint64_t bits = std::uint64_t(q) * q * q;
  w_.assign((bits + 63) / 64, 0);
}

std::uint64_t Grid3::index(const Vec3& p) const {
  return (std::uint64_t(p[0]) * q_ + p[1]) * q_ + p[2];
}

bool Grid3::test(const Vec3& p) const {
  const std::uint64_t i = index(p);
  return (w_[i >> 6] >> (i & 63)) & 1;
}

void Grid3::insert(const Vec3& p) {
  const std::uint64_t i = index(p);
  const std::uint64_t bit = 1ull << (i & 63);
  if (!(w_[i >> 6] & bit)) {
    w_[i >> 6] |= bit;
    ++count_;
  }
}

Grid3 besicovitch_build(const PrimeField& f,
                        const std::map<Direction, Vec3>& assignment) {
  const std::vector<Direction> dirs = enumerate_directions(f);
  std::vector<ALine3> lines;
  lines.reserve(dirs.size());
  for (const Direction& d : dirs) {
    const auto it = assignment.find(d);
    if (it == assignment.end())
      throw MissingDirection("besicovitch_build: unassigned direction");
    lines.push_back(make_aline(f, d.d, it->second));
  }
  Grid3 g(f.q());
  for (const ALine3& l : lines)
    for (const Vec3& p : line_points(f, l)) g.insert(p);
  for (const ALine3& l : lines)
    for (const Vec3& p : line_points(f, l))
      if (!g.test(p)) throw Error("besicovitch_build: containment lost");
  return g;
}

WolffReport wolff_axiom_check(const PrimeField& f,
                              std::span<const ALine3> lines) {
  std::vector<ALine3> ls(lines.begin(), lines.end());
  for (const ALine3& l : ls) ensure_line(f, l, "wolff_axiom_check");
  std::sort(ls.begin(), ls.end());
  ls.erase(std::unique(ls.begin(), ls.end()), ls.end());

  const std::vector<Direction> normals = enumerate_directions(f);
  // (normal index, offset) -> contained-line count; each line lies in exactly
  // q+1 planes, one per normal class orthogonal to its direction.
  std::map<std::pair<std::size_t, Elem>, std::size_t> buckets;
  for (const ALine3& l : ls)
    for (std::size_t i = 0; i < normals.size(); ++i)
      if (vdot(f, normals[i].d, l.dir.d) == 0)
        ++buckets[{i, vdot(f, normals[i].d, l.base)}];

  WolffReport rep;
  rep.argmax = Plane3{f.q(), normals[0].d, 0};
  for (const auto& [key, count] : buckets)
    if (count > rep.max_per_plane) {
      rep.max_per_plane = count;
      rep.argmax = Plane3{f.q(), normals[key.first].d, key.second};
    }
  return rep;
}

std::vector<ALine3> all_lines(const PrimeField& f) {
  std::vector<ALine3> out;
  out.reserve(std::size_t(f.q()) * f.q() * (std::size_t(f.q()) * f.q() + f.q() + 1));
  for (const Direction& d : enumerate_directions(f)) {
    const int lead = leading_index(d.d);
    for (Elem u = 0; u < f.q(); ++u)
      for (Elem v = 0; v < f.q(); ++v) {
        Vec3 base{};
        int slot = 0;
        for (int i = 0; i < 3; ++i)
          if (i != lead) base[i] = (slot++ == 0) ? u : v;
        out.push_back(ALine3{d, base});
      }
  }
  return out;
}

std::vector<ALine3> lines_meeting_three(
    const PrimeField& f, const ALine3& l1, const ALine3& l2, const ALine3& l3,
    std::optional<std::span<const ALine3>> universe) {
  const ALine3* gen[3] = {&l1, &l2, &l3};
  for (int i = 0; i < 3; ++i) ensure_line(f, *gen[i], "lines_meeting_three");
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (*gen[i] == *gen[j] || intersect(f, *gen[i], *gen[j]))
        throw NotDisjoint("lines_meeting_three: generators intersect");

  std::vector<ALine3> out;
  if (universe) {
    for (const ALine3& u : *universe) {
      if (u == l1 || u == l2 || u == l3) continue;
      if (intersect(f, u, l1) && intersect(f, u, l2) && intersect(f, u, l3))
        out.push_back(u);
    }
  } else {
    // Every transversal passes through one point of l1 and one of l2.
    for (const Vec3& p1 : line_points(f, l1))
      for (const Vec3& p2 : line_points(f, l2)) {
        const ALine3 cand = line_through(f, p1, p2);
        if (intersect(f, cand, l3)) out.push_back(cand);
      }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::variant<Quadric, Plane3> regulus_fit(const PrimeField& f, const ALine3& l1,
                                          const ALine3& l2, const ALine3& l3) {
  const ALine3* gen[3] = {&l1, &l2, &l3};
  for (int i = 0; i < 3; ++i) ensure_line(f, *gen[i], "regulus_fit");
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (*gen[i] == *gen[j] || intersect(f, *gen[i], *gen[j]))
        throw NotSkew("regulus_fit: generators intersect");

  // A parallel pair forces every transversal into the pair's common plane.
  for (const auto& [i, j] : {std::pair{0, 1}, {0, 2}, {1, 2}})
    if (gen[i]->dir == gen[j]->dir) {
      const Vec3 w = vsub(f, gen[j]->base, gen[i]->base);
      const Vec3 n = vcross(f, gen[i]->dir.d, w);
      const Plane3 pl = make_plane(f, n, vdot(f, n, gen[i]->base));
      if (!plane_contains_line(f, pl, *gen[i]) ||
          !plane_contains_line(f, pl, *gen[j]))
        throw Error("regulus_fit: parallel-pair plane failed");
      return pl;
    }

  ModMat m(f, 3 * std::size_t(f.q()), 10);
  std::size_t r = 0;
  for (int i = 0; i < 3; ++i)
    for (const Vec3& p : line_points(f, *gen[i])) {
      const auto row = monomials(f, p);
      for (std::size_t c = 0; c < 10; ++c) m.at(r, c) = row[c];
      ++r;
    }
  const auto basis = m.nullspace();
  if (basis.empty()) throw NoNonzeroSolution("regulus_fit: empty kernel");

  // Lex-least nonzero kernel vector, enumerated over the whole span.
  std::uint64_t combos = 1;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    combos *= f.q();
    if (combos > 1000000) throw BudgetExceeded("regulus_fit: kernel too large");
  }
  std::array<Elem, 10> best{};
  bool have = false;
  std::vector<Elem> coef(basis.size(), 0);
  for (std::uint64_t n = 1; n < combos; ++n) {
    std::uint64_t v = n;
    for (auto& c : coef) {
      c = static_cast<Elem>(v % f.q());
      v /= f.q();
    }
    std::array<Elem, 10> cand{};
    for (std::size_t b = 0; b < basis.size(); ++b)
      for (std::size_t c = 0; c < 10; ++c)
        cand[c] = f.add(cand[c], f.mul(coef[b], basis[b][c]));
    if (cand == std::array<Elem, 10>{}) continue;
    if (!have || cand < best) {
      best = cand;
      have = true;
    }
  }
  if (!have) throw NoNonzeroSolution("regulus_fit: kernel spans zero only");
  return Quadric{f.q(), best};
}

Elem quadric_eval(const PrimeField& f, const Quadric& quad, const Vec3& p) {
  if (quad.q != f.q()) throw FieldMismatch("quadric_eval: mixed moduli");
  const auto mono = monomials(f, p);
  Elem acc = 0;
  for (std::size_t i = 0; i < 10; ++i) acc = f.add(acc, f.mul(quad.c[i], mono[i]));
  return acc;
}

std::vector<ALine3> hairbrush(const PrimeField& f, const ALine3& stem,
                              std::span<const ALine3> lines,
                              const std::pair<ALine3, ALine3>& excluded) {
  ensure_line(f, stem, "hairbrush");
  Vec3 cut[2];
  const ALine3* ex[2] = {&excluded.first, &excluded.second};
  for (int i = 0; i < 2; ++i) {
    ensure_line(f, *ex[i], "hairbrush");
    if (*ex[i] == stem)
      throw ExcludedNotMeetingStem("hairbrush: excluded line equals stem");
    const auto p = intersect(f, *ex[i], stem);
    if (!p) throw ExcludedNotMeetingStem("hairbrush: excluded line misses stem");
    cut[i] = *p;
  }
  std::vector<ALine3> out;
  for (const ALine3& l : lines) {
    if (l == stem) continue;
    const auto p = intersect(f, l, stem);
    if (p && *p != cut[0] && *p != cut[1]) out.push_back(l);
  }
  return out;
}

Vec3 FrameMap::apply(const Vec3& p) const {
  const Vec3 mp = m.apply(p);
  return {m.f.add(mp[0], t[0]), m.f.add(mp[1], t[1]), m.f.add(mp[2], t[2])};
}

ALine3 FrameMap::apply_line(const ALine3& l) const {
  const PrimeField& f = m.f;
  const Vec3 p = apply(l.base);
  const Vec3 r = apply(vadd(f, l.base, l.dir.d));
  return line_through(f, p, r);
}

FrameMap normalize_frame(const PrimeField& f, const ALine3& l0,
                         const ALine3& lstar, const ALine3& l1) {
  ensure_line(f, l0, "normalize_frame");
  ensure_line(f, lstar, "normalize_frame");
  ensure_line(f, l1, "normalize_frame");
  if (l0 == l1 || l0.dir == l1.dir || intersect(f, l0, l1))
    throw BadConfiguration("normalize_frame: l0, l1 not skew");
  if (lstar == l0 || lstar == l1)
    throw BadConfiguration("normalize_frame: stem equals an axis line");
  const auto p0 = intersect(f, lstar, l0);
  const auto p1 = intersect(f, lstar, l1);
  if (!p0 || !p1) throw BadConfiguration("normalize_frame: stem misses a line");

  // M maps d0 -> e1, d1 -> e2, p1-p0 -> e3; skewness makes the columns
  // independent.
  Mat3 b{f, {}};
  const Vec3 span = vsub(f, *p1, *p0);
  for (int r = 0; r < 3; ++r) {
    b.m[r][0] = l0.dir.d[r];
    b.m[r][1] = l1.dir.d[r];
    b.m[r][2] = span[r];
  }
  Mat3 minv{f, {}};
  try {
    minv = b.inverse();
  } catch (const SingularMatrix&) {
    throw BadConfiguration("normalize_frame: degenerate triple");
  }
  const Vec3 mp0 = minv.apply(*p0);
  FrameMap fm{minv, {f.neg(mp0[0]), f.neg(mp0[1]), f.neg(mp0[2])}};

  const ALine3 xaxis = make_aline(f, {1, 0, 0}, {0, 0, 0});
  const ALine3 zaxis = make_aline(f, {0, 0, 1}, {0, 0, 0});
  const ALine3 ycut = make_aline(f, {0, 1, 0}, {0, 0, 1});
  if (fm.apply_line(l0) != xaxis || fm.apply_line(lstar) != zaxis ||
      fm.apply_line(l1) != ycut)
    throw BadConfiguration("normalize_frame: image mismatch");
  return fm;
}

std::pair<Elem, Elem> pi_map(const PrimeField& f, const ALine3& lstar2) {
  ensure_line(f, lstar2, "pi_map");
  std::vector<Vec3> on_x, on_cut;
  for (const Vec3& p : line_points(f, lstar2)) {
    if (p[1] == 0 && p[2] == 0) on_x.push_back(p);
    if (p[0] == 0 && p[2] == 1) on_cut.push_back(p);
  }
  if (on_x.size() != 1 || on_x[0][0] == 0)
    throw DegenerateIntersection("pi_map: bad x-axis crossing");
  if (on_cut.size() != 1 || on_cut[0][1] == 0)
    throw DegenerateIntersection("pi_map: bad crossing of {(0,y,1)}");
  return {f.inv(on_x[0][0]), f.inv(on_cut[0][1])};
}

PLine lambda_map(const PrimeField& f, const ALine3& l) {
  ensure_line(f, l, "lambda_map");
  // l = {(a(t-z), b(t-z), t)} has direction (a, b, 1), canonically
  // (1, b/a, 1/a), and canonical base (0, 0, z).
  const Vec3& d = l.dir.d;
  if (d[0] != 1 || d[1] == 0 || d[2] == 0)
    throw DegenerateLine("lambda_map: direction degenerate");
  if (l.base[1] != 0) throw DegenerateLine("lambda_map: line misses the z-axis");
  const Elem z = l.base[2];
  if (z == 0 || z == 1) throw DegenerateLine("lambda_map: z-axis cut at 0 or 1");
  const Elem a = f.inv(d[2]);
  const Elem bb = f.mul(d[1], a);
  return make_pline(f, f.mul(a, z), f.mul(bb, f.sub(z, 1)), 1);
}

KakeyaReport kakeya_min_search(const PrimeField& f, std::uint32_t trials,
                               std::uint64_t seed) {
  if (f.q() > 13) throw BudgetExceeded("kakeya_min_search: q over desk scale");
  if (trials == 0) throw SizeOutOfRange("kakeya_min_search: zero trials");
  const std::vector<Direction> dirs = enumerate_directions(f);
  const std::uint64_t cells = std::uint64_t(f.q()) * f.q() * f.q();

  const auto eval = [&](const std::vector<Vec3>& bases) {
    Grid3 g(f.q());
    for (std::size_t i = 0; i < dirs.size(); ++i) {
      const ALine3 l = make_aline(f, dirs[i].d, bases[i]);
      for (const Vec3& p : line_points(f, l)) g.insert(p);
    }
    return g.size();
  };

  KakeyaReport rep;
  rep.q = f.q();
  rep.trials = trials;
  rep.seed = seed;
  rep.reference = std::pow(double(f.q()), 2.5);
  rep.min_size = static_cast<std::size_t>(-1);

  for (std::uint32_t t = 0; t < trials; ++t) {
    Rng rng(Rng::derive(seed, t));
    std::vector<Vec3> bases(dirs.size(), Vec3{0, 0, 0});
    if (t != 0)
      for (auto& b : bases) b = point_from_index(f, rng.below(cells));
    std::size_t cur = eval(bases);
    std::uint32_t stall = 0;
    while (stall < 200) {
      const std::size_t i = static_cast<std::size_t>(rng.below(dirs.size()));
      const Vec3 saved = bases[i];
      bases[i] = point_from_index(f, rng.below(cells));
      const std::size_t s = eval(bases);
      if (s < cur) {
        cur = s;
        stall = 0;
      } else {
        bases[i] = saved;
        ++stall;
      }
    }
    if (cur < rep.min_size) {
      rep.min_size = cur;
      rep.best.clear();
      for (std::size_t i = 0; i < dirs.size(); ++i)
        rep.best.push_back(make_aline(f, dirs[i].d, bases[i]));
    }
  }
  return rep;
}

void write_lines(std::ostream& os, std::span<const ALine3> lines) {
  for (const ALine3& l : lines)
    os << l.dir.d[0] << ' ' << l.dir.d[1] << ' ' << l.dir.d[2] << ' '
       << l.base[0] << ' ' << l.base[1] << ' ' << l.base[2] << '\n';
}

namespace {

bool parse_six(const std::string& line, std::uint64_t v[6], std::size_t lineno,
               const char* what) {
  std::string body = line;
  const auto h = body.find('#');
  if (h != std::string::npos) body.erase(h);
  std::istringstream ls(body);
  if (!(ls >> v[0])) return false;  // blank
  for (int i = 1; i < 6; ++i)
    if (!(ls >> v[i]))
      throw ParseError(std::string(what) + " line " + std::to_string(lineno) +
                       ": expected six integers");
  std::uint64_t extra;
  if (ls >> extra)
    throw ParseError(std::string(what) + " line " + std::to_string(lineno) +
                     ": trailing token");
  return true;
}

}  // namespace

std::vector<ALine3> read_lines(std::istream& is, const PrimeField& f) {
  std::vector<ALine3> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::uint64_t v[6];
    if (!parse_six(line, v, lineno, "lines")) continue;
    const Vec3 d{static_cast<Elem>(v[0] % f.q()), static_cast<Elem>(v[1] % f.q()),
                 static_cast<Elem>(v[2] % f.q())};
    const Vec3 b{static_cast<Elem>(v[3] % f.q()), static_cast<Elem>(v[4] % f.q()),
                 static_cast<Elem>(v[5] % f.q())};
    try {
      out.push_back(make_aline(f, d, b));
    } catch (const ZeroDilation&) {
      throw ParseError("lines line " + std::to_string(lineno) +
                       ": zero direction");
    }
  }
  return out;
}

void write_assignment(std::ostream& os, const PrimeField& f,
                      const std::map<Direction, Vec3>& assignment) {
  (void)f;
  for (const auto& [d, b] : assignment)
    os << d.d[0] << ' ' << d.d[1] << ' ' << d.d[2] << ' ' << b[0] << ' ' << b[1]
       << ' ' << b[2] << '\n';
}

std::map<Direction, Vec3> read_assignment(std::istream& is,
                                          const PrimeField& f) {
  std::map<Direction, Vec3> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::uint64_t v[6];
    if (!parse_six(line, v, lineno, "assignment")) continue;
    Direction d{};
    try {
      d = make_direction(f, Vec3{static_cast<Elem>(v[0] % f.q()),
                                 static_cast<Elem>(v[1] % f.q()),
                                 static_cast<Elem>(v[2] % f.q())});
    } catch (const ZeroDilation&) {
      throw ParseError("assignment line " + std::to_string(lineno) +
                       ": zero direction");
    }
    const Vec3 b{static_cast<Elem>(v[3] % f.q()), static_cast<Elem>(v[4] % f.q()),
                 static_cast<Elem>(v[5] % f.q())};
    if (!out.emplace(d, b).second)
      throw ParseError("assignment line " + std::to_string(lineno) +
                       ": duplicate direction");
  }
  return out;
}

}  // namespace fflab
