#include "fflab/incidence2d.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "fflab/rng.hpp"
#include "fflab/setops.hpp"

namespace fflab {

namespace {

// Scale a triple so its first nonzero coordinate becomes 1.
std::array<Elem, 3> normalize_triple(const PrimeField& f, Elem a, Elem b, Elem c,
                                     const char* what) {
  a %= f.q();
  b %= f.q();
  c %= f.q();
  Elem lead = a != 0 ? a : (b != 0 ? b : c);
  if (lead == 0) throw SizeOutOfRange(std::string(what) + ": zero triple");
  const Elem s = f.inv(lead);
  return {f.mul(a, s), f.mul(b, s), f.mul(c, s)};
}

}  // namespace

PPoint make_ppoint(const PrimeField& f, Elem x, Elem y, Elem z) {
  auto t = normalize_triple(f, x, y, z, "PPoint");
  return PPoint{f.q(), t[0], t[1], t[2]};
}

PLine make_pline(const PrimeField& f, Elem a, Elem b, Elem c) {
  auto t = normalize_triple(f, a, b, c, "PLine");
  return PLine{f.q(), t[0], t[1], t[2]};
}

PPoint affine_point(const PrimeField& f, Elem x, Elem y) {
  return make_ppoint(f, x, y, 1);
}

PLine affine_line(const PrimeField& f, Elem a, Elem b, Elem c) {
  return make_pline(f, a, b, c);
}

PLine line_at_infinity(const PrimeField& f) { return make_pline(f, 0, 0, 1); }

bool incident(const PPoint& p, const PLine& l) {
  if (p.q != l.q) throw FieldMismatch("point and line over different fields");
  const std::uint64_t q = p.q;
  const std::uint64_t s = (std::uint64_t(l.a) * p.x + std::uint64_t(l.b) * p.y +
                           std::uint64_t(l.c) * p.z) %
                          q;
  return s == 0;
}

std::vector<PPoint> all_affine_points(const PrimeField& f) {
  std::vector<PPoint> out;
  out.reserve(std::size_t(f.q()) * f.q());
  for (Elem x = 0; x < f.q(); ++x)
    for (Elem y = 0; y < f.q(); ++y) out.push_back(affine_point(f, x, y));
  return out;
}

std::vector<PLine> all_affine_lines(const PrimeField& f) {
  std::vector<PLine> out;
  out.reserve(std::size_t(f.q()) * f.q() + f.q());
  // y = m x + t  ->  m x - y + t = 0
  for (Elem m = 0; m < f.q(); ++m)
    for (Elem t = 0; t < f.q(); ++t)
      out.push_back(make_pline(f, m, f.q() - 1, t));
  // x = a  ->  x - a = 0
  for (Elem a = 0; a < f.q(); ++a)
    out.push_back(make_pline(f, 1, 0, f.neg(a)));
  return out;
}

std::vector<PPoint> all_projective_points(const PrimeField& f) {
  std::vector<PPoint> out;
  out.reserve(std::size_t(f.q()) * f.q() + f.q() + 1);
  out.push_back(make_ppoint(f, 0, 0, 1));
  for (Elem b = 0; b < f.q(); ++b) out.push_back(make_ppoint(f, 0, 1, b));
  for (Elem a = 0; a < f.q(); ++a)
    for (Elem b = 0; b < f.q(); ++b) out.push_back(make_ppoint(f, 1, a, b));
  return out;
}

std::vector<PLine> all_projective_lines(const PrimeField& f) {
  std::vector<PLine> out;
  out.reserve(std::size_t(f.q()) * f.q() + f.q() + 1);
  out.push_back(make_pline(f, 0, 0, 1));
  for (Elem b = 0; b < f.q(); ++b) out.push_back(make_pline(f, 0, 1, b));
  for (Elem a = 0; a < f.q(); ++a)
    for (Elem b = 0; b < f.q(); ++b) out.push_back(make_pline(f, 1, a, b));
  return out;
}

std::vector<PPoint> points_on_line(const PrimeField& f, const PLine& l) {
  // Kernel of the 1x3 row (a b c): a projective line, q+1 points.
  ModMat m(f, 1, 3);
  m.at(0, 0) = l.a;
  m.at(0, 1) = l.b;
  m.at(0, 2) = l.c;
  const auto basis = m.nullspace();
  std::vector<PPoint> out;
  out.reserve(f.q() + 1);
  const auto& e1 = basis[0];
  const auto& e2 = basis[1];
  out.push_back(make_ppoint(f, e1[0], e1[1], e1[2]));
  for (Elem t = 0; t < f.q(); ++t) {
    out.push_back(make_ppoint(f, f.add(e2[0], f.mul(t, e1[0])),
                              f.add(e2[1], f.mul(t, e1[1])),
                              f.add(e2[2], f.mul(t, e1[2]))));
  }
  return out;
}

std::vector<PLine> lines_through_point(const PrimeField& f, const PPoint& p) {
  ModMat m(f, 1, 3);
  m.at(0, 0) = p.x;
  m.at(0, 1) = p.y;
  m.at(0, 2) = p.z;
  const auto basis = m.nullspace();
  std::vector<PLine> out;
  out.reserve(f.q() + 1);
  const auto& e1 = basis[0];
  const auto& e2 = basis[1];
  out.push_back(make_pline(f, e1[0], e1[1], e1[2]));
  for (Elem t = 0; t < f.q(); ++t) {
    out.push_back(make_pline(f, f.add(e2[0], f.mul(t, e1[0])),
                             f.add(e2[1], f.mul(t, e1[1])),
                             f.add(e2[2], f.mul(t, e1[2]))));
  }
  return out;
}

namespace {

template <class T>
std::vector<T> dedup(std::span<const T> xs) {
  std::vector<T> v(xs.begin(), xs.end());
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::uint32_t common_q(std::span<const PPoint> pts, std::span<const PLine> lines) {
  std::uint32_t q = 0;
  for (const auto& p : pts) {
    if (q == 0) q = p.q;
    if (p.q != q) throw FieldMismatch("mixed moduli in point set");
  }
  for (const auto& l : lines) {
    if (q == 0) q = l.q;
    if (l.q != q) throw FieldMismatch("mixed moduli in line set");
  }
  return q;
}

}  // namespace

std::uint64_t count_incidences(std::span<const PPoint> pts,
                               std::span<const PLine> lines) {
  const std::uint32_t q = common_q(pts, lines);
  if (q == 0) return 0;
  const auto p = dedup(pts);
  const auto l = dedup(lines);
  const PrimeField f(q);

  if (static_cast<std::uint64_t>(p.size()) * l.size() <= 10'000'000ull) {
    std::uint64_t n = 0;
    for (const auto& pt : p)
      for (const auto& ln : l)
        if (incident(pt, ln)) ++n;
    return n;
  }
  // Bucketed path: hash one side, enumerate the q+1 pencil of the other.
  std::uint64_t n = 0;
  if (l.size() > p.size()) {
    std::unordered_set<std::uint64_t> lk;
    lk.reserve(l.size() * 2);
    for (const auto& ln : l) lk.insert(ln.key());
    for (const auto& pt : p)
      for (const auto& ln : lines_through_point(f, pt))
        if (lk.count(ln.key())) ++n;
  } else {
    std::unordered_set<std::uint64_t> pk;
    pk.reserve(p.size() * 2);
    for (const auto& pt : p) pk.insert(pt.key());
    for (const auto& ln : l)
      for (const auto& pt : points_on_line(f, ln))
        if (pk.count(pt.key())) ++n;
  }
  return n;
}

EasyBoundReport easy_bound_check(std::span<const PPoint> pts,
                                 std::span<const PLine> lines) {
  EasyBoundReport r;
  const auto p = dedup(pts);
  const auto l = dedup(lines);
  r.n_points = p.size();
  r.n_lines = l.size();
  r.incidences = count_incidences(p, l);
  const unsigned __int128 i2 =
      static_cast<unsigned __int128>(r.incidences) * r.incidences;
  const unsigned __int128 primal =
      2 * static_cast<unsigned __int128>(r.n_points) * r.n_lines * r.n_lines +
      static_cast<unsigned __int128>(r.incidences) * r.n_points;
  const unsigned __int128 dual =
      2 * static_cast<unsigned __int128>(r.n_lines) * r.n_points * r.n_points +
      static_cast<unsigned __int128>(r.incidences) * r.n_lines;
  r.holds_primal = i2 <= primal;
  r.holds_dual = i2 <= dual;
  const double np = static_cast<double>(r.n_points);
  const double nl = static_cast<double>(r.n_lines);
  r.bound_value = std::min(std::sqrt(np) * nl + np, std::sqrt(nl) * np + nl);
  return r;
}

ElekesInstance elekes_construct(const FSet& a) {
  if (a.empty()) throw EmptyInput("elekes_construct: empty set");
  const PrimeField& f = a.field();
  ElekesInstance out;
  out.slope_degenerate = a.contains(0);
  const FSet s = sumset(a, a);
  const FSet p = prodset(a, a);
  out.points.reserve(s.size() * p.size());
  s.for_each([&](Elem x) {
    p.for_each([&](Elem y) { out.points.push_back(affine_point(f, x, y)); });
  });
  // y = b(x - a): bx - y - ba = 0.
  std::vector<PLine> lines;
  a.for_each([&](Elem av) {
    a.for_each([&](Elem bv) {
      lines.push_back(make_pline(f, bv, f.q() - 1, f.neg(f.mul(bv, av))));
    });
  });
  std::sort(lines.begin(), lines.end());
  lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
  out.lines = std::move(lines);
  return out;
}

std::pair<std::vector<PPoint>, std::vector<PLine>> apply_proj(
    const Mat3& m, std::span<const PPoint> pts, std::span<const PLine> lines) {
  const Mat3 mt = m.inverse_transpose();  // raises SingularMatrix
  std::pair<std::vector<PPoint>, std::vector<PLine>> out;
  out.first.reserve(pts.size());
  out.second.reserve(lines.size());
  for (const auto& p : pts) {
    const Vec3 v = m.apply({p.x, p.y, p.z});
    out.first.push_back(make_ppoint(m.f, v[0], v[1], v[2]));
  }
  for (const auto& l : lines) {
    const Vec3 v = mt.apply({l.a, l.b, l.c});
    out.second.push_back(make_pline(m.f, v[0], v[1], v[2]));
  }
  return out;
}

std::vector<std::size_t> popular_restrict(std::span<const std::int64_t> mu,
                                          std::int64_t x) {
  if (mu.empty()) throw EmptyInput("popular_restrict: empty weights");
  std::int64_t total = 0;
  for (std::int64_t v : mu) {
    if (v < 0) throw SizeOutOfRange("popular_restrict: negative weight");
    total += v;
  }
  if (total < x) throw MassTooSmall("popular_restrict: total mass below X");
  const std::int64_t nb = static_cast<std::int64_t>(mu.size());
  std::vector<std::size_t> kept;
  std::int64_t kept_mass = 0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    // mu(b) >= X / (2|B|)  <=>  2 |B| mu(b) >= X
    if (2 * nb * mu[i] >= x) {
      kept.push_back(i);
      kept_mass += mu[i];
    }
  }
  // Identity-level consequence of the threshold: discarded < |B| * X/(2|B|).
  if (2 * kept_mass < x)
    throw Error("popular_restrict: retained mass fell below X/2 (bug)");
  return kept;
}

Relation Relation::from_edges(
    std::size_t nl, std::size_t nr,
    std::vector<std::pair<std::uint32_t, std::uint32_t>> e) {
  Relation r;
  r.left_size = nl;
  r.right_size = nr;
  r.lambda.assign(nl, 0);
  r.mu.assign(nr, 0);
  for (const auto& [a, b] : e) {
    if (a >= nl || b >= nr) throw SizeOutOfRange("relation edge out of range");
    ++r.lambda[a];
    ++r.mu[b];
  }
  r.edges = std::move(e);
  return r;
}

CsReport cs_count(const Relation& r) {
  CsReport out;
  for (std::int64_t m : r.mu) {
    out.pairs += static_cast<std::uint64_t>(m);
    out.paths += static_cast<std::uint64_t>(m) * (m - 1);
  }
  // paths >= pairs^2/|B| - pairs  <=>  |B| (paths + pairs) >= pairs^2.
  const unsigned __int128 lhs =
      static_cast<unsigned __int128>(r.right_size) * (out.paths + out.pairs);
  const unsigned __int128 rhs =
      static_cast<unsigned __int128>(out.pairs) * out.pairs;
  out.holds = lhs >= rhs;
  return out;
}

namespace {

// Draw n distinct items from a pool implicitly indexed 0..size-1.
std::vector<std::uint64_t> sample_indices(std::uint64_t size, std::uint64_t n,
                                          Rng& rng) {
  // Floyd sampling over the index space.
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(n * 2);
  for (std::uint64_t j = size - n; j < size; ++j) {
    const std::uint64_t t = rng.below(j + 1);
    if (chosen.count(t))
      chosen.insert(j);
    else
      chosen.insert(t);
  }
  std::vector<std::uint64_t> out(chosen.begin(), chosen.end());
  std::sort(out.begin(), out.end());
  return out;
}

PPoint index_point(const PrimeField& f, std::uint64_t idx) {
  return affine_point(f, static_cast<Elem>(idx / f.q()),
                      static_cast<Elem>(idx % f.q()));
}

PLine index_line(const PrimeField& f, std::uint64_t idx) {
  const std::uint64_t q = f.q();
  if (idx < q * q)
    return make_pline(f, static_cast<Elem>(idx / q), f.q() - 1,
                      static_cast<Elem>(idx % q));
  return make_pline(f, 1, 0, f.neg(static_cast<Elem>(idx - q * q)));
}

// Trim with a seeded sample or pad with fresh seeded draws to exactly n.
template <class T, class FromIndex>
std::vector<T> fit_to_n(std::vector<T> base, std::uint64_t n,
                        std::uint64_t pool_size, Rng& rng, FromIndex from_index) {
  std::sort(base.begin(), base.end());
  base.erase(std::unique(base.begin(), base.end()), base.end());
  if (base.size() > n) {
    const auto keep = sample_indices(base.size(), n, rng);
    std::vector<T> out;
    out.reserve(n);
    for (auto i : keep) out.push_back(base[i]);
    return out;
  }
  std::unordered_set<std::uint64_t> have;
  for (const auto& t : base) have.insert(t.key());
  while (base.size() < n) {
    const T cand = from_index(rng.below(pool_size));
    if (have.insert(cand.key()).second) base.push_back(cand);
  }
  return base;
}

}  // namespace

StReport st_experiment(const PrimeField& f, std::uint64_t n, StGenerator gen,
                       std::uint32_t trials, std::uint64_t seed) {
  const std::uint64_t q = f.q();
  if (n == 0 || n > q * q)
    throw BudgetExceeded("st_experiment: need 1 <= N <= q^2");
  if (trials == 0) throw BudgetExceeded("st_experiment: need trials >= 1");

  StReport rep;
  rep.q = f.q();
  rep.n = n;
  rep.generator = gen;
  rep.trials = trials;
  rep.seed = seed;

  const std::uint64_t n_lines_pool = q * q + q;
  for (std::uint32_t t = 0; t < trials; ++t) {
    Rng rng(Rng::derive(seed, t));
    std::vector<PPoint> pts;
    std::vector<PLine> lines;
    switch (gen) {
      case StGenerator::Uniform: {
        for (auto i : sample_indices(q * q, n, rng)) pts.push_back(index_point(f, i));
        for (auto i : sample_indices(n_lines_pool, n, rng))
          lines.push_back(index_line(f, i));
        break;
      }
      case StGenerator::Elekes: {
        const std::uint64_t m = std::max<std::uint64_t>(
            1, static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n))));
        FSet a(f);
        {
          FSet pool = rand_subset(f, std::min<std::uint64_t>(m, q - 1) + 1,
                                  rng.next());
          pool.erase(0);  // slopes stay nonzero
          std::size_t want = std::min<std::uint64_t>(m, q - 1);
          pool.for_each([&](Elem x) {
            if (a.size() < want) a.insert(x);
          });
          for (Elem x = 1; a.size() < want && x < f.q(); ++x) a.insert(x);
        }
        auto inst = elekes_construct(a);
        pts = fit_to_n(std::move(inst.points), n, q * q, rng,
                       [&](std::uint64_t i) { return index_point(f, i); });
        lines = fit_to_n(std::move(inst.lines), n, n_lines_pool, rng,
                         [&](std::uint64_t i) { return index_line(f, i); });
        break;
      }
      case StGenerator::Grid: {
        const std::uint64_t m = std::max<std::uint64_t>(
            1, static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n))));
        FSet g = rand_subset(f, std::min<std::uint64_t>(m, q), rng.next());
        std::vector<PPoint> base_p;
        std::vector<PLine> base_l;
        g.for_each([&](Elem x) {
          g.for_each([&](Elem y) {
            base_p.push_back(affine_point(f, x, y));
            // y = s x + t with s, t in G.
            base_l.push_back(make_pline(f, x, f.q() - 1, y));
          });
        });
        pts = fit_to_n(std::move(base_p), n, q * q, rng,
                       [&](std::uint64_t i) { return index_point(f, i); });
        lines = fit_to_n(std::move(base_l), n, n_lines_pool, rng,
                         [&](std::uint64_t i) { return index_line(f, i); });
        break;
      }
    }
    rep.max_incidences = std::max(rep.max_incidences, count_incidences(pts, lines));
  }
  if (n >= 2 && rep.max_incidences >= 1) {
    rep.empirical_eps = 1.5 - std::log(static_cast<double>(rep.max_incidences)) /
                              std::log(static_cast<double>(n));
  }
  return rep;
}

void write_instance(std::ostream& os, std::span<const PPoint> pts,
                    std::span<const PLine> lines) {
  for (const auto& p : pts)
    os << "p " << p.x << ' ' << p.y << ' ' << p.z << '\n';
  for (const auto& l : lines)
    os << "l " << l.a << ' ' << l.b << ' ' << l.c << '\n';
}

std::pair<std::vector<PPoint>, std::vector<PLine>> read_instance(
    std::istream& is, const PrimeField& f) {
  std::pair<std::vector<PPoint>, std::vector<PLine>> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string tag;
    std::uint64_t a, b, c;
    if (!(ss >> tag >> a >> b >> c) || (tag != "p" && tag != "l")) {
      throw ParseError("instance line " + std::to_string(lineno) +
                       ": expected 'p x y z' or 'l a b c'");
    }
    if (a >= f.q() || b >= f.q() || c >= f.q())
      throw ParseError("instance line " + std::to_string(lineno) +
                       ": coordinate out of range");
    if (tag == "p")
      out.first.push_back(make_ppoint(f, a, b, c));
    else
      out.second.push_back(make_pline(f, a, b, c));
  }
  return out;
}

const char* st_generator_name(StGenerator g) {
  switch (g) {
    case StGenerator::Uniform: return "uniform";
    case StGenerator::Elekes: return "elekes";
    case StGenerator::Grid: return "grid";
  }
  return "uniform";
}

StGenerator st_generator_from_name(const std::string& name) {
  if (name == "uniform") return StGenerator::Uniform;
  if (name == "elekes") return StGenerator::Elekes;
  if (name == "grid") return StGenerator::Grid;
  throw BadConfig("unknown generator: " + name);
}

}  // namespace fflab
