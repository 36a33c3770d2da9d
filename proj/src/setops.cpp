#include "fflab/setops.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace fflab {

namespace {

// dst |= src << s, confined to bit range [0, q). High garbage is masked off.
void or_left(std::vector<std::uint64_t>& dst, std::span<const std::uint64_t> src,
             std::uint32_t s, std::uint32_t q) {
  const std::size_t w = dst.size();
  const std::size_t ws = s >> 6;
  const std::uint32_t b = s & 63;
  if (b == 0) {
    for (std::size_t i = w; i-- > ws;) dst[i] |= src[i - ws];
  } else {
    for (std::size_t i = w; i-- > ws;) {
      std::uint64_t v = src[i - ws] << b;
      if (i - ws >= 1) v |= src[i - ws - 1] >> (64 - b);
      dst[i] |= v;
    }
  }
  dst.back() &= tail_mask(q);
}

// dst |= src >> r. Source bits are already below q, so no masking is needed.
void or_right(std::vector<std::uint64_t>& dst, std::span<const std::uint64_t> src,
              std::uint32_t r) {
  const std::size_t w = dst.size();
  const std::size_t ws = r >> 6;
  const std::uint32_t b = r & 63;
  if (b == 0) {
    for (std::size_t i = 0; i + ws < w; ++i) dst[i] |= src[i + ws];
  } else {
    for (std::size_t i = 0; i + ws < w; ++i) {
      std::uint64_t v = src[i + ws] >> b;
      if (i + ws + 1 < w) v |= src[i + ws + 1] << (64 - b);
      dst[i] |= v;
    }
  }
}

// dst |= src rotated by s positions mod q.
void or_cyclic(std::vector<std::uint64_t>& dst, std::span<const std::uint64_t> src,
               Elem s, std::uint32_t q) {
  if (s == 0) {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] |= src[i];
    return;
  }
  or_left(dst, src, s, q);
  or_right(dst, src, q - s);
}

}  // namespace

FSet sumset(const FSet& a, const FSet& b) {
  check_same_field(a.field(), b.field());
  const std::uint32_t q = a.q();
  std::vector<std::uint64_t> acc(word_count(q), 0);
  // Iterate the smaller set, rotate the larger: the shift kernel is O(q/64).
  const FSet& small = a.size() <= b.size() ? a : b;
  const FSet& big = a.size() <= b.size() ? b : a;
  small.for_each([&](Elem x) { or_cyclic(acc, big.words(), x, q); });
  return FSet::from_words(a.field(), std::move(acc));
}

FSet diffset(const FSet& a, const FSet& b) { return sumset(a, negated(b)); }

FSet negated(const FSet& a) {
  FSet out(a.field());
  a.for_each([&](Elem x) { out.insert(a.field().neg(x)); });
  return out;
}

FSet prodset(const FSet& a, const FSet& b) {
  check_same_field(a.field(), b.field());
  const PrimeField& f = a.field();
  FSet out(f);
  const auto bs = b.elements();
  a.for_each([&](Elem x) {
    for (Elem y : bs) out.insert(f.mul(x, y));
  });
  return out;
}

FSet quotset(const FSet& a, const FSet& b) {
  check_same_field(a.field(), b.field());
  const PrimeField& f = a.field();
  std::vector<Elem> divisors;
  b.for_each([&](Elem y) {
    if (y != 0) divisors.push_back(f.inv(y));
  });
  if (divisors.empty())
    throw EmptyDivisor("quotset: divisor set has no nonzero element");
  FSet out(f);
  a.for_each([&](Elem x) {
    for (Elem yi : divisors) out.insert(f.mul(x, yi));
  });
  return out;
}

FSet dilate(const FSet& a, Elem xi) {
  if (xi % a.q() == 0) throw ZeroDilation("dilate by 0");
  return scaled(a, xi);
}

FSet scaled(const FSet& a, Elem xi) {
  const PrimeField& f = a.field();
  FSet out(f);
  a.for_each([&](Elem x) { out.insert(f.mul(x, xi)); });
  return out;
}

CdReport verify_cauchy_davenport(const FSet& a, const FSet& b) {
  if (a.empty() || b.empty())
    throw EmptyInput("verify_cauchy_davenport: empty operand");
  CdReport r;
  r.lhs = sumset(a, b).size();
  r.rhs = std::min<std::size_t>(a.size() + b.size() - 1, a.q());
  r.holds = r.lhs >= r.rhs;
  return r;
}

FSet iterated_combination(std::span<const int> signs, const FSet& a) {
  if (signs.empty()) throw EmptyInput("iterated_combination: no signs");
  for (int s : signs) {
    if (s != 1 && s != -1)
      throw SizeOutOfRange("iterated_combination: signs must be +1 or -1");
  }
  FSet acc = signs[0] == 1 ? a : negated(a);
  for (std::size_t i = 1; i < signs.size(); ++i) {
    acc = signs[i] == 1 ? sumset(acc, a) : diffset(acc, a);
  }
  return acc;
}

FSet polynomial_image(const PolyExpr& p, const FSet& a, std::uint64_t budget) {
  if (a.empty()) throw EmptyInput("polynomial_image: empty base set");
  const unsigned m = p.arity();
  // |A|^m tuples; overflow-safe budget check.
  std::uint64_t tuples = 1;
  for (unsigned i = 0; i < m; ++i) {
    if (tuples > budget / a.size() + 1) {
      tuples = budget + 1;
      break;
    }
    tuples *= a.size();
  }
  if (tuples > budget) {
    throw BudgetExceeded("polynomial_image: |A|^" + std::to_string(m) +
                         " exceeds budget " + std::to_string(budget));
  }
  const auto elems = a.elements();
  std::vector<std::size_t> idx(m, 0);
  std::vector<Elem> args(m, elems[0]);
  FSet out(a.field());
  for (;;) {
    out.insert(p.eval(a.field(), args));
    // Odometer over A^m, rightmost digit fastest.
    std::size_t d = m;
    while (d-- > 0) {
      if (++idx[d] < elems.size()) {
        args[d] = elems[idx[d]];
        break;
      }
      idx[d] = 0;
      args[d] = elems[0];
    }
    if (d == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

bool Cover::covers() const {
  FSet hull = sumset(x, base);
  bool ok = true;
  target.for_each([&](Elem t) { ok = ok && hull.contains(t); });
  return ok;
}

bool Cover::counting_bound() const {
  return x.size() * body.size() <= sumset(body, target).size();
}

Cover ruzsa_cover(const FSet& a, const FSet& b) {
  if (a.empty()) throw EmptyInput("ruzsa_cover: empty translate body");
  const PrimeField& f = a.field();
  check_same_field(f, b.field());
  // Greedy ascending scan: keep x when x + A is disjoint from everything
  // already occupied. Maximality makes every b in B land inside X + (A - A).
  FSet x(f);
  FSet occupied(f);
  b.for_each([&](Elem cand) {
    bool clash = false;
    a.for_each([&](Elem t) { clash = clash || occupied.contains(f.add(cand, t)); });
    if (!clash) {
      x.insert(cand);
      a.for_each([&](Elem t) { occupied.insert(f.add(cand, t)); });
    }
  });
  return Cover{std::move(x), a, diffset(a, a), b};
}

Cover goodness_cover(Elem x, const FSet& a) {
  if (a.empty()) throw EmptyInput("goodness_cover: empty set");
  return ruzsa_cover(a, scaled(a, x));
}

namespace {

// Indexed bipartite view of an element-level edge set, rows over A, cols
// over B, adjacency kept as bit rows for fast path counting.
struct BipView {
  std::vector<Elem> av, bv;
  std::vector<std::size_t> aidx, bidx;  // element -> index (or npos)
  std::size_t words_a, words_b;
  std::vector<std::uint64_t> row;  // a-index -> bitset over B
  std::vector<std::uint64_t> col;  // b-index -> bitset over A
  std::size_t edges = 0;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  BipView(const FSet& a, const FSet& b, const EdgeSet& g)
      : av(a.elements()), bv(b.elements()) {
    aidx.assign(a.q(), npos);
    bidx.assign(b.q(), npos);
    for (std::size_t i = 0; i < av.size(); ++i) aidx[av[i]] = i;
    for (std::size_t i = 0; i < bv.size(); ++i) bidx[bv[i]] = i;
    words_a = (av.size() + 63) / 64;
    words_b = (bv.size() + 63) / 64;
    row.assign(av.size() * words_b, 0);
    col.assign(bv.size() * words_a, 0);
    for (const auto& [ea, eb] : g) {
      if (ea >= a.q() || aidx[ea] == npos || eb >= b.q() || bidx[eb] == npos) {
        throw SizeOutOfRange("edge (" + std::to_string(ea) + "," +
                             std::to_string(eb) + ") leaves A x B");
      }
      const std::size_t i = aidx[ea], j = bidx[eb];
      std::uint64_t& rw = row[i * words_b + (j >> 6)];
      const std::uint64_t bit = std::uint64_t{1} << (j & 63);
      if (!(rw & bit)) {
        rw |= bit;
        col[j * words_a + (i >> 6)] |= std::uint64_t{1} << (i & 63);
        ++edges;
      }
    }
  }

  bool edge(std::size_t i, std::size_t j) const {
    return (row[i * words_b + (j >> 6)] >> (j & 63)) & 1u;
  }
  std::size_t deg_a(std::size_t i) const {
    std::size_t n = 0;
    for (std::size_t w = 0; w < words_b; ++w)
      n += __builtin_popcountll(row[i * words_b + w]);
    return n;
  }
  std::size_t deg_b(std::size_t j) const {
    std::size_t n = 0;
    for (std::size_t w = 0; w < words_a; ++w)
      n += __builtin_popcountll(col[j * words_a + w]);
    return n;
  }
  // #{(b1, a2) : (a_i, b1), (a2, b1), (a2, b_j) all edges}
  std::uint64_t paths(std::size_t i, std::size_t j) const {
    std::uint64_t total = 0;
    const std::uint64_t* nj = &col[j * words_a];
    for (std::size_t w = 0; w < words_b; ++w) {
      std::uint64_t bits = row[i * words_b + w];
      while (bits) {
        const std::size_t b1 = (w << 6) + __builtin_ctzll(bits);
        bits &= bits - 1;
        const std::uint64_t* nb1 = &col[b1 * words_a];
        std::uint64_t inter = 0;
        for (std::size_t u = 0; u < words_a; ++u)
          inter += __builtin_popcountll(nb1[u] & nj[u]);
        total += inter;
      }
    }
    return total;
  }
};

}  // namespace

std::uint64_t count_bsg_paths(Elem a_prime, Elem b_prime, const FSet& a,
                              const FSet& b, const EdgeSet& g) {
  check_same_field(a.field(), b.field());
  if (!a.contains(a_prime) || !b.contains(b_prime))
    throw SizeOutOfRange("count_bsg_paths: endpoint outside A or B");
  BipView v(a, b, g);
  return v.paths(v.aidx[a_prime], v.bidx[b_prime]);
}

namespace {

struct RefinePair {
  std::vector<std::size_t> rows, cols;  // kept indices
};

// Shared deterministic refinement: degree threshold 2n*deg >= |G| on each
// side, then keep rows/cols with path-popular partners across at least half
// of the surviving other side. Falls back to the single best pair.
RefinePair bsg_refine(const BipView& v) {
  const std::size_t na = v.av.size(), nb = v.bv.size();
  std::vector<std::size_t> rows1, cols1;
  for (std::size_t i = 0; i < na; ++i)
    if (2 * na * v.deg_a(i) >= v.edges) rows1.push_back(i);
  for (std::size_t j = 0; j < nb; ++j)
    if (2 * nb * v.deg_b(j) >= v.edges) cols1.push_back(j);

  // Path threshold |G|^2 / (8 n^3) with n = max side, compared exactly:
  // paths * 8 * n^3 >= |G|^2.
  const unsigned __int128 rhs =
      static_cast<unsigned __int128>(v.edges) * v.edges;
  const std::size_t n = std::max(na, nb);
  auto popular = [&](std::uint64_t p) {
    return static_cast<unsigned __int128>(p) * 8 * n * n * n >= rhs;
  };

  std::vector<std::vector<std::uint64_t>> pcache(rows1.size());
  for (std::size_t r = 0; r < rows1.size(); ++r) {
    pcache[r].resize(cols1.size());
    for (std::size_t c = 0; c < cols1.size(); ++c)
      pcache[r][c] = v.paths(rows1[r], cols1[c]);
  }

  RefinePair out;
  std::vector<std::size_t> keep_r;
  for (std::size_t r = 0; r < rows1.size(); ++r) {
    std::size_t good = 0;
    for (std::size_t c = 0; c < cols1.size(); ++c)
      if (popular(pcache[r][c])) ++good;
    if (2 * good >= cols1.size() && !cols1.empty()) keep_r.push_back(r);
  }
  std::vector<std::size_t> keep_c;
  for (std::size_t c = 0; c < cols1.size(); ++c) {
    std::size_t good = 0;
    for (std::size_t r : keep_r)
      if (popular(pcache[r][c])) ++good;
    if (!keep_r.empty() && 2 * good >= keep_r.size()) keep_c.push_back(c);
  }

  if (!keep_r.empty() && !keep_c.empty()) {
    for (std::size_t r : keep_r) out.rows.push_back(rows1[r]);
    for (std::size_t c : keep_c) out.cols.push_back(cols1[c]);
    return out;
  }

  // Fallback: the single pair with the most paths, ties to the smallest
  // (a, b) element pair.
  std::uint64_t best = 0;
  std::size_t bi = 0, bj = 0;
  bool found = false;
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      const std::uint64_t p = v.paths(i, j);
      if (!found || p > best) {
        best = p;
        bi = i;
        bj = j;
        found = true;
      }
    }
  }
  if (found) {
    out.rows.push_back(bi);
    out.cols.push_back(bj);
  }
  return out;
}

}  // namespace

BsgCertificate bsg_extract(const FSet& a, const FSet& b, const EdgeSet& g,
                           Rat k) {
  check_same_field(a.field(), b.field());
  if (k.num <= 0 || k.den <= 0)
    throw HypothesisFailed("bsg_extract: K must be positive");
  if (a.size() != b.size())
    throw HypothesisFailed("bsg_extract: |A| != |B|");
  if (a.empty()) throw HypothesisFailed("bsg_extract: empty sides");

  BipView v(a, b, g);
  // |G| >= |A||B|/K  <=>  |G| * K >= |A||B|
  const unsigned __int128 lhs_edges =
      static_cast<unsigned __int128>(v.edges) * static_cast<std::uint64_t>(k.num);
  const unsigned __int128 rhs_edges =
      static_cast<unsigned __int128>(a.size()) * b.size() *
      static_cast<std::uint64_t>(k.den);
  if (lhs_edges < rhs_edges)
    throw HypothesisFailed("bsg_extract: edge density below |A||B|/K");
  // |{a+b over G}| <= K|A|
  FSet gsums(a.field());
  for (const auto& [ea, eb] : g) gsums.insert(a.field().add(ea, eb));
  const unsigned __int128 lhs_sums =
      static_cast<unsigned __int128>(gsums.size()) *
      static_cast<std::uint64_t>(k.den);
  const unsigned __int128 rhs_sums =
      static_cast<unsigned __int128>(a.size()) *
      static_cast<std::uint64_t>(k.num);
  if (lhs_sums > rhs_sums)
    throw HypothesisFailed("bsg_extract: G-sum set larger than K|A|");

  RefinePair kept = bsg_refine(v);
  BsgCertificate cert{FSet(a.field()), FSet(a.field()), 0};
  for (std::size_t i : kept.rows) cert.a_sub.insert(v.av[i]);
  for (std::size_t j : kept.cols) cert.b_sub.insert(v.bv[j]);
  bool first = true;
  for (std::size_t i : kept.rows) {
    for (std::size_t j : kept.cols) {
      const std::uint64_t p = v.paths(i, j);
      if (first || p < cert.min_reps) cert.min_reps = p;
      first = false;
    }
  }
  return cert;
}

KtResult kt_refine(const FSet& a, std::uint64_t budget) {
  FSet base = a;
  if (base.contains(0)) base.erase(0);
  if (base.size() < 3) throw TooSmall("kt_refine: need |A| >= 3 after stripping 0");
  {
    const std::uint64_t n = base.size();
    if (n * n > budget / (n * n))
      throw BudgetExceeded("kt_refine: |A|^4 exceeds budget");
  }
  const PrimeField& f = base.field();

  // Stage 1: additive refinement on the complete sum graph over A x A.
  EdgeSet complete;
  const auto elems = base.elements();
  complete.reserve(elems.size() * elems.size());
  for (Elem x : elems)
    for (Elem y : elems) complete.emplace_back(x, y);
  BipView v1(base, base, complete);
  RefinePair s1 = bsg_refine(v1);
  FSet c(f), d(f);
  for (std::size_t i : s1.rows) c.insert(v1.av[i]);
  for (std::size_t j : s1.cols) d.insert(v1.bv[j]);
  if (c.empty() || d.empty()) throw TooSmall("kt_refine: additive stage collapsed");

  // Stage 2: multiplicative refinement on the complete product graph over
  // C x D. The path-popularity machinery counts graph walks, so it is shared
  // between the stages; the group operation only changes which conclusions
  // the walk counts support, and the quotient pigeonhole below is where the
  // multiplicative structure enters.
  const auto cv = c.elements();
  const auto dv = d.elements();
  EdgeSet prod_complete;
  prod_complete.reserve(cv.size() * dv.size());
  for (Elem x : cv)
    for (Elem y : dv) prod_complete.emplace_back(x, y);
  BipView v2(c, d, prod_complete);
  RefinePair s2 = bsg_refine(v2);
  FSet cp(f), dp(f);
  for (std::size_t i : s2.rows) cp.insert(v2.av[i]);
  for (std::size_t j : s2.cols) dp.insert(v2.bv[j]);
  if (cp.empty() || dp.empty())
    throw TooSmall("kt_refine: multiplicative stage collapsed");

  // Stage 3: pigeonhole the quotient map (x, y) -> x/y over C' x D'; the
  // largest fiber wins, ties to the smallest quotient value.
  std::map<Elem, std::size_t> fiber;
  cp.for_each([&](Elem x) {
    dp.for_each([&](Elem y) { ++fiber[f.mul(x, f.inv(y))]; });
  });
  Elem best_v = 0;
  std::size_t best_n = 0;
  for (const auto& [val, n] : fiber) {
    if (n > best_n) {
      best_n = n;
      best_v = val;
    }
  }
  FSet refined = cp.intersect_with(scaled(dp, best_v));
  if (refined.size() < 2) throw TooSmall("kt_refine: pigeonhole fiber below 2");

  FSet pp = prodset(refined, refined);
  KtResult out{refined, diffset(pp, pp).size()};
  return out;
}

}  // namespace fflab
