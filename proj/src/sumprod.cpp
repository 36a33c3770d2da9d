#include "fflab/sumprod.hpp"

#include <algorithm>
#include <map>

#include "fflab/errors.hpp"
#include "fflab/rng.hpp"
#include "fflab/setops.hpp"

namespace fflab {
namespace {

void ensure_same(const FSet& a, const FSet& b, const char* where) {
  if (a.q() != b.q()) throw FieldMismatch(std::string(where) + ": mixed moduli");
}

// Smallest e with |A|^e >= q; the guard constant of build_surjection.
std::size_t log_ceil(std::uint64_t base, std::uint64_t q) {
  std::size_t e = 0;
  unsigned __int128 p = 1;
  while (p < q) {
    p *= base;
    ++e;
  }
  return e;
}

std::vector<Elem> tuple_from_index(std::uint64_t idx,
                                   const std::vector<Elem>& elems,
                                   std::size_t k) {
  // Mixed-radix digits, most significant first, so ascending idx is
  // lexicographic tuple order.
  std::vector<Elem> t(k);
  for (std::size_t j = k; j-- > 0;) {
    t[j] = elems[idx % elems.size()];
    idx /= elems.size();
  }
  return t;
}

}  // namespace

std::pair<Elem, std::size_t> boost_xi(const FSet& a, const FSet& b) {
  ensure_same(a, b, "boost_xi");
  if (a.empty() || b.empty()) throw EmptyInput("boost_xi: empty operand");
  const std::uint32_t q = a.q();
  Elem best_xi = 1;
  std::size_t best = 0;
  for (Elem xi = 1; xi < q; ++xi) {
    const std::size_t s = sumset(a, dilate(b, xi)).size();
    if (s > best) {
      best = s;
      best_xi = xi;
    }
  }
  // Eq. (boost): the maximum is at least min(|A||B|/2, q/10).
  const std::uint64_t ab = std::uint64_t(a.size()) * b.size();
  if (2 * std::uint64_t(best) < ab && 10 * std::uint64_t(best) < q)
    throw Error("boost_xi: maximum fell below the guaranteed bound");
  return {best_xi, best};
}

std::size_t linear_cover_size(const FSet& b, std::span<const Elem> coeffs) {
  const PrimeField& f = b.field();
  std::vector<bool> cur(f.q(), false), next(f.q(), false);
  cur[0] = true;
  const std::vector<Elem> elems = b.elements();
  for (const Elem xi : coeffs) {
    std::fill(next.begin(), next.end(), false);
    for (Elem s = 0; s < f.q(); ++s) {
      if (!cur[s]) continue;
      for (const Elem e : elems) next[f.add(s, f.mul(e, xi))] = true;
    }
    std::swap(cur, next);
  }
  return static_cast<std::size_t>(std::count(cur.begin(), cur.end(), true));
}

Surjection build_surjection(const FSet& a) {
  const PrimeField& f = a.field();
  if (a.size() <= 1) throw TooSmall("build_surjection: need |A| >= 2");

  Surjection s{f.q(), {1}, a, a.size()};
  FSet running = a;
  if (running.size() == f.q()) return s;

  const std::size_t cap = 2 * log_ceil(a.size(), f.q()) + 12;
  while (running.size() < f.q()) {
    const auto [xi, grown] = boost_xi(running, a);
    if (grown > running.size()) {
      running = sumset(running, dilate(a, xi));
      s.coeffs.push_back(xi);
    } else {
      // Cauchy-Davenport guarantees growth for xi = 1 while the sum is
      // proper; reachable only if the boost maximum stalled, which it cannot.
      FSet stepped = sumset(running, a);
      if (stepped.size() <= running.size())
        throw Error("build_surjection: stalled below full coverage");
      running = std::move(stepped);
      s.coeffs.push_back(1);
    }
    if (s.coeffs.size() > cap)
      throw BudgetExceeded("build_surjection: coefficient cap exceeded");
  }
  s.cover_size = running.size();
  if (linear_cover_size(a, s.coeffs) != f.q())
    throw Error("build_surjection: direct recheck disagrees");
  return s;
}

Collision find_collision(const FSet& b, const Surjection& s) {
  if (b.q() != s.q) throw FieldMismatch("find_collision: mixed moduli");
  const PrimeField& f = b.field();
  const std::size_t k = s.coeffs.size();

  unsigned __int128 tuples = 1;
  bool enough = false;
  for (std::size_t j = 0; j < k && !enough; ++j) {
    tuples *= b.size();
    if (tuples > f.q()) enough = true;
  }
  if (!enough) throw NoCollisionInBudget("find_collision: |B|^k <= q");

  const std::vector<Elem> elems = b.elements();
  std::map<Elem, std::uint64_t> first_at;  // weighted sum -> tuple index
  // Pigeonhole: among any q+1 tuples two sums agree, so the scan is short.
  for (std::uint64_t idx = 0;; ++idx) {
    const std::vector<Elem> t = tuple_from_index(idx, elems, k);
    Elem sum = 0;
    for (std::size_t j = 0; j < k; ++j)
      sum = f.add(sum, f.mul(t[j], s.coeffs[j]));
    const auto [it, fresh] = first_at.emplace(sum, idx);
    if (fresh) continue;
    Collision c{tuple_from_index(it->second, elems, k), t};
    Elem check = 0;
    for (std::size_t j = 0; j < k; ++j)
      check = f.add(check,
                    f.mul(f.sub(c.tuple_a[j], c.tuple_b[j]), s.coeffs[j]));
    if (check != 0 || c.tuple_a == c.tuple_b)
      throw Error("find_collision: recheck failed");
    return c;
  }
}

std::pair<FSet, Surjection> reduce_rank(const FSet& b, const Surjection& s) {
  if (b.q() != s.q) throw FieldMismatch("reduce_rank: mixed moduli");
  if (!s.surjective()) throw HypothesisFailed("reduce_rank: not surjective");
  if (s.coeffs.size() < 2) throw SizeOutOfRange("reduce_rank: rank already 1");
  const PrimeField& f = b.field();

  Collision col = find_collision(b, s);
  std::vector<Elem> coeffs = s.coeffs;
  std::size_t diff = coeffs.size();
  for (std::size_t j = coeffs.size(); j-- > 0;)
    if (col.tuple_a[j] != col.tuple_b[j]) {
      diff = j;
      break;
    }
  // Swap the last differing coordinate into the final slot; the relation is
  // symmetric under simultaneous permutation.
  std::swap(coeffs[diff], coeffs.back());

  const FSet bd = prodset(b, diffset(b, b));
  const FSet btilde = sumset(bd, bd);

  Surjection out{f.q(), {coeffs.begin(), coeffs.end() - 1}, btilde, 0};
  out.cover_size = linear_cover_size(btilde, out.coeffs);
  if (!out.surjective())
    throw Error("reduce_rank: reduced map lost surjectivity");
  return {btilde, out};
}

ExponentRow sumprod_min_search(const PrimeField& f, std::uint32_t n,
                               SearchMode mode, std::uint32_t trials,
                               std::uint64_t seed, SumProdStat stat,
                               bool affine_reduce) {
  if (n < 2 || n > f.q()) throw SizeOutOfRange("sumprod_min_search: bad n");
  if (affine_reduce &&
      (stat != SumProdStat::SumOnly || mode != SearchMode::Exhaustive))
    throw BadConfig(
        "affine reduction applies only to the exhaustive sum-only statistic");

  const auto measure = [&](const FSet& a) -> std::size_t {
    const std::size_t sums = sumset(a, a).size();
    if (stat == SumProdStat::SumOnly) return sums;
    return std::max(sums, prodset(a, a).size());
  };

  ExponentRow row;
  row.q = f.q();
  row.n = n;
  row.mode = mode;
  row.trials = trials;
  row.seed = seed;
  row.min_max = static_cast<std::size_t>(-1);

  if (mode == SearchMode::Exhaustive) {
    const std::uint32_t fixed = affine_reduce ? 2 : 0;
    const std::uint32_t free = n - fixed;
    const std::uint32_t lo = fixed;  // choose free elements from [lo, q)
    if (choose_capped(f.q() - lo, free, 100000000ull) > 100000000ull)
      throw BudgetExceeded("sumprod_min_search: C(q, n) over 1e8");
    std::vector<Elem> pick(free);
    for (std::uint32_t i = 0; i < free; ++i) pick[i] = lo + i;
    for (;;) {
      FSet a(f);
      if (affine_reduce) {
        a.insert(0);
        a.insert(1);
      }
      for (const Elem e : pick) a.insert(e);
      const std::size_t m = measure(a);
      if (m < row.min_max) {
        row.min_max = m;
        row.argmin = a.elements();
      }
      if (free == 0) break;
      std::size_t i = free;
      while (i-- > 0 && pick[i] == f.q() - free + i) {
      }
      if (i == static_cast<std::size_t>(-1)) break;
      ++pick[i];
      for (std::size_t j = i + 1; j < free; ++j) pick[j] = pick[j - 1] + 1;
    }
    return row;
  }

  if (trials == 0) throw SizeOutOfRange("sumprod_min_search: zero trials");
  for (std::uint32_t t = 0; t < trials; ++t) {
    Rng rng(Rng::derive(seed, t));
    FSet a = rand_subset(f, n, rng.below(~0ull));
    std::vector<Elem> cur = a.elements();
    // Key: primary statistic with the combined size as tie-break.
    const auto key = [&](const FSet& s) -> std::pair<std::size_t, std::size_t> {
      const std::size_t sums = sumset(s, s).size();
      if (stat == SumProdStat::SumOnly) return {sums, sums};
      const std::size_t prods = prodset(s, s).size();
      return {std::max(sums, prods), sums + prods};
    };
    auto best = key(a);
    std::uint32_t stall = 0;
    while (stall < 200) {
      const std::uint32_t drop = static_cast<std::uint32_t>(rng.below(n));
      const Elem add = static_cast<Elem>(rng.below(f.q()));
      if (a.contains(add)) {
        ++stall;
        continue;
      }
      FSet cand = a;
      cand.erase(cur[drop]);
      cand.insert(add);
      const auto k = key(cand);
      if (k < best) {
        best = k;
        a = cand;
        cur[drop] = add;
      } else {
        ++stall;
        continue;
      }
      stall = 0;
    }
    if (best.first < row.min_max) {
      row.min_max = best.first;
      row.argmin = a.elements();
    }
  }
  return row;
}

}  // namespace fflab
