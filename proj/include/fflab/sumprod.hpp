#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "fflab/fset.hpp"
#include "fflab/search.hpp"

namespace fflab {

// Linear map B^k -> F, (b_1..b_k) -> sum b_j * coeffs[j], together with the
// exact image size of its source set.
struct Surjection {
  std::uint32_t q = 0;
  std::vector<Elem> coeffs;  // all nonzero
  FSet source;
  std::size_t cover_size = 0;

  bool surjective() const { return cover_size == q; }
};

// Smallest xi in F^* maximizing |A + B*xi|, with that size. The maximum always
// clears min(|A||B|/2, q/10). EmptyInput on empty operands.
std::pair<Elem, std::size_t> boost_xi(const FSet& a, const FSet& b);

// |B*c_1 + ... + B*c_k| by plain elementwise accumulation; the slow
// independent check used to confirm cover sizes computed by the bit kernels.
std::size_t linear_cover_size(const FSet& b, std::span<const Elem> coeffs);

// Coefficients xi_1..xi_k with A*xi_1 + ... + A*xi_k = F. Greedy: each step
// appends the boost_xi maximizer against A; if that ever failed to grow the
// running sum, a xi = 1 step would still grow it by Cauchy-Davenport. The
// coefficient count is capped at 2*ceil(log q / log |A|) + 12 and the cap is
// a hard error. TooSmall for |A| <= 1.
Surjection build_surjection(const FSet& a);

// Two distinct k-tuples over B with equal weighted sums.
struct Collision {
  std::vector<Elem> tuple_a;
  std::vector<Elem> tuple_b;
};

// First colliding pair in lexicographic scan order over B^k (pigeonhole finds
// one within the first q+1 tuples). NoCollisionInBudget when |B|^k <= q.
Collision find_collision(const FSet& b, const Surjection& s);

// One rank-reduction step: re-index a colliding coordinate last, then the
// same leading coefficients become a surjection from
// Btilde = B(B-B) + B(B-B) with k-1 terms; surjectivity is re-verified by
// direct enumeration. Requires s surjective with k > 1.
std::pair<FSet, Surjection> reduce_rank(const FSet& b, const Surjection& s);

enum class SumProdStat { MaxBoth, SumOnly };

struct ExponentRow {
  std::uint32_t q = 0;
  std::uint32_t n = 0;
  std::size_t min_max = 0;
  std::vector<Elem> argmin;  // ascending
  SearchMode mode = SearchMode::Exhaustive;
  std::uint32_t trials = 0;
  std::uint64_t seed = 0;
};

// Minimum over n-subsets A of max(|A+A|, |A.A|) (or |A+A| alone for SumOnly).
// Exhaustive mode scans subsets lexicographically under a C(q,n) <= 10^8
// budget and reports the true minimum with its first witness; randomized mode
// hill-climbs with seeded restarts, reporting an upper bound. affine_reduce
// restricts the exhaustive scan to subsets containing {0,1} (orbit
// representatives of x -> ux+v) and is accepted only for the SumOnly
// statistic.
ExponentRow sumprod_min_search(const PrimeField& f, std::uint32_t n,
                               SearchMode mode, std::uint32_t trials,
                               std::uint64_t seed,
                               SumProdStat stat = SumProdStat::MaxBoth,
                               bool affine_reduce = false);

}  // namespace fflab
