#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "fflab/fset.hpp"
#include "fflab/polyexpr.hpp"

namespace fflab {

// Pointwise set algebra. Sum/difference run word-parallel via cyclic shifts of
// the q-bit vectors; product/quotient walk element pairs.
FSet sumset(const FSet& a, const FSet& b);
FSet prodset(const FSet& a, const FSet& b);
FSet diffset(const FSet& a, const FSet& b);
// {x / y : x in a, y in b, y != 0}; zero divisors are dropped silently, but a
// divisor set without any nonzero element raises EmptyDivisor.
FSet quotset(const FSet& a, const FSet& b);

FSet negated(const FSet& a);
// {xi * x}; xi = 0 raises ZeroDilation.
FSet dilate(const FSet& a, Elem xi);
// Like dilate but xi = 0 is allowed and maps any nonempty set to {0}.
FSet scaled(const FSet& a, Elem xi);

struct CdReport {
  std::size_t lhs = 0;  // |A+B|
  std::size_t rhs = 0;  // min(|A|+|B|-1, q)
  bool holds = false;   // lhs >= rhs; false signals an implementation bug
};
CdReport verify_cauchy_davenport(const FSet& a, const FSet& b);

// signs[0]*A + signs[1]*A + ... with signs in {+1,-1}.
FSet iterated_combination(std::span<const int> signs, const FSet& a);

// {P(x1..xm) : xi in A}; raises BudgetExceeded when |A|^m > budget.
FSet polynomial_image(const PolyExpr& p, const FSet& a, std::uint64_t budget);

// Covering certificate: target is a subset of X + base, where X was chosen by
// a greedy ascending scan so that the translates {x + body : x in X} are
// pairwise disjoint. That disjointness gives the exact counting bound
// |X| * |body| <= |body + target|.
struct Cover {
  FSet x;
  FSet body;    // translate body used by the greedy scan (A)
  FSet base;    // covering body (A - A)
  FSet target;  // covered set (B)

  bool covers() const;          // target subset of X + base, checked pointwise
  bool counting_bound() const;  // |X| * |body| <= |body + target|
};

Cover ruzsa_cover(const FSet& a, const FSet& b);        // EmptyInput when A empty
Cover goodness_cover(Elem x, const FSet& a);            // cover of x*A by A-A

// Bipartite edge set over element pairs (a, b) with a in A, b in B.
using EdgeSet = std::vector<std::pair<Elem, Elem>>;

// Number of length-3 paths a' - b1 - a2 - b' in G. Each path corresponds to
// the 6-tuple (a1,b1,a2,b2,a3,b3) = (a', b1, a2, b1, a2, b') whose slot pairs
// (a1,b1), (a2,b2), (a3,b3) are all G-edges and which satisfies
// a' - b' = (a1-b1) - (a2-b2) + (a3-b3). See docs/formats.md.
std::uint64_t count_bsg_paths(Elem a_prime, Elem b_prime, const FSet& a,
                              const FSet& b, const EdgeSet& g);

// Exact rational, used wherever thresholds must avoid floating point.
struct Rat {
  std::int64_t num = 0;
  std::int64_t den = 1;
};

struct BsgCertificate {
  FSet a_sub;
  FSet b_sub;
  std::uint64_t min_reps = 0;  // min over A'xB' of count_bsg_paths
};

// Balog-Szemeredi-Gowers extraction on a sum graph: requires |A| = |B|,
// |G| >= |A||B|/K and |{a+b : (a,b) in G}| <= K|A| (HypothesisFailed
// otherwise). Deterministic: degree threshold then path-popularity refinement.
BsgCertificate bsg_extract(const FSet& a, const FSet& b, const EdgeSet& g,
                           Rat k);

struct KtResult {
  FSet refined;               // A' with |A'| >= 2
  std::size_t product_diff;   // |A'A' - A'A'|
  double measured_k() const {
    return static_cast<double>(product_diff) / static_cast<double>(refined.size());
  }
};

// Sum-product refinement: additive extraction on the sum graph, multiplicative
// extraction on the product graph, then a pigeonhole on the quotient map.
// budget caps the dominant path-count work, measured as |A|^4 after stripping
// zero. Raises TooSmall (|A| < 3 after strip, or pipeline collapse) and
// BudgetExceeded.
KtResult kt_refine(const FSet& a, std::uint64_t budget);

}  // namespace fflab
