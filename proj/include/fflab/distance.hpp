#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "fflab/fset.hpp"
#include "fflab/incidence2d.hpp"
#include "fflab/search.hpp"

namespace fflab {

struct APoint2 {
  std::uint32_t q = 0;
  Elem x = 0, y = 0;

  bool operator==(const APoint2& o) const = default;
  bool operator<(const APoint2& o) const {
    return std::tie(x, y) < std::tie(o.x, o.y);
  }
};

APoint2 make_apoint(const PrimeField& f, Elem x, Elem y);

// Algebraic squared distance (x1-x2)^2 + (y1-y2)^2 mod q.
Elem dist(const APoint2& p0, const APoint2& p1);  // FieldMismatch

// All pairwise distances over P, including the diagonal, so 0 is always a
// member for nonempty P. EmptyInput otherwise.
FSet distance_set(const PrimeField& f, std::span<const APoint2> pts);

// True when -1 is a non-square (q = 3 mod 4), so nonzero vectors cannot have
// zero length. When false the isotropic witness line {(x, ix)} with i^2 = -1
// is built and its collapsed distance set {0} is verified.
bool nonsquare_gate(const PrimeField& f);

// Perpendicular bisector 2(a1-a0)x + 2(b1-b0)y = (a1^2+b1^2) - (a0^2+b0^2).
// Requires q odd (DegenerateField) and p0 != p1 (EqualPoints).
PLine bisector(const APoint2& p0, const APoint2& p1);

struct DistanceReport {
  std::uint32_t q = 0;
  std::uint32_t n = 0;
  SearchMode mode = SearchMode::Exhaustive;
  std::uint32_t trials = 0;
  std::uint64_t seed = 0;
  bool exclude_zero = false;
  std::size_t min_distances = 0;
  std::vector<APoint2> witness;
};

// Minimum |distance_set(P)| over N-point configurations. Exhaustive mode
// enumerates N-subsets of the q^2 affine points lexicographically (budget
// C(q^2, N) <= 10^8, BudgetExceeded otherwise); hill-climb mode runs seeded
// restarts. Requires nonsquare_gate (DegenerateField otherwise).
DistanceReport distance_min_search(const PrimeField& f, std::uint32_t n,
                                   SearchMode mode, std::uint32_t trials,
                                   std::uint64_t seed, bool exclude_zero = false);

// Point-set files: one "x y" pair per line.
void write_points(std::ostream& os, std::span<const APoint2> pts);
std::vector<APoint2> read_points(std::istream& is, const PrimeField& f);

}  // namespace fflab
