#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "fflab/incidence2d.hpp"
#include "fflab/modmat.hpp"

namespace fflab {

// Canonical direction class in F^3: first nonzero coordinate scaled to 1.
// Exactly q^2+q+1 classes; lex order puts (0,0,1) first, then (0,1,b),
// then (1,a,b).
struct Direction {
  std::uint32_t q = 0;
  Vec3 d{};

  bool operator==(const Direction& o) const = default;
  bool operator<(const Direction& o) const { return d < o.d; }
};

Direction make_direction(const PrimeField& f, const Vec3& raw);  // ZeroDilation on 0
std::vector<Direction> enumerate_directions(const PrimeField& f);

// Affine line in canonical form: direction plus its lexicographically least
// point, which is the point with zero coordinate at the direction's leading 1.
struct ALine3 {
  Direction dir;
  Vec3 base{};

  bool operator==(const ALine3& o) const = default;
  bool operator<(const ALine3& o) const {
    return std::tie(dir.d, base) < std::tie(o.dir.d, o.base);
  }
};

ALine3 make_aline(const PrimeField& f, const Vec3& raw_dir, const Vec3& through);
ALine3 line_through(const PrimeField& f, const Vec3& p, const Vec3& r);  // EqualPoints
std::vector<Vec3> line_points(const PrimeField& f, const ALine3& l);
bool line_contains(const PrimeField& f, const ALine3& l, const Vec3& p);

// Unique common point of two distinct lines, nullopt when disjoint.
std::optional<Vec3> intersect(const PrimeField& f, const ALine3& a, const ALine3& b);

// Plane n.x = c with n canonicalized like a direction.
struct Plane3 {
  std::uint32_t q = 0;
  Vec3 n{};
  Elem c = 0;

  bool operator==(const Plane3& o) const = default;
  bool operator<(const Plane3& o) const {
    return std::tie(n, c) < std::tie(o.n, o.c);
  }
};

Plane3 make_plane(const PrimeField& f, const Vec3& raw_n, Elem c);
bool plane_contains(const PrimeField& f, const Plane3& pl, const Vec3& p);
bool plane_contains_line(const PrimeField& f, const Plane3& pl, const ALine3& l);

// Inhomogeneous quadratic over the monomial basis
// [1, x, y, z, x^2, y^2, z^2, xy, xz, yz].
struct Quadric {
  std::uint32_t q = 0;
  std::array<Elem, 10> c{};

  bool operator==(const Quadric& o) const = default;
};

Elem quadric_eval(const PrimeField& f, const Quadric& quad, const Vec3& p);

// Dense occupancy grid over F^3, index (x*q + y)*q + z.
class Grid3 {
 public:
  explicit Grid3(std::uint32_t q);
  std::uint32_t q() const { return q_; }
  std::size_t size() const { return count_; }
  bool test(const Vec3& p) const;
  void insert(const Vec3& p);

 private:
  std::uint64_t index(const Vec3& p) const;
  std::uint32_t q_;
  std::size_t count_ = 0;
  std::vector<std::uint64_t> w_;
};

// Union of one full line per direction; each line's containment re-verified.
// MissingDirection when the assignment skips a class.
Grid3 besicovitch_build(const PrimeField& f,
                        const std::map<Direction, Vec3>& assignment);

struct WolffReport {
  std::size_t max_per_plane = 0;
  Plane3 argmax;
};

// Exact max over all q(q^2+q+1) planes of the number of given lines lying in
// the plane; argmax is the scan-order first maximizer.
WolffReport wolff_axiom_check(const PrimeField& f, std::span<const ALine3> lines);

std::vector<ALine3> all_lines(const PrimeField& f);

// All lines meeting each of three pairwise disjoint lines, restricted to
// `universe` when given, sorted canonically. NotDisjoint otherwise.
std::vector<ALine3> lines_meeting_three(
    const PrimeField& f, const ALine3& l1, const ALine3& l2, const ALine3& l3,
    std::optional<std::span<const ALine3>> universe = std::nullopt);

// Form vanishing on every transversal of the three lines: a Quadric for a
// pairwise skew triple, the common plane of the first parallel pair (checked
// in order 12, 13, 23) otherwise. Intersecting inputs throw NotSkew. The
// quadric is the lex-least nonzero kernel vector of the 3q x 10 evaluation
// matrix.
std::variant<Quadric, Plane3> regulus_fit(const PrimeField& f, const ALine3& l1,
                                          const ALine3& l2, const ALine3& l3);

// Lines of L meeting the stem in exactly one point that is neither excluded
// line's intersection with the stem; never contains the stem itself.
std::vector<ALine3> hairbrush(const PrimeField& f, const ALine3& stem,
                              std::span<const ALine3> lines,
                              const std::pair<ALine3, ALine3>& excluded);

// Invertible affine map x -> m.x + t.
struct FrameMap {
  Mat3 m;
  Vec3 t{};

  Vec3 apply(const Vec3& p) const;
  ALine3 apply_line(const ALine3& l) const;
};

// Map carrying (l0, l_*, l1) onto the x-axis, the z-axis, and {(0,y,1)}.
// Requires l0, l1 skew and l_* meeting both; BadConfiguration otherwise.
FrameMap normalize_frame(const PrimeField& f, const ALine3& l0,
                         const ALine3& lstar, const ALine3& l1);

// For a line meeting the x-axis at (x,0,0), x != 0, and {(0,y,1)} at y != 0:
// the pair (1/x, 1/y). DegenerateIntersection otherwise.
std::pair<Elem, Elem> pi_map(const PrimeField& f, const ALine3& lstar2);

// For l = {(a(t-z), b(t-z), t)} with a, b != 0 and z != 0, 1: the plane curve
// 1 + (az)X + (bz-b)Y = 0 as a PLine (coefficients (az, bz-b, 1)).
// DegenerateLine otherwise.
PLine lambda_map(const PrimeField& f, const ALine3& l);

struct KakeyaReport {
  std::uint32_t q = 0;
  std::uint32_t trials = 0;
  std::uint64_t seed = 0;
  std::size_t min_size = 0;
  double reference = 0.0;  // q^{5/2}, context only
  std::vector<ALine3> best;
};

// Hill-climbing minimization of the Besicovitch union size over base-point
// assignments. Trial 0 starts from the all-through-origin cone, later trials
// from random assignments; BudgetExceeded for q > 13.
KakeyaReport kakeya_min_search(const PrimeField& f, std::uint32_t trials,
                               std::uint64_t seed);

// Line files: `d1 d2 d3 b1 b2 b3` per row; assignments use the same row shape
// keyed by canonical direction.
void write_lines(std::ostream& os, std::span<const ALine3> lines);
std::vector<ALine3> read_lines(std::istream& is, const PrimeField& f);
void write_assignment(std::ostream& os, const PrimeField& f,
                      const std::map<Direction, Vec3>& assignment);
std::map<Direction, Vec3> read_assignment(std::istream& is, const PrimeField& f);

}  // namespace fflab
