#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "fflab/fset.hpp"
#include "fflab/modmat.hpp"

namespace fflab {

// Projective point [x : y : z], stored normalized: first nonzero coordinate 1.
struct PPoint {
  std::uint32_t q = 0;
  Elem x = 0, y = 0, z = 0;

  bool operator==(const PPoint& o) const = default;
  bool operator<(const PPoint& o) const {
    return std::tie(x, y, z) < std::tie(o.x, o.y, o.z);
  }
  std::uint64_t key() const {
    return (std::uint64_t(x) * q + y) * q + z;
  }
};

// Projective line with coefficient triple (a, b, c), incidence ax+by+cz = 0,
// normalized the same way. (0,0,1) is the line at infinity.
struct PLine {
  std::uint32_t q = 0;
  Elem a = 0, b = 0, c = 0;

  bool operator==(const PLine& o) const = default;
  bool operator<(const PLine& o) const {
    return std::tie(a, b, c) < std::tie(o.a, o.b, o.c);
  }
  std::uint64_t key() const {
    return (std::uint64_t(a) * q + b) * q + c;
  }
};

PPoint make_ppoint(const PrimeField& f, Elem x, Elem y, Elem z);
PLine make_pline(const PrimeField& f, Elem a, Elem b, Elem c);
// Affine embeddings: (x, y) -> [x : y : 1]; line ax + by + c = 0.
PPoint affine_point(const PrimeField& f, Elem x, Elem y);
PLine affine_line(const PrimeField& f, Elem a, Elem b, Elem c);
PLine line_at_infinity(const PrimeField& f);

bool incident(const PPoint& p, const PLine& l);  // FieldMismatch on q clash

std::vector<PPoint> all_affine_points(const PrimeField& f);
std::vector<PLine> all_affine_lines(const PrimeField& f);  // q^2 + q of them
std::vector<PPoint> all_projective_points(const PrimeField& f);
std::vector<PLine> all_projective_lines(const PrimeField& f);
std::vector<PPoint> points_on_line(const PrimeField& f, const PLine& l);
std::vector<PLine> lines_through_point(const PrimeField& f, const PPoint& p);

// Exact incidence count over the distinct members of P and L. Uses the naive
// pair scan when |P||L| <= 10^7; otherwise buckets by hashed pencils.
std::uint64_t count_incidences(std::span<const PPoint> pts,
                               std::span<const PLine> lines);

struct EasyBoundReport {
  std::uint64_t incidences = 0;
  std::size_t n_points = 0, n_lines = 0;
  // Exact Cauchy-Schwarz chains in both orientations:
  //   I^2 <= 2 |P| |L|^2 + I |P|   and   I^2 <= 2 |L| |P|^2 + I |L|
  bool holds_primal = false;
  bool holds_dual = false;
  double bound_value = 0;  // min(|P|^(1/2)|L| + |P|, |L|^(1/2)|P| + |L|)
};
EasyBoundReport easy_bound_check(std::span<const PPoint> pts,
                                 std::span<const PLine> lines);

struct ElekesInstance {
  std::vector<PPoint> points;  // (A+A) x (A*A)
  std::vector<PLine> lines;    // y = b(x - a), (a, b) in A^2
  bool slope_degenerate = false;  // true when 0 in A collapses b = 0 lines
};
ElekesInstance elekes_construct(const FSet& a);  // EmptyInput

// Projective transform: points map by M, lines by the inverse transpose.
std::pair<std::vector<PPoint>, std::vector<PLine>> apply_proj(
    const Mat3& m, std::span<const PPoint> pts, std::span<const PLine> lines);

// Keeps indices b with mu(b) >= X / (2|B|), compared exactly. The retained
// mass is then > X/2 whenever the total mass is >= X (MassTooSmall otherwise).
std::vector<std::size_t> popular_restrict(std::span<const std::int64_t> mu,
                                          std::int64_t x);

// Bipartite multiplicity relation with cached degree vectors.
struct Relation {
  std::size_t left_size = 0, right_size = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  std::vector<std::int64_t> lambda;  // per left vertex
  std::vector<std::int64_t> mu;      // per right vertex

  static Relation from_edges(std::size_t nl, std::size_t nr,
                             std::vector<std::pair<std::uint32_t, std::uint32_t>> e);
};

struct CsReport {
  std::uint64_t pairs = 0;  // sum of mu
  std::uint64_t paths = 0;  // sum of mu(mu-1)
  bool holds = false;       // |B| (paths + pairs) >= pairs^2, exact
};
CsReport cs_count(const Relation& r);

enum class StGenerator { Uniform, Elekes, Grid };

struct StReport {
  std::uint32_t q = 0;
  std::uint64_t n = 0;
  StGenerator generator = StGenerator::Uniform;
  std::uint32_t trials = 0;
  std::uint64_t seed = 0;
  std::uint64_t max_incidences = 0;
  double empirical_eps = 0;  // 3/2 - log I / log N at the max; 0 when N < 2
};
// Seeded instances with exactly N distinct points and N distinct lines.
StReport st_experiment(const PrimeField& f, std::uint64_t n, StGenerator gen,
                       std::uint32_t trials, std::uint64_t seed);

// Instance file format: lines "p x y z" and "l a b c", normalized triples.
void write_instance(std::ostream& os, std::span<const PPoint> pts,
                    std::span<const PLine> lines);
std::pair<std::vector<PPoint>, std::vector<PLine>> read_instance(
    std::istream& is, const PrimeField& f);

const char* st_generator_name(StGenerator g);
StGenerator st_generator_from_name(const std::string& name);

}  // namespace fflab
