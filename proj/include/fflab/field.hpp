#pragma once

#include <cstdint>

#include "fflab/errors.hpp"

namespace fflab {

// A residue in [0, q). Plain integer on purpose: every operation goes through
// the owning PrimeField, which keeps the hot loops free of wrapper overhead.
using Elem = std::uint32_t;

bool is_prime(std::uint64_t n);

// Arithmetic context for Z/qZ, q prime. Values are immutable and cheap to copy.
class PrimeField {
 public:
  // Desk-scale cap: subsets are stored as q-bit vectors, so q stays moderate.
  static constexpr std::uint32_t kMaxQ = 1u << 20;

  explicit PrimeField(std::uint32_t q);

  std::uint32_t q() const { return q_; }

  Elem reduce(std::int64_t v) const {
    std::int64_t r = v % static_cast<std::int64_t>(q_);
    if (r < 0) r += q_;
    return static_cast<Elem>(r);
  }
  Elem add(Elem a, Elem b) const {
    std::uint32_t s = a + b;
    return s >= q_ ? s - q_ : s;
  }
  Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + q_ - b; }
  Elem neg(Elem a) const { return a == 0 ? 0 : q_ - a; }
  Elem mul(Elem a, Elem b) const {
    return static_cast<Elem>(std::uint64_t(a) * b % q_);
  }
  Elem pow(Elem a, std::uint64_t e) const;
  // Multiplicative inverse; x = 0 raises ZeroInverse.
  Elem inv(Elem a) const;
  // Euler criterion: +1 for nonzero squares, -1 for non-squares, 0 at 0.
  int legendre(Elem a) const;

  bool operator==(const PrimeField& o) const { return q_ == o.q_; }
  bool operator!=(const PrimeField& o) const { return q_ != o.q_; }

 private:
  std::uint32_t q_;
};

PrimeField make_field(std::uint32_t q);

// Raises FieldMismatch unless both contexts share the same modulus.
void check_same_field(const PrimeField& a, const PrimeField& b);

}  // namespace fflab
