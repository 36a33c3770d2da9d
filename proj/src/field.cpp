#include "fflab/field.hpp"

#include <string>

namespace fflab {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  if (n % 3 == 0) return n == 3;
  for (std::uint64_t d = 5; d * d <= n; d += 6) {
    if (n % d == 0 || n % (d + 2) == 0) return false;
  }
  return true;
}

PrimeField::PrimeField(std::uint32_t q) : q_(q) {
  if (q > kMaxQ) {
    throw Error("modulus " + std::to_string(q) + " exceeds desk-scale cap " +
                std::to_string(kMaxQ));
  }
  if (!is_prime(q)) throw NotPrime("not a prime modulus: " + std::to_string(q));
}

Elem PrimeField::pow(Elem a, std::uint64_t e) const {
  std::uint64_t base = a % q_;
  std::uint64_t acc = 1 % q_;
  while (e > 0) {
    if (e & 1) acc = acc * base % q_;
    base = base * base % q_;
    e >>= 1;
  }
  return static_cast<Elem>(acc);
}

Elem PrimeField::inv(Elem a) const {
  if (a % q_ == 0) throw ZeroInverse("inverse of 0 mod " + std::to_string(q_));
  return pow(a, q_ - 2);
}

int PrimeField::legendre(Elem a) const {
  a %= q_;
  if (a == 0) return 0;
  Elem r = pow(a, (q_ - 1) / 2);
  return r == 1 ? 1 : -1;
}

PrimeField make_field(std::uint32_t q) { return PrimeField(q); }

void check_same_field(const PrimeField& a, const PrimeField& b) {
  if (a != b) {
    throw FieldMismatch("moduli differ: " + std::to_string(a.q()) + " vs " +
                        std::to_string(b.q()));
  }
}

}  // namespace fflab
