#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "fflab/field.hpp"

namespace fflab {

// Row-major dense matrix over Z/qZ; small sizes only (regulus fits are 3q x 10).
class ModMat {
 public:
  ModMat(const PrimeField& f, std::size_t rows, std::size_t cols)
      : f_(f), rows_(rows), cols_(cols), a_(rows * cols, 0) {}

  Elem& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  Elem at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const PrimeField& field() const { return f_; }

  // In-place reduced row echelon form; returns the rank. Pivoting is
  // deterministic: first nonzero entry scanning rows top-down.
  std::size_t rref();

  // Basis of the right kernel, one vector per free column, in ascending free
  // column order (the standard RREF parameterization).
  std::vector<std::vector<Elem>> nullspace() const;

 private:
  PrimeField f_;
  std::size_t rows_, cols_;
  std::vector<Elem> a_;
};

using Vec3 = std::array<Elem, 3>;

struct Mat3 {
  PrimeField f;
  // m[r][c]
  std::array<std::array<Elem, 3>, 3> m{};

  static Mat3 identity(const PrimeField& f);
  Vec3 apply(const Vec3& v) const;
  Mat3 mul(const Mat3& o) const;
  Elem det() const;
  Mat3 inverse() const;            // SingularMatrix when det = 0
  Mat3 inverse_transpose() const;  // line action for projective maps
};

}  // namespace fflab
