#include "fflab/modmat.hpp"

namespace fflab {

std::size_t ModMat::rref() {
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols_ && rank < rows_; ++col) {
    std::size_t pivot = rank;
    while (pivot < rows_ && at(pivot, col) == 0) ++pivot;
    if (pivot == rows_) continue;
    for (std::size_t c = 0; c < cols_; ++c)
      std::swap(at(pivot, c), at(rank, c));
    const Elem inv = f_.inv(at(rank, col));
    for (std::size_t c = col; c < cols_; ++c)
      at(rank, c) = f_.mul(at(rank, c), inv);
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == rank || at(r, col) == 0) continue;
      const Elem factor = at(r, col);
      for (std::size_t c = col; c < cols_; ++c)
        at(r, c) = f_.sub(at(r, c), f_.mul(factor, at(rank, c)));
    }
    ++rank;
  }
  return rank;
}

std::vector<std::vector<Elem>> ModMat::nullspace() const {
  ModMat r = *this;
  const std::size_t rank = r.rref();
  // Locate pivot columns.
  std::vector<std::size_t> pivot_col(rank);
  std::vector<bool> is_pivot(cols_, false);
  for (std::size_t row = 0, col = 0; row < rank; ++row) {
    while (col < cols_ && r.at(row, col) == 0) ++col;
    pivot_col[row] = col;
    is_pivot[col] = true;
  }
  std::vector<std::vector<Elem>> basis;
  for (std::size_t free = 0; free < cols_; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Elem> v(cols_, 0);
    v[free] = 1;
    for (std::size_t row = 0; row < rank; ++row)
      v[pivot_col[row]] = f_.neg(r.at(row, free));
    basis.push_back(std::move(v));
  }
  return basis;
}

Mat3 Mat3::identity(const PrimeField& f) {
  Mat3 out{f, {}};
  for (int i = 0; i < 3; ++i) out.m[i][i] = 1;
  return out;
}

Vec3 Mat3::apply(const Vec3& v) const {
  Vec3 out{};
  for (int r = 0; r < 3; ++r) {
    std::uint64_t acc = 0;
    for (int c = 0; c < 3; ++c) acc += std::uint64_t(m[r][c]) * v[c];
    out[r] = static_cast<Elem>(acc % f.q());
  }
  return out;
}

Mat3 Mat3::mul(const Mat3& o) const {
  Mat3 out{f, {}};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      std::uint64_t acc = 0;
      for (int k = 0; k < 3; ++k) acc += std::uint64_t(m[r][k]) * o.m[k][c];
      out.m[r][c] = static_cast<Elem>(acc % f.q());
    }
  return out;
}

Elem Mat3::det() const {
  const auto& a = m;
  const Elem t0 = f.mul(a[0][0], f.sub(f.mul(a[1][1], a[2][2]), f.mul(a[1][2], a[2][1])));
  const Elem t1 = f.mul(a[0][1], f.sub(f.mul(a[1][0], a[2][2]), f.mul(a[1][2], a[2][0])));
  const Elem t2 = f.mul(a[0][2], f.sub(f.mul(a[1][0], a[2][1]), f.mul(a[1][1], a[2][0])));
  return f.add(f.sub(t0, t1), t2);
}

Mat3 Mat3::inverse() const {
  const Elem d = det();
  if (d == 0) throw SingularMatrix("3x3 inverse of singular matrix");
  const Elem di = f.inv(d);
  // Adjugate formula.
  auto minor2 = [&](int r0, int c0, int r1, int c1) {
    return f.sub(f.mul(m[r0][c0], m[r1][c1]), f.mul(m[r0][c1], m[r1][c0]));
  };
  Mat3 out{f, {}};
  out.m[0][0] = f.mul(di, minor2(1, 1, 2, 2));
  out.m[0][1] = f.mul(di, f.neg(minor2(0, 1, 2, 2)));
  out.m[0][2] = f.mul(di, minor2(0, 1, 1, 2));
  out.m[1][0] = f.mul(di, f.neg(minor2(1, 0, 2, 2)));
  out.m[1][1] = f.mul(di, minor2(0, 0, 2, 2));
  out.m[1][2] = f.mul(di, f.neg(minor2(0, 0, 1, 2)));
  out.m[2][0] = f.mul(di, minor2(1, 0, 2, 1));
  out.m[2][1] = f.mul(di, f.neg(minor2(0, 0, 2, 1)));
  out.m[2][2] = f.mul(di, minor2(0, 0, 1, 1));
  return out;
}

Mat3 Mat3::inverse_transpose() const {
  Mat3 inv = inverse();
  Mat3 out{f, {}};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) out.m[r][c] = inv.m[c][r];
  return out;
}

}  // namespace fflab
