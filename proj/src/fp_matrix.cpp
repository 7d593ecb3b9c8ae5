#include "pclab/fp_matrix.hpp"

#include <cassert>
#include <stdexcept>

namespace pclab::fp {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::uint32_t p)
    : rows_(rows), cols_(cols), p_(p), data_(rows * cols, 0) {
  if (p < 2 || p > 255) throw std::invalid_argument("fp::Matrix: prime out of range");
}

Matrix Matrix::identity(std::size_t n, std::uint32_t p) {
  Matrix m(n, n, p);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
  return m;
}

Matrix Matrix::zero(std::size_t rows, std::size_t cols, std::uint32_t p) { return Matrix(rows, cols, p); }

Matrix Matrix::operator*(const Matrix& o) const {
  assert(cols_ == o.rows_ && p_ == o.p_);
  Matrix r(rows_, o.cols_, p_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const std::uint32_t a = (*this)(i, k);
      if (!a) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) {
        std::uint32_t v = r(i, j) + a * o(k, j);
        r.data_[i * r.cols_ + j] = static_cast<std::uint8_t>(v % p_);
      }
    }
  }
  return r;
}

Matrix Matrix::operator+(const Matrix& o) const {
  assert(rows_ == o.rows_ && cols_ == o.cols_ && p_ == o.p_);
  Matrix r(rows_, cols_, p_);
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = static_cast<std::uint8_t>((data_[i] + o.data_[i]) % p_);
  return r;
}

Matrix Matrix::operator-(const Matrix& o) const {
  assert(rows_ == o.rows_ && cols_ == o.cols_ && p_ == o.p_);
  Matrix r(rows_, cols_, p_);
  for (std::size_t i = 0; i < data_.size(); ++i)
    r.data_[i] = static_cast<std::uint8_t>((data_[i] + p_ - o.data_[i]) % p_);
  return r;
}

Matrix Matrix::pow(std::uint64_t e) const {
  assert(rows_ == cols_);
  Matrix acc = identity(rows_, p_);
  Matrix base = *this;
  while (e) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

bool Matrix::isIdentity() const {
  if (rows_ != cols_) return false;
  return *this == identity(rows_, p_);
}

bool Matrix::isZero() const {
  for (auto v : data_)
    if (v) return false;
  return true;
}

std::uint32_t invMod(std::uint32_t a, std::uint32_t p) {
  // Fermat; p prime.
  std::uint32_t r = 1, b = a % p;
  std::uint32_t e = p - 2;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

Matrix Matrix::rref() const {
  Matrix m = *this;
  std::size_t lead = 0;
  for (std::size_t r = 0; r < rows_ && lead < cols_; ++r) {
    std::size_t i = r;
    while (i < rows_ && m(i, lead) == 0) ++i;
    if (i == rows_) {
      ++lead;
      --r;
      continue;
    }
    if (i != r)
      for (std::size_t c = 0; c < cols_; ++c) std::swap(m.data_[i * cols_ + c], m.data_[r * cols_ + c]);
    const std::uint32_t pivInv = invMod(m(r, lead), p_);
    for (std::size_t c = 0; c < cols_; ++c) m.data_[r * cols_ + c] = static_cast<std::uint8_t>(m(r, c) * pivInv % p_);
    for (std::size_t rr = 0; rr < rows_; ++rr) {
      if (rr == r) continue;
      const std::uint32_t f = m(rr, lead);
      if (!f) continue;
      for (std::size_t c = 0; c < cols_; ++c)
        m.data_[rr * cols_ + c] = static_cast<std::uint8_t>((m(rr, c) + (p_ - f) * m(r, c)) % p_);
    }
    ++lead;
  }
  return m;
}

std::size_t Matrix::rank() const {
  Matrix m = rref();
  std::size_t rk = 0;
  for (std::size_t r = 0; r < rows_; ++r) {
    bool nz = false;
    for (std::size_t c = 0; c < cols_; ++c)
      if (m(r, c)) {
        nz = true;
        break;
      }
    if (nz) ++rk;
  }
  return rk;
}

Matrix Matrix::nullspaceBasis() const {
  Matrix m = rref();
  std::vector<std::size_t> pivotCol;
  std::vector<bool> isPivot(cols_, false);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      if (m(r, c)) {
        pivotCol.push_back(c);
        isPivot[c] = true;
        break;
      }
    }
  }
  Matrix basis(0, cols_, p_);
  for (std::size_t free = 0; free < cols_; ++free) {
    if (isPivot[free]) continue;
    std::vector<std::uint8_t> v(cols_, 0);
    v[free] = 1;
    for (std::size_t r = 0; r < pivotCol.size(); ++r)
      v[pivotCol[r]] = static_cast<std::uint8_t>((p_ - m(r, free)) % p_);
    basis.appendRow(v);
  }
  return basis;
}

Matrix Matrix::inverse() const {
  if (rows_ != cols_) throw std::invalid_argument("inverse: not square");
  Matrix aug(rows_, 2 * cols_, p_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) aug.set(r, c, (*this)(r, c));
    aug.set(r, cols_ + r, 1);
  }
  aug = aug.rref();
  for (std::size_t i = 0; i < rows_; ++i)
    if (aug(i, i) != 1) throw std::invalid_argument("inverse: singular matrix");
  Matrix inv(rows_, cols_, p_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) inv.set(r, c, aug(r, cols_ + c));
  return inv;
}

bool Matrix::rowSpaceContains(const Matrix& o) const {
  assert(cols_ == o.cols_ && p_ == o.p_);
  Matrix stacked(0, cols_, p_);
  for (std::size_t r = 0; r < rows_; ++r) {
    std::vector<std::uint8_t> row(data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_);
    stacked.appendRow(row);
  }
  const std::size_t base = stacked.rank();
  for (std::size_t r = 0; r < o.rows_; ++r) {
    std::vector<std::uint8_t> row(o.data_.begin() + r * cols_, o.data_.begin() + (r + 1) * cols_);
    stacked.appendRow(row);
  }
  return stacked.rank() == base;
}

bool Matrix::sameRowSpace(const Matrix& o) const { return rowSpaceContains(o) && o.rowSpaceContains(*this); }

void Matrix::appendRow(const std::vector<std::uint8_t>& row) {
  assert(row.size() == cols_ || rows_ == 0);
  if (rows_ == 0 && cols_ == 0) cols_ = row.size();
  data_.insert(data_.end(), row.begin(), row.end());
  ++rows_;
}

Matrix randomInvertible(std::size_t n, std::uint32_t p, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint32_t> dist(0, p - 1);
  for (;;) {
    Matrix m(n, n, p);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m.set(i, j, dist(rng));
    if (m.rank() == n) return m;
  }
}

Matrix jordanUnipotent(const std::vector<std::size_t>& blockSizes, std::uint32_t p) {
  std::size_t n = 0;
  for (auto s : blockSizes) n += s;
  Matrix m = Matrix::identity(n, p);
  std::size_t off = 0;
  for (auto s : blockSizes) {
    for (std::size_t i = 0; i + 1 < s; ++i) m.set(off + i, off + i + 1, 1);
    off += s;
  }
  return m;
}

}  // namespace pclab::fp
