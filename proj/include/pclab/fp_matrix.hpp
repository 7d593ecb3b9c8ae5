#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace pclab::fp {

// Dense matrix over the prime field F_p, p < 256. Entries are stored
// row-major as canonical residues in [0, p).
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, std::uint32_t p);

  static Matrix identity(std::size_t n, std::uint32_t p);
  static Matrix zero(std::size_t rows, std::size_t cols, std::uint32_t p);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::uint32_t prime() const { return p_; }

  std::uint8_t operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  void set(std::size_t r, std::size_t c, std::uint32_t v) { data_[r * cols_ + c] = static_cast<std::uint8_t>(v % p_); }

  const std::vector<std::uint8_t>& data() const { return data_; }

  bool operator==(const Matrix& o) const = default;

  Matrix operator*(const Matrix& o) const;
  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix pow(std::uint64_t e) const;

  bool isIdentity() const;
  bool isZero() const;

  std::size_t rank() const;
  Matrix rref() const;
  // Basis of the right nullspace, one solution per row.
  Matrix nullspaceBasis() const;
  // Inverse for square full-rank matrices; throws std::invalid_argument otherwise.
  Matrix inverse() const;

  // Row-space comparison (subspace equality via RREF).
  bool sameRowSpace(const Matrix& o) const;
  // True if every row of `o` lies in the row space of *this.
  bool rowSpaceContains(const Matrix& o) const;

  void appendRow(const std::vector<std::uint8_t>& row);

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::uint32_t p_ = 2;
  std::vector<std::uint8_t> data_;
};

std::uint32_t invMod(std::uint32_t a, std::uint32_t p);

// Uniformly random invertible matrix, by rejection.
Matrix randomInvertible(std::size_t n, std::uint32_t p, std::mt19937_64& rng);

// Block-diagonal unipotent matrix with the given Jordan block sizes (eigenvalue 1).
Matrix jordanUnipotent(const std::vector<std::size_t>& blockSizes, std::uint32_t p);

}  // namespace pclab::fp
