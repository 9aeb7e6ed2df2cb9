#pragma once

#include <cstdint>
#include <cstddef>
#include <optional>
#include <vector>

namespace tncode {

// Dense GF(2) matrix with 64-bit packed rows. Row/column indices are 0-based.
class Gf2Matrix {
public:
  Gf2Matrix() = default;
  Gf2Matrix(size_t rows, size_t cols);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }

  bool get(size_t r, size_t c) const {
    return (data_[r * wpr_ + (c >> 6)] >> (c & 63)) & 1;
  }
  void set(size_t r, size_t c, bool v) {
    uint64_t m = uint64_t{1} << (c & 63);
    if (v) data_[r * wpr_ + (c >> 6)] |= m; else data_[r * wpr_ + (c >> 6)] &= ~m;
  }
  void xor_rows(size_t dst, size_t src);
  void swap_rows(size_t a, size_t b);
  void append_row();

  // In-place reduced row echelon form; returns pivot column per pivot row.
  std::vector<size_t> rref();
  size_t rank() const;

  // Basis of {v : M v = 0}; each returned row is one basis vector of length cols().
  Gf2Matrix kernel_basis() const;

  // One particular solution of M v = b, if any.
  std::optional<std::vector<uint8_t>> solve(const std::vector<uint8_t>& b) const;

  // Reduces v (length cols()) modulo the row space; *this must be in RREF with
  // the pivot list returned by rref().
  void reduce_vector(std::vector<uint8_t>& v, const std::vector<size_t>& pivots) const;

private:
  size_t rows_ = 0, cols_ = 0, wpr_ = 0;
  std::vector<uint64_t> data_;
};

}  // namespace tncode
