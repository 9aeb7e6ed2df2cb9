#include "tncode/gf2.hpp"

#include <algorithm>
#include <stdexcept>

namespace tncode {

Gf2Matrix::Gf2Matrix(size_t rows, size_t cols)
    : rows_(rows), cols_(cols), wpr_((cols + 63) / 64), data_(rows * wpr_, 0) {}

void Gf2Matrix::xor_rows(size_t dst, size_t src) {
  uint64_t* d = data_.data() + dst * wpr_;
  const uint64_t* s = data_.data() + src * wpr_;
  for (size_t w = 0; w < wpr_; ++w) d[w] ^= s[w];
}

void Gf2Matrix::swap_rows(size_t a, size_t b) {
  if (a == b) return;
  for (size_t w = 0; w < wpr_; ++w)
    std::swap(data_[a * wpr_ + w], data_[b * wpr_ + w]);
}

void Gf2Matrix::append_row() {
  data_.resize((rows_ + 1) * wpr_, 0);
  ++rows_;
}

std::vector<size_t> Gf2Matrix::rref() {
  std::vector<size_t> pivots;
  size_t r = 0;
  for (size_t c = 0; c < cols_ && r < rows_; ++c) {
    size_t p = r;
    while (p < rows_ && !get(p, c)) ++p;
    if (p == rows_) continue;
    swap_rows(r, p);
    for (size_t i = 0; i < rows_; ++i)
      if (i != r && get(i, c)) xor_rows(i, r);
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

size_t Gf2Matrix::rank() const {
  Gf2Matrix m = *this;
  return m.rref().size();
}

Gf2Matrix Gf2Matrix::kernel_basis() const {
  Gf2Matrix m = *this;
  std::vector<size_t> pivots = m.rref();
  std::vector<bool> is_pivot(cols_, false);
  for (size_t c : pivots) is_pivot[c] = true;

  size_t nfree = cols_ - pivots.size();
  Gf2Matrix basis(nfree, cols_);
  size_t k = 0;
  for (size_t c = 0; c < cols_; ++c) {
    if (is_pivot[c]) continue;
    basis.set(k, c, true);
    for (size_t i = 0; i < pivots.size(); ++i)
      if (m.get(i, c)) basis.set(k, pivots[i], true);
    ++k;
  }
  return basis;
}

std::optional<std::vector<uint8_t>> Gf2Matrix::solve(const std::vector<uint8_t>& b) const {
  if (b.size() != rows_) throw std::invalid_argument("rhs length mismatch");
  // Augmented elimination over [M | b].
  Gf2Matrix m(rows_, cols_ + 1);
  for (size_t r = 0; r < rows_; ++r) {
    for (size_t w = 0; w < wpr_; ++w) {
      const uint64_t word = data_[r * wpr_ + w];
      if (!word) continue;
      for (size_t bit = 0; bit < 64; ++bit)
        if ((word >> bit) & 1) m.set(r, w * 64 + bit, true);
    }
    if (b[r]) m.set(r, cols_, true);
  }
  std::vector<size_t> pivots;
  size_t r = 0;
  for (size_t c = 0; c < cols_ && r < rows_; ++c) {
    size_t p = r;
    while (p < rows_ && !m.get(p, c)) ++p;
    if (p == rows_) continue;
    m.swap_rows(r, p);
    for (size_t i = 0; i < rows_; ++i)
      if (i != r && m.get(i, c)) m.xor_rows(i, r);
    pivots.push_back(c);
    ++r;
  }
  for (size_t i = r; i < rows_; ++i)
    if (m.get(i, cols_)) return std::nullopt;
  std::vector<uint8_t> v(cols_, 0);
  for (size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = m.get(i, cols_);
  return v;
}

void Gf2Matrix::reduce_vector(std::vector<uint8_t>& v, const std::vector<size_t>& pivots) const {
  if (v.size() != cols_) throw std::invalid_argument("vector length mismatch");
  for (size_t i = 0; i < pivots.size(); ++i) {
    if (!v[pivots[i]]) continue;
    for (size_t c = 0; c < cols_; ++c)
      if (get(i, c)) v[c] ^= 1;
  }
}

}  // namespace tncode
