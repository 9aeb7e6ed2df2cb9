#include <doctest.h>

#include <random>

#include "tncode/gf2.hpp"

using namespace tncode;

namespace {

std::vector<uint8_t> mat_vec(const Gf2Matrix& m, const std::vector<uint8_t>& v) {
  std::vector<uint8_t> out(m.rows(), 0);
  for (size_t r = 0; r < m.rows(); ++r) {
    uint8_t acc = 0;
    for (size_t c = 0; c < m.cols(); ++c) acc ^= static_cast<uint8_t>(m.get(r, c) & (v[c] & 1));
    out[r] = acc;
  }
  return out;
}

Gf2Matrix random_matrix(size_t rows, size_t cols, uint64_t seed) {
  std::mt19937_64 rng(seed);
  Gf2Matrix m(rows, cols);
  for (size_t r = 0; r < rows; ++r)
    for (size_t c = 0; c < cols; ++c) m.set(r, c, rng() & 1);
  return m;
}

}  // namespace

TEST_SUITE("gf2") {

TEST_CASE("rref of a known matrix") {
  // rows: 1101, 0110, 1011 -> rank 2 (row3 = row1 + row2)
  Gf2Matrix m(3, 4);
  auto fill = [&](size_t r, std::initializer_list<int> bits) {
    size_t c = 0;
    for (int b : bits) m.set(r, c++, b != 0);
  };
  fill(0, {1, 1, 0, 1});
  fill(1, {0, 1, 1, 0});
  fill(2, {1, 0, 1, 1});
  std::vector<size_t> pivots = m.rref();
  CHECK(pivots == std::vector<size_t>{0, 1});
  CHECK(m.rank() == 2);
  // RREF rows: 1011, 0110
  CHECK(m.get(0, 0)); CHECK_FALSE(m.get(0, 1)); CHECK(m.get(0, 2)); CHECK(m.get(0, 3));
  CHECK_FALSE(m.get(1, 0)); CHECK(m.get(1, 1)); CHECK(m.get(1, 2)); CHECK_FALSE(m.get(1, 3));
  for (size_t c = 0; c < 4; ++c) CHECK_FALSE(m.get(2, c));
}

TEST_CASE("kernel basis annihilated and complete") {
  Gf2Matrix m = random_matrix(20, 30, 11);
  size_t rank = [&] { Gf2Matrix c = m; c.rref(); return c.rank(); }();
  Gf2Matrix ker = m.kernel_basis();
  CHECK(ker.rows() == 30 - rank);
  CHECK(ker.cols() == 30);
  for (size_t i = 0; i < ker.rows(); ++i) {
    std::vector<uint8_t> v(30);
    for (size_t c = 0; c < 30; ++c) v[c] = ker.get(i, c);
    for (uint8_t b : mat_vec(m, v)) CHECK(b == 0);
  }
  // Basis vectors are independent.
  Gf2Matrix kc = ker;
  kc.rref();
  CHECK(kc.rank() == ker.rows());
}

TEST_CASE("kernel of injective map is empty") {
  Gf2Matrix m(3, 2);
  m.set(0, 0, true);
  m.set(1, 1, true);
  m.set(2, 0, true);
  m.set(2, 1, true);
  CHECK(m.kernel_basis().rows() == 0);
}

TEST_CASE("solve round trip and unsolvable detection") {
  Gf2Matrix m = random_matrix(12, 9, 5);
  std::mt19937_64 rng(17);
  for (int iter = 0; iter < 20; ++iter) {
    std::vector<uint8_t> x(9);
    for (auto& b : x) b = rng() & 1;
    std::vector<uint8_t> rhs = mat_vec(m, x);
    auto sol = m.solve(rhs);
    REQUIRE(sol.has_value());
    CHECK(mat_vec(m, *sol) == rhs);
  }
  // 12 rows, rank <= 9 < 12: some targets are unreachable.
  size_t misses = 0;
  for (int iter = 0; iter < 50; ++iter) {
    std::vector<uint8_t> rhs(12);
    for (auto& b : rhs) b = rng() & 1;
    if (!m.solve(rhs)) ++misses;
  }
  CHECK(misses > 0);
}

TEST_CASE("reduce_vector lands in canonical coset representative") {
  Gf2Matrix m = random_matrix(6, 10, 23);
  Gf2Matrix r = m;
  std::vector<size_t> pivots = r.rref();
  std::mt19937_64 rng(29);
  for (int iter = 0; iter < 20; ++iter) {
    std::vector<uint8_t> v(10);
    for (auto& b : v) b = rng() & 1;
    std::vector<uint8_t> red = v;
    r.reduce_vector(red, pivots);
    // Idempotent.
    std::vector<uint8_t> red2 = red;
    r.reduce_vector(red2, pivots);
    CHECK(red2 == red);
    // v and red differ by a row-space element: reducing the difference gives 0.
    std::vector<uint8_t> diff(10);
    for (size_t c = 0; c < 10; ++c) diff[c] = v[c] ^ red[c];
    r.reduce_vector(diff, pivots);
    CHECK(diff == std::vector<uint8_t>(10, 0));
    // Representative has no support on pivot columns.
    for (size_t pc : pivots) CHECK(red[pc] == 0);
  }
}

TEST_CASE("append_row grows the matrix") {
  Gf2Matrix m(1, 3);
  m.set(0, 1, true);
  m.append_row();
  CHECK(m.rows() == 2);
  m.set(1, 2, true);
  CHECK(m.get(0, 1));
  CHECK(m.get(1, 2));
  CHECK_FALSE(m.get(1, 1));
}

TEST_CASE("xor and swap rows") {
  Gf2Matrix m(2, 70);
  m.set(0, 0, true);
  m.set(0, 69, true);
  m.set(1, 69, true);
  m.xor_rows(0, 1);
  CHECK(m.get(0, 0));
  CHECK_FALSE(m.get(0, 69));
  m.swap_rows(0, 1);
  CHECK(m.get(1, 0));
  CHECK(m.get(0, 69));
}

}  // TEST_SUITE
