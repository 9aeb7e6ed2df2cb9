#include "tncode/pauli.hpp"

#include <bit>
#include <stdexcept>

namespace tncode {

namespace {
constexpr char kChars[4] = {'I', 'X', 'Y', 'Z'};

// Phaseless products in label space; XOR of (x,z) bit pairs.
constexpr uint8_t kMul[4][4] = {
    {0, 1, 2, 3},
    {1, 0, 3, 2},
    {2, 3, 0, 1},
    {3, 2, 1, 0},
};
}  // namespace

char pauli_char(Pauli p) { return kChars[static_cast<uint8_t>(p)]; }

Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I': return Pauli::I;
    case 'X': return Pauli::X;
    case 'Y': return Pauli::Y;
    case 'Z': return Pauli::Z;
    default: throw std::invalid_argument(std::string("bad Pauli character '") + c + "'");
  }
}

Pauli pauli_mul(Pauli a, Pauli b) {
  return static_cast<Pauli>(kMul[static_cast<uint8_t>(a)][static_cast<uint8_t>(b)]);
}

PauliString::PauliString(size_t n) : n_(n), xw_((n + 63) / 64, 0), zw_((n + 63) / 64, 0) {}

PauliString PauliString::parse(const std::string& text) {
  PauliString p(text.size());
  for (size_t i = 0; i < text.size(); ++i) p.set(i, pauli_from_char(text[i]));
  return p;
}

PauliString PauliString::from_labels(const std::vector<Pauli>& labels) {
  PauliString p(labels.size());
  for (size_t i = 0; i < labels.size(); ++i) p.set(i, labels[i]);
  return p;
}

Pauli PauliString::get(size_t i) const {
  if (i >= n_) throw std::out_of_range("qubit index out of range");
  uint8_t xb = x(i), zb = z(i);
  return static_cast<Pauli>(xb && zb ? 2 : xb ? 1 : zb ? 3 : 0);
}

void PauliString::set(size_t i, Pauli p) {
  if (i >= n_) throw std::out_of_range("qubit index out of range");
  uint8_t v = static_cast<uint8_t>(p);
  put(xw_, i, v == 1 || v == 2);
  put(zw_, i, v == 2 || v == 3);
}

PauliString PauliString::operator*(const PauliString& other) const {
  PauliString r = *this;
  r *= other;
  return r;
}

PauliString& PauliString::operator*=(const PauliString& other) {
  if (other.n_ != n_) throw std::invalid_argument("length mismatch in Pauli product");
  for (size_t w = 0; w < xw_.size(); ++w) {
    xw_[w] ^= other.xw_[w];
    zw_[w] ^= other.zw_[w];
  }
  return *this;
}

bool PauliString::commutes_with(const PauliString& other) const {
  if (other.n_ != n_) throw std::invalid_argument("length mismatch in commutation check");
  uint64_t acc = 0;
  for (size_t w = 0; w < xw_.size(); ++w) {
    acc ^= xw_[w] & other.zw_[w];
    acc ^= zw_[w] & other.xw_[w];
  }
  return (std::popcount(acc) & 1) == 0;
}

size_t PauliString::weight() const {
  size_t c = 0;
  for (size_t w = 0; w < xw_.size(); ++w) c += std::popcount(xw_[w] | zw_[w]);
  return c;
}

bool PauliString::is_identity() const {
  for (size_t w = 0; w < xw_.size(); ++w)
    if (xw_[w] | zw_[w]) return false;
  return true;
}

PauliString PauliString::restricted_to(const std::vector<size_t>& qubits) const {
  PauliString r(qubits.size());
  for (size_t j = 0; j < qubits.size(); ++j) {
    if (qubits[j] >= n_) throw std::out_of_range("restriction qubit out of range");
    put(r.xw_, j, x(qubits[j]));
    put(r.zw_, j, z(qubits[j]));
  }
  return r;
}

PauliString PauliString::embedded(const std::vector<size_t>& qubits, size_t n) const {
  if (qubits.size() != n_) throw std::invalid_argument("embedding position count mismatch");
  PauliString r(n);
  for (size_t j = 0; j < n_; ++j) {
    if (qubits[j] >= n) throw std::out_of_range("embedding position out of range");
    put(r.xw_, qubits[j], x(j));
    put(r.zw_, qubits[j], z(j));
  }
  return r;
}

std::string PauliString::str() const {
  std::string s(n_, 'I');
  for (size_t i = 0; i < n_; ++i) s[i] = pauli_char(get(i));
  return s;
}

std::vector<Pauli> PauliString::labels() const {
  std::vector<Pauli> l(n_);
  for (size_t i = 0; i < n_; ++i) l[i] = get(i);
  return l;
}

}  // namespace tncode
