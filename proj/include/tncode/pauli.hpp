#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace tncode {

// Single-qubit Pauli labels. The integer values are load-bearing: class
// indices, tie-breaking order and file formats all use I=0, X=1, Y=2, Z=3.
enum class Pauli : uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char pauli_char(Pauli p);
Pauli pauli_from_char(char c);

// Phaseless single-qubit product, e.g. mul(X, Z) = Y.
Pauli pauli_mul(Pauli a, Pauli b);

// Phaseless n-qubit Pauli operator stored as packed X/Z bit planes.
// Qubit i has X-part x(i) and Z-part z(i); (0,0)=I, (1,0)=X, (1,1)=Y, (0,1)=Z.
class PauliString {
public:
  PauliString() = default;
  explicit PauliString(size_t n);
  static PauliString parse(const std::string& text);
  static PauliString from_labels(const std::vector<Pauli>& labels);

  size_t num_qubits() const { return n_; }
  bool x(size_t i) const { return bit(xw_, i); }
  bool z(size_t i) const { return bit(zw_, i); }
  Pauli get(size_t i) const;
  void set(size_t i, Pauli p);

  // Phaseless product: qubit-wise XOR of both bit planes.
  PauliString operator*(const PauliString& other) const;
  PauliString& operator*=(const PauliString& other);
  bool operator==(const PauliString& other) const = default;

  // True iff the symplectic form <a,b> = sum_i a.x(i)b.z(i) + a.z(i)b.x(i)
  // vanishes mod 2.
  bool commutes_with(const PauliString& other) const;

  size_t weight() const;
  bool is_identity() const;

  // Keeps the listed qubits, in the listed order.
  PauliString restricted_to(const std::vector<size_t>& qubits) const;
  // Places this string's qubit j at position qubits[j] of an n-qubit identity.
  PauliString embedded(const std::vector<size_t>& qubits, size_t n) const;

  std::string str() const;
  std::vector<Pauli> labels() const;

  const std::vector<uint64_t>& x_words() const { return xw_; }
  const std::vector<uint64_t>& z_words() const { return zw_; }

private:
  static bool bit(const std::vector<uint64_t>& w, size_t i) {
    return (w[i >> 6] >> (i & 63)) & 1;
  }
  static void put(std::vector<uint64_t>& w, size_t i, bool v) {
    uint64_t m = uint64_t{1} << (i & 63);
    if (v) w[i >> 6] |= m; else w[i >> 6] &= ~m;
  }

  size_t n_ = 0;
  std::vector<uint64_t> xw_, zw_;
};

}  // namespace tncode
