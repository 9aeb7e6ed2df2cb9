#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tncode/noise.hpp"
#include "tncode/pauli.hpp"

namespace tncode {

// Measurement outcome pattern, one bit per stabilizer generator.
struct Syndrome {
  std::vector<uint8_t> bits;

  bool operator==(const Syndrome&) const = default;
  std::string str() const;
  static Syndrome parse(const std::string& text);
};

// One Pauli class label per logical qubit.
using LogicalClass = std::vector<Pauli>;

// An [[n,k]] stabilizer code presented by generators:
//  - stabilizers: n-k commuting, independent generators of S
//  - pure_errors: pure_errors[i] anticommutes with stabilizers[j] iff i == j
//  - logical_x/logical_z: k representatives each; logical_x[a] anticommutes
//    with logical_z[b] iff a == b, and both commute with every stabilizer
struct StabilizerCode {
  size_t n = 0;
  size_t k = 0;
  std::vector<PauliString> stabilizers;
  std::vector<PauliString> pure_errors;
  std::vector<PauliString> logical_x;
  std::vector<PauliString> logical_z;
};

// The [[7,1,3]] code, generators exactly as tabulated: three X-type
// stabilizers and their X<->Z mirrors, Z-type pure errors and their mirrors,
// transversal logicals.
StabilizerCode steane();

// The [[1,1]] code with no stabilizers (single bare qubit).
StabilizerCode trivial_code();

// Structural checks; returns human-readable violations, empty when sound.
std::vector<std::string> validate(const StabilizerCode& code);

Syndrome syndrome(const StabilizerCode& code, const PauliString& p);

// Product of pure_errors[i] over set syndrome bits; syndrome(pure_error(s)) == s.
PauliString pure_error(const StabilizerCode& code, const Syndrome& s);

// Class of an operator commuting with every stabilizer. Throws
// std::invalid_argument when the precondition fails.
LogicalClass logical_class(const StabilizerCode& code, const PauliString& p);

// Product of logical representatives realizing the given class word.
PauliString logical_representative(const StabilizerCode& code, const LogicalClass& word);

// Exact minimum weight of a stabilizer-commuting operator with non-identity
// class, by weight-ordered enumeration. Guard: n <= 14.
size_t distance_bruteforce(const StabilizerCode& code);

// Exact coset sum chi(L, s) = sum_{S in S} prob(E(s) * S * L) over the full
// stabilizer group. Guard: n-k <= 26.
double chi_oracle(const StabilizerCode& code, const LogicalClass& word,
                  const Syndrome& s, const NoiseModel& noise);

}  // namespace tncode
