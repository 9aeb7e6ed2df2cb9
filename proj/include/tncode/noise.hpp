#pragma once

#include <array>
#include <vector>

#include "tncode/pauli.hpp"

namespace tncode {

// Independent single-qubit Pauli noise: q[i][c] is the probability that qubit
// i suffers the Pauli with class index c (I=0, X=1, Y=2, Z=3).
struct NoiseModel {
  std::vector<std::array<double, 4>> q;

  size_t num_qubits() const { return q.size(); }
  double prob(const PauliString& p) const;
};

// q_i = [1-p, p/3, p/3, p/3] on every qubit.
NoiseModel depolarizing(double p, size_t n);

// Throws std::invalid_argument unless every row is a distribution.
void validate(const NoiseModel& noise);

}  // namespace tncode
