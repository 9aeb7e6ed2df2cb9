#include "tncode/noise.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tncode {

double NoiseModel::prob(const PauliString& p) const {
  if (p.num_qubits() != q.size())
    throw std::invalid_argument("Pauli length does not match noise model");
  double v = 1.0;
  for (size_t i = 0; i < q.size(); ++i) v *= q[i][static_cast<uint8_t>(p.get(i))];
  return v;
}

NoiseModel depolarizing(double p, size_t n) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("depolarizing rate outside [0,1]");
  NoiseModel m;
  m.q.assign(n, {1.0 - p, p / 3.0, p / 3.0, p / 3.0});
  return m;
}

void validate(const NoiseModel& noise) {
  for (size_t i = 0; i < noise.q.size(); ++i) {
    double s = 0.0;
    for (double v : noise.q[i]) {
      if (v < 0.0) throw std::invalid_argument("negative noise probability on qubit " + std::to_string(i));
      s += v;
    }
    if (std::abs(s - 1.0) > 1e-9)
      throw std::invalid_argument("noise probabilities on qubit " + std::to_string(i) + " do not sum to 1");
  }
}

}  // namespace tncode
