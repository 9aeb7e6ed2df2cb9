#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "tncode/composition.hpp"
#include "tncode/noise.hpp"
#include "tncode/stabilizer.hpp"

namespace tncode {

// Nonnegative quantity kept as mantissa * exp(log_scale) so that products of
// many per-tile factors never underflow.
struct ScaledValue {
  double mantissa = 0.0;
  double log_scale = 0.0;

  bool is_zero() const { return mantissa == 0.0; }
  double value() const { return mantissa == 0.0 ? 0.0 : mantissa * std::exp(log_scale); }
  // this / other, as a plain double.
  double ratio(const ScaledValue& other) const {
    return mantissa == 0.0 ? 0.0
                           : (mantissa / other.mantissa) * std::exp(log_scale - other.log_scale);
  }
};

// Per-logical-qubit class request: 0..3 fixes the class, kSum sums all four.
struct LogicalAssignment {
  static constexpr int8_t kSum = -1;
  std::vector<int8_t> classes;

  static LogicalAssignment all_sum(size_t k) {
    return LogicalAssignment{std::vector<int8_t>(k, kSum)};
  }
  LogicalAssignment& fix(size_t qubit, Pauli c) {
    classes.at(qubit) = static_cast<int8_t>(c);
    return *this;
  }
};

struct QubitMarginal {
  size_t qubit = 0;
  std::array<ScaledValue, 4> chi{};       // chi(c on this qubit, sum elsewhere)
  std::array<double, 4> conditional{};    // chi normalized by their sum
  Pauli decoded = Pauli::I;               // argmax, lowest class index on ties
  bool peaked = false;                    // conditional[decoded] > K/(K+1), strict
  bool tie = false;                       // exact tie at the maximum
};

struct DecodeResult {
  std::vector<QubitMarginal> marginals;
  ScaledValue syndrome_probability;   // chi summed over every class
  LogicalClass decoded;               // one class per requested qubit
  bool tie = false;                   // any contributing argmax was tied
  // decode_joint only: conditional over all class words of the targets,
  // index = sum_t word[t] * 4^t (first target least significant).
  std::vector<double> joint_conditional;
  double decoded_conditional = 0.0;   // decode_joint: conditional of `decoded`
};

// Exact maximum-likelihood quantities for a tensor-network code under
// independent Pauli noise. Contraction is exact; layered tilings use the
// schedule recorded by build_code, other networks a frontier sweep.
class Decoder {
public:
  struct Options {
    bool force_generic = false;   // ignore tiling metadata (for cross-checks)
    size_t max_joint_targets = 10;
    size_t max_open_legs = 12;        // generic engine frontier guard
    size_t max_node_strings = 1u << 18;  // per-node coset enumeration guard
  };

  Decoder(const TensorNetworkCode& net, NoiseModel noise) : Decoder(net, std::move(noise), Options{}) {}
  Decoder(const TensorNetworkCode& net, NoiseModel noise, Options opt);
  ~Decoder();

  const TensorNetworkCode& net() const { return net_; }

  // Fixes the syndrome all later queries condition on.
  void set_syndrome(const Syndrome& s);

  // chi(assignment, syndrome): total probability of errors consistent with
  // the syndrome whose logical classes match the assignment.
  ScaledValue chi(const LogicalAssignment& assign);

  ScaledValue syndrome_probability();

  // Marginal of one logical qubit; `num_targets` sets the K used by the
  // peakedness threshold K/(K+1).
  QubitMarginal marginal(size_t qubit, size_t num_targets = 1);

  DecodeResult decode_marginal(size_t qubit);
  DecodeResult decode_parallel(const std::vector<size_t>& qubits, size_t threads = 1);
  DecodeResult decode_joint(const std::vector<size_t>& qubits);

  // prob(word | syndrome) for a full class word over all k logical qubits.
  double word_probability(const LogicalClass& word);

private:
  struct Impl;
  const TensorNetworkCode& net_;
  NoiseModel noise_;
  Options opt_;
  std::unique_ptr<Impl> impl_;
  std::optional<Syndrome> syndrome_;
};

// One-shot conveniences.
ScaledValue chi(const TensorNetworkCode& net, const LogicalAssignment& assign,
                const Syndrome& s, const NoiseModel& noise);
DecodeResult decode_marginal(const TensorNetworkCode& net, size_t qubit,
                             const Syndrome& s, const NoiseModel& noise);
DecodeResult decode_parallel(const TensorNetworkCode& net, const std::vector<size_t>& qubits,
                             const Syndrome& s, const NoiseModel& noise, size_t threads = 1);
DecodeResult decode_joint(const TensorNetworkCode& net, const std::vector<size_t>& qubits,
                          const Syndrome& s, const NoiseModel& noise);
double word_probability(const TensorNetworkCode& net, const LogicalClass& word,
                        const Syndrome& s, const NoiseModel& noise);

}  // namespace tncode
