#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tncode/composition.hpp"
#include "tncode/decoder.hpp"
#include "tncode/noise.hpp"

namespace tncode {

// One Monte Carlo trial. Everything the estimators consume is recorded so a
// run can be re-reduced or audited after the fact.
struct TrialRecord {
  uint64_t trial = 0;
  PauliString error;
  Syndrome syndrome;
  LogicalClass true_word;   // class of E * E(s), restricted to the targets
  LogicalClass decoded;     // per-qubit marginal argmaxes
  bool success = false;     // decoded == true_word
  double weight = 0.0;      // prob(decoded word | s), the coset-method weight
  uint32_t peaked_bits = 0;
  uint32_t fail_bits = 0;
  std::vector<double> decoded_conditional;  // prob_i(decoded_i | s) per target
};

struct EstimateResult {
  size_t radius = 0;  // 0 when the network carries no tiling
  size_t n = 0;
  size_t k = 0;
  std::vector<size_t> targets;
  double p = 0.0;
  std::string method;  // "counting" or "coset"
  size_t samples = 0;
  uint64_t seed = 0;
  double p_fail = 0.0;
  double std_err = 0.0;
  double q_frac = 0.0;              // fraction of trials with every flag peaked
  double q_frac_std_err = 0.0;
  double bound = 0.0;               // product lower bound from per-qubit successes
  std::vector<double> per_qubit_fail;     // same method as p_fail
  std::vector<double> per_qubit_std_err;
};

// Deterministic per-trial generator; trial streams never depend on worker
// count.
uint64_t trial_seed(uint64_t master_seed, uint64_t trial);

PauliString sample_error(const NoiseModel& noise, std::mt19937_64& rng);

// Runs `samples` independent trials: sample error, extract syndrome, decode
// the targets by parallel marginals, score. threads = 0 reads TNCODE_THREADS.
std::vector<TrialRecord> run_trials(const TensorNetworkCode& net,
                                    const std::vector<size_t>& targets,
                                    const NoiseModel& noise, size_t samples,
                                    uint64_t seed, size_t threads = 0);

// Full estimate from one trial set; p_fail is word-level failure under the
// chosen method, per-qubit columns use the same method.
EstimateResult reduce_trials(const TensorNetworkCode& net, const std::vector<size_t>& targets,
                             double p, const std::vector<TrialRecord>& records,
                             uint64_t seed, const std::string& method);

EstimateResult estimate(const TensorNetworkCode& net, const std::vector<size_t>& targets,
                        double p, size_t samples, uint64_t seed, const std::string& method,
                        size_t threads = 0, std::vector<TrialRecord>* trials_out = nullptr);

// The two paper estimators and the derived experiments, as thin wrappers.
EstimateResult estimate_failure_counting(const TensorNetworkCode& net,
                                         const std::vector<size_t>& targets, double p,
                                         size_t samples, uint64_t seed, size_t threads = 0);
EstimateResult estimate_failure_coset(const TensorNetworkCode& net,
                                      const std::vector<size_t>& targets, double p,
                                      size_t samples, uint64_t seed, size_t threads = 0);
EstimateResult estimate_Q(const TensorNetworkCode& net, const std::vector<size_t>& targets,
                          double p, size_t samples, uint64_t seed, size_t threads = 0);
EstimateResult word_failure(const TensorNetworkCode& net, const std::vector<size_t>& targets,
                            double p, size_t samples, uint64_t seed,
                            const std::string& method, size_t threads = 0);

// Exact word-level ML failure probability by enumerating every error.
// Guard: 4^n enumerable (n <= 10).
double exhaustive_failure(const TensorNetworkCode& net, const std::vector<size_t>& targets,
                          const NoiseModel& noise);

}  // namespace tncode
