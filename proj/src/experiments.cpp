#include "tncode/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "tncode/detail/parallel.hpp"

namespace tncode {

namespace {

uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1p-53;
}

void check_targets(const TensorNetworkCode& net, const std::vector<size_t>& targets) {
  if (targets.empty()) throw std::invalid_argument("experiments: no target qubits");
  if (targets.size() > 32) throw std::invalid_argument("experiments: too many target qubits");
  std::vector<size_t> sorted = targets;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("experiments: repeated target qubit");
  for (size_t t : targets)
    if (t >= net.flat().k) throw std::invalid_argument("experiments: target qubit out of range");
}

TrialRecord run_one(Decoder& dec, const TensorNetworkCode& net,
                    const std::vector<size_t>& targets, const NoiseModel& noise,
                    uint64_t master_seed, uint64_t trial) {
  const StabilizerCode& flat = net.flat();
  std::mt19937_64 rng(trial_seed(master_seed, trial));
  TrialRecord rec;
  rec.trial = trial;
  rec.error = sample_error(noise, rng);
  rec.syndrome = syndrome(flat, rec.error);

  LogicalClass full_true = logical_class(flat, rec.error * pure_error(flat, rec.syndrome));
  for (size_t t : targets) rec.true_word.push_back(full_true[t]);

  dec.set_syndrome(rec.syndrome);
  DecodeResult out = dec.decode_parallel(targets, 1);
  rec.decoded = out.decoded;
  for (size_t i = 0; i < targets.size(); ++i) {
    const QubitMarginal& m = out.marginals[i];
    rec.decoded_conditional.push_back(m.conditional[static_cast<size_t>(m.decoded)]);
    if (m.peaked) rec.peaked_bits |= uint32_t{1} << i;
    if (rec.decoded[i] != rec.true_word[i]) rec.fail_bits |= uint32_t{1} << i;
  }
  rec.success = rec.fail_bits == 0;

  if (targets.size() == 1) {
    rec.weight = rec.decoded_conditional[0];
  } else {
    LogicalAssignment a = LogicalAssignment::all_sum(flat.k);
    for (size_t i = 0; i < targets.size(); ++i) a.classes[targets[i]] =
        static_cast<int8_t>(rec.decoded[i]);
    rec.weight = dec.chi(a).ratio(dec.syndrome_probability());
  }
  return rec;
}

}  // namespace

uint64_t trial_seed(uint64_t master_seed, uint64_t trial) {
  return splitmix64(master_seed ^ splitmix64(trial + 0xD1B54A32D192ED03ULL));
}

PauliString sample_error(const NoiseModel& noise, std::mt19937_64& rng) {
  PauliString e(noise.num_qubits());
  for (size_t i = 0; i < noise.num_qubits(); ++i) {
    double u = uniform01(rng);
    double acc = 0.0;
    int c = 3;
    for (int a = 0; a < 3; ++a) {
      acc += noise.q[i][a];
      if (u < acc) {
        c = a;
        break;
      }
    }
    e.set(i, static_cast<Pauli>(c));
  }
  return e;
}

std::vector<TrialRecord> run_trials(const TensorNetworkCode& net,
                                    const std::vector<size_t>& targets,
                                    const NoiseModel& noise, size_t samples,
                                    uint64_t seed, size_t threads) {
  check_targets(net, targets);
  validate(noise);
  if (noise.num_qubits() != net.flat().n)
    throw std::invalid_argument("experiments: noise model size mismatch");
  if (samples == 0) throw std::invalid_argument("experiments: samples must be positive");
  std::vector<TrialRecord> records(samples);
  threads = detail::resolve_threads(threads);
  threads = std::max<size_t>(1, std::min(threads, samples));
  if (threads == 1) {
    Decoder dec(net, noise);
    for (size_t i = 0; i < samples; ++i)
      records[i] = run_one(dec, net, targets, noise, seed, i);
    return records;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      try {
        Decoder dec(net, noise);
        for (;;) {
          size_t i = next.fetch_add(1);
          if (i >= samples) return;
          records[i] = run_one(dec, net, targets, noise, seed, i);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  return records;
}

EstimateResult reduce_trials(const TensorNetworkCode& net, const std::vector<size_t>& targets,
                             double p, const std::vector<TrialRecord>& records,
                             uint64_t seed, const std::string& method) {
  if (method != "counting" && method != "coset")
    throw std::invalid_argument("experiments: unknown method " + method);
  EstimateResult r;
  r.radius = net.tiling() ? net.tiling()->radius : 0;
  r.n = net.flat().n;
  r.k = net.flat().k;
  r.targets = targets;
  r.p = p;
  r.method = method;
  r.samples = records.size();
  r.seed = seed;
  size_t K = targets.size();
  double N = static_cast<double>(records.size());
  if (records.empty()) return r;

  auto binomial_se = [&](double phat) { return std::sqrt(phat * (1.0 - phat) / N); };

  size_t word_fails = 0, all_peaked = 0;
  std::vector<size_t> qubit_fails(K, 0);
  double wsum = 0.0;
  std::vector<double> csum(K, 0.0);
  for (const TrialRecord& rec : records) {
    if (!rec.success) ++word_fails;
    if (rec.peaked_bits == (K == 32 ? ~uint32_t{0} : (uint32_t{1} << K) - 1)) ++all_peaked;
    for (size_t i = 0; i < K; ++i) {
      if (rec.fail_bits & (uint32_t{1} << i)) ++qubit_fails[i];
      csum[i] += rec.decoded_conditional[i];
    }
    wsum += rec.weight;
  }

  if (method == "counting") {
    r.p_fail = static_cast<double>(word_fails) / N;
    r.std_err = binomial_se(r.p_fail);
    for (size_t i = 0; i < K; ++i) {
      double pf = static_cast<double>(qubit_fails[i]) / N;
      r.per_qubit_fail.push_back(pf);
      r.per_qubit_std_err.push_back(binomial_se(pf));
    }
  } else {
    double mean_w = wsum / N;
    double var = 0.0;
    for (const TrialRecord& rec : records) var += (rec.weight - mean_w) * (rec.weight - mean_w);
    r.p_fail = 1.0 - mean_w;
    r.std_err = records.size() > 1 ? std::sqrt(var / (N - 1.0) / N) : 0.0;
    for (size_t i = 0; i < K; ++i) {
      double mean_c = csum[i] / N;
      double cv = 0.0;
      for (const TrialRecord& rec : records)
        cv += (rec.decoded_conditional[i] - mean_c) * (rec.decoded_conditional[i] - mean_c);
      r.per_qubit_fail.push_back(1.0 - mean_c);
      r.per_qubit_std_err.push_back(records.size() > 1 ? std::sqrt(cv / (N - 1.0) / N) : 0.0);
    }
  }

  r.q_frac = static_cast<double>(all_peaked) / N;
  r.q_frac_std_err = binomial_se(r.q_frac);

  // Product lower bound on Q from per-qubit success rates (counting
  // estimates, whatever the reporting method); factors clamp at zero.
  double bound = 1.0;
  double kk = static_cast<double>(K);
  for (size_t i = 0; i < K; ++i) {
    double ps = 1.0 - static_cast<double>(qubit_fails[i]) / N;
    bound *= std::max(0.0, ps - kk * (1.0 - ps));
  }
  r.bound = bound;
  return r;
}

EstimateResult estimate(const TensorNetworkCode& net, const std::vector<size_t>& targets,
                        double p, size_t samples, uint64_t seed, const std::string& method,
                        size_t threads, std::vector<TrialRecord>* trials_out) {
  NoiseModel noise = depolarizing(p, net.flat().n);
  std::vector<TrialRecord> records = run_trials(net, targets, noise, samples, seed, threads);
  EstimateResult r = reduce_trials(net, targets, p, records, seed, method);
  if (trials_out) *trials_out = std::move(records);
  return r;
}

EstimateResult estimate_failure_counting(const TensorNetworkCode& net,
                                         const std::vector<size_t>& targets, double p,
                                         size_t samples, uint64_t seed, size_t threads) {
  return estimate(net, targets, p, samples, seed, "counting", threads);
}

EstimateResult estimate_failure_coset(const TensorNetworkCode& net,
                                      const std::vector<size_t>& targets, double p,
                                      size_t samples, uint64_t seed, size_t threads) {
  return estimate(net, targets, p, samples, seed, "coset", threads);
}

EstimateResult estimate_Q(const TensorNetworkCode& net, const std::vector<size_t>& targets,
                          double p, size_t samples, uint64_t seed, size_t threads) {
  return estimate(net, targets, p, samples, seed, "counting", threads);
}

EstimateResult word_failure(const TensorNetworkCode& net, const std::vector<size_t>& targets,
                            double p, size_t samples, uint64_t seed,
                            const std::string& method, size_t threads) {
  return estimate(net, targets, p, samples, seed, method, threads);
}

double exhaustive_failure(const TensorNetworkCode& net, const std::vector<size_t>& targets,
                          const NoiseModel& noise) {
  check_targets(net, targets);
  const StabilizerCode& flat = net.flat();
  if (flat.n > 10) throw ResourceError("exhaustive_failure: n too large to enumerate");
  if (noise.num_qubits() != flat.n)
    throw std::invalid_argument("exhaustive_failure: noise model size mismatch");
  validate(noise);

  Decoder dec(net, noise);
  std::map<std::vector<uint8_t>, LogicalClass> decoded_by_syndrome;
  double p_fail = 0.0;
  size_t total = size_t{1} << (2 * flat.n);
  PauliString e(flat.n);
  for (size_t idx = 0; idx < total; ++idx) {
    double pe = 1.0;
    for (size_t q = 0; q < flat.n; ++q) {
      size_t c = (idx >> (2 * q)) & 3;
      e.set(q, static_cast<Pauli>(c));
      pe *= noise.q[q][c];
    }
    if (pe == 0.0) continue;
    Syndrome s = syndrome(flat, e);
    auto it = decoded_by_syndrome.find(s.bits);
    if (it == decoded_by_syndrome.end()) {
      dec.set_syndrome(s);
      it = decoded_by_syndrome.emplace(s.bits, dec.decode_parallel(targets, 1).decoded).first;
    }
    LogicalClass full_true = logical_class(flat, e * pure_error(flat, s));
    bool ok = true;
    for (size_t i = 0; i < targets.size(); ++i)
      ok = ok && full_true[targets[i]] == it->second[i];
    if (!ok) p_fail += pe;
  }
  return p_fail;
}

}  // namespace tncode
