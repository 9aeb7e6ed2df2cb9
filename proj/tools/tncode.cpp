#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "tncode/decoder.hpp"
#include "tncode/experiments.hpp"
#include "tncode/holographic.hpp"
#include "tncode/io.hpp"
#include "tncode/threshold.hpp"

namespace {

using namespace tncode;

constexpr int kExitValidation = 3;
constexpr int kExitResource = 4;
constexpr int kExitNoConvergence = 5;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

// Either --net FILE or --radius R selects the network.
struct NetSource {
  std::string path;
  size_t radius = 0;
  bool has_radius = false;
  size_t max_radius_flat = 6;

  void add_options(CLI::App* cmd) {
    auto* group = cmd->add_option_group("network", "network source");
    group->add_option("--net", path, "network file produced by `build`");
    group->add_option("--radius", radius, "build the heptagon-tiling code of this radius")
        ->check(CLI::PositiveNumber);
    group->require_option(1);
    cmd->add_option("--max-radius-flat", max_radius_flat,
                    "raise the radius guard for flattened-code construction");
    cmd->callback([this, group] { has_radius = group->get_option("--radius")->count() > 0; });
  }

  TensorNetworkCode load() const {
    if (has_radius) return build_code(radius, max_radius_flat);
    return load_network(path);
  }
};

// "central", "radius2", or a 1-based comma list.
std::vector<size_t> parse_qubits(const std::string& text, size_t k) {
  if (text == "central") return {0};
  if (text == "radius2") {
    if (k < 8) throw std::invalid_argument("--qubits radius2 needs a code with k >= 8");
    return {0, 1, 2, 3, 4, 5, 6, 7};
  }
  std::vector<size_t> out;
  for (const std::string& tok : split(text, ',')) {
    size_t pos = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(tok, &pos);
    } catch (...) {
      throw std::invalid_argument("--qubits: bad index '" + tok + "'");
    }
    if (pos != tok.size() || v == 0) throw std::invalid_argument("--qubits: bad index '" + tok + "'");
    if (v > k) throw std::invalid_argument("--qubits: index " + tok + " exceeds k");
    out.push_back(v - 1);
  }
  return out;
}

std::vector<double> parse_p_list(const std::string& text) {
  std::vector<double> out;
  for (const std::string& tok : split(text, ',')) {
    size_t pos = 0;
    double v = 0;
    try {
      v = std::stod(tok, &pos);
    } catch (...) {
      throw std::invalid_argument("--p: bad value '" + tok + "'");
    }
    if (pos != tok.size() || v < 0.0 || v > 1.0)
      throw std::invalid_argument("--p: bad value '" + tok + "'");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("--p: empty list");
  return out;
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty())
    std::cout << text;
  else
    write_text_file(out_path, text);
}

// Shared state for the three sampling subcommands.
struct SampleArgs {
  NetSource src;
  std::string p_list;
  size_t samples = 1000;
  size_t samples_per_point = 0;
  uint64_t seed = 0;
  std::string qubits = "central";
  std::string method = "counting";
  std::string out_path;
  std::string trials_path;

  void add_options(CLI::App* cmd, bool with_method) {
    src.add_options(cmd);
    cmd->add_option("--p", p_list, "comma-separated physical error rates")->required();
    cmd->add_option("--samples", samples, "Monte Carlo trials per point");
    cmd->add_option("--samples-per-point", samples_per_point,
                    "alias for --samples, taking precedence");
    cmd->add_option("--seed", seed, "master seed; per-trial streams derive from it")->required();
    cmd->add_option("--qubits", qubits, "1-based list, or 'central' / 'radius2'");
    if (with_method)
      cmd->add_option("--method", method, "estimator")
          ->check(CLI::IsMember({"counting", "coset"}));
    cmd->add_option("--out", out_path, "results CSV path (default stdout)");
    cmd->add_option("--trials-out", trials_path, "per-trial CSV path");
  }

  size_t effective_samples() const { return samples_per_point ? samples_per_point : samples; }
};

// mode: 0 = per-qubit rows (sample), 1 = word rows (word), 2 = qfrac rows.
int run_sampling(const SampleArgs& args, int mode) {
  TensorNetworkCode net = args.src.load();
  std::vector<size_t> targets = parse_qubits(args.qubits, net.flat().k);
  std::vector<double> ps = parse_p_list(args.p_list);
  std::string csv = results_csv_header() + "\n";
  std::string trials_csv = "p," + trials_csv_header() + "\n";
  for (double p : ps) {
    std::vector<TrialRecord> trials;
    EstimateResult r = estimate(net, targets, p, args.effective_samples(), args.seed,
                                args.method, 0, args.trials_path.empty() ? nullptr : &trials);
    if (mode == 0) {
      for (size_t i = 0; i < targets.size(); ++i) csv += per_qubit_csv_row(r, i) + "\n";
    } else {
      csv += result_csv_row(r) + "\n";
    }
    for (const TrialRecord& rec : trials)
      trials_csv += format_double(p) + "," + trial_csv_row(rec) + "\n";
  }
  emit(args.out_path, csv);
  if (!args.trials_path.empty()) write_text_file(args.trials_path, trials_csv);
  return 0;
}

int run_build(const NetSource& src, const std::string& out_path) {
  TensorNetworkCode net = src.load();
  std::string json = network_to_json(net);
  if (out_path.empty()) {
    std::cout << json;
  } else {
    write_text_file(out_path, json);
    const StabilizerCode& c = net.flat();
    std::cout << "built network: nodes=" << net.num_nodes() << " n=" << c.n << " k=" << c.k;
    if (net.tiling()) std::cout << " radius=" << net.tiling()->radius;
    std::cout << "\n";
  }
  return 0;
}

int run_validate(const std::string& path) {
  TensorNetworkCode net = load_network(path);
  std::vector<std::string> violations = validate(net.flat());
  if (!violations.empty()) {
    for (const std::string& v : violations) std::cerr << "violation: " << v << "\n";
    return kExitValidation;
  }
  const StabilizerCode& c = net.flat();
  std::cout << "ok: nodes=" << net.num_nodes() << " n=" << c.n << " k=" << c.k
            << " stabilizers=" << c.stabilizers.size();
  if (net.tiling()) std::cout << " radius=" << net.tiling()->radius;
  std::cout << "\n";
  return 0;
}

int run_decode(const NetSource& src, const std::string& syndrome_text,
               const std::string& qubits_text, double p, bool joint) {
  TensorNetworkCode net = src.load();
  std::vector<size_t> targets = parse_qubits(qubits_text, net.flat().k);
  Syndrome s = Syndrome::parse(syndrome_text);
  NoiseModel noise = depolarizing(p, net.flat().n);
  Decoder dec(net, noise);
  dec.set_syndrome(s);
  DecodeResult res = dec.decode_parallel(targets, 0);
  for (size_t i = 0; i < targets.size(); ++i) {
    const QubitMarginal& m = res.marginals[i];
    std::printf("qubit %zu:", targets[i] + 1);
    for (int c = 0; c < 4; ++c)
      std::printf(" P(%c)=%.8g", pauli_char(static_cast<Pauli>(c)), m.conditional[c]);
    std::printf(" -> %c%s%s\n", pauli_char(m.decoded), m.peaked ? " peaked" : "",
                m.tie ? " tie" : "");
  }
  LogicalAssignment a = LogicalAssignment::all_sum(net.flat().k);
  for (size_t i = 0; i < targets.size(); ++i)
    a.classes[targets[i]] = static_cast<int8_t>(res.decoded[i]);
  double wp = dec.chi(a).ratio(dec.syndrome_probability());
  std::printf("word %s P=%.8g\n", class_word_str(res.decoded).c_str(), wp);
  if (joint) {
    DecodeResult jres = dec.decode_joint(targets);
    std::printf("joint %s P=%.8g%s agree=%s\n", class_word_str(jres.decoded).c_str(),
                jres.decoded_conditional, jres.tie ? " tie" : "",
                jres.decoded == res.decoded ? "yes" : "no");
  }
  return 0;
}

int run_fit(const std::string& in_path, size_t reference_radius, const std::string& out_path) {
  std::vector<ScalingRecord> records = read_results_csv(in_path);
  ThresholdFit fit = fit_threshold(records, reference_radius);
  std::string report;
  report += "p_th = " + format_double(fit.p_th) + "\n";
  report += "nu = " + format_double(fit.nu) + "\n";
  report += "f_coeffs = " + format_double(fit.f_coeffs[0]) + " " +
            format_double(fit.f_coeffs[1]) + " " + format_double(fit.f_coeffs[2]) + "\n";
  report += "residual = " + format_double(fit.residual) + "\n";
  report += "iterations = " + std::to_string(fit.iterations) + "\n";
  report += "radius,n,p,x,p_fail,stderr\n";
  for (const ScalingRecord& r : records) {
    report += std::to_string(r.radius) + "," + format_double(r.n) + "," + format_double(r.p) +
              "," + format_double(rescale(r.p, fit.p_th, r.n, fit.nu)) + "," +
              format_double(r.p_fail) + "," + format_double(r.std_err) + "\n";
  }
  emit(out_path, report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tensor-network stabilizer codes: construction, exact ML decoding, experiments"};
  app.require_subcommand(1);

  NetSource build_src;
  std::string build_out;
  auto* build = app.add_subcommand("build", "construct a code and write its network file");
  build_src.add_options(build);
  build->add_option("--out", build_out, "network file path (default stdout)");

  std::string validate_path;
  auto* vali = app.add_subcommand("validate", "check a network file and report code parameters");
  vali->add_option("net", validate_path, "network file")->required();

  NetSource dec_src;
  std::string dec_syndrome, dec_qubits = "central";
  double dec_p = 0.1;
  bool dec_joint = false;
  auto* dec = app.add_subcommand("decode", "exact conditional class probabilities for a syndrome");
  dec_src.add_options(dec);
  dec->add_option("--syndrome", dec_syndrome, "syndrome bit string, one bit per stabilizer")
      ->required();
  dec->add_option("--qubits", dec_qubits, "1-based list, or 'central' / 'radius2'");
  dec->add_option("--p", dec_p, "depolarizing rate")->check(CLI::Range(0.0, 1.0));
  dec->add_flag("--joint", dec_joint, "also run the joint 4^K decoder");

  SampleArgs sample_args, qfrac_args, word_args;
  auto* sample = app.add_subcommand("sample", "per-qubit failure estimates over a p grid");
  sample_args.add_options(sample, true);
  auto* qfrac = app.add_subcommand("qfrac", "peaked-fraction Q and its product lower bound");
  qfrac_args.add_options(qfrac, false);
  auto* word = app.add_subcommand("word", "word-level failure estimates");
  word_args.add_options(word, true);

  std::string fit_in, fit_out;
  size_t fit_ref = 0;
  auto* fit = app.add_subcommand("fit", "finite-size-scaling collapse fit");
  fit->add_option("--in", fit_in, "results CSV")->required();
  fit->add_option("--reference-radius", fit_ref, "radius fitted in stage 1")->required();
  fit->add_option("--out", fit_out, "report path (default stdout)");

  try {
    app.parse(argc, argv);
    if (build->parsed()) return run_build(build_src, build_out);
    if (vali->parsed()) return run_validate(validate_path);
    if (dec->parsed()) return run_decode(dec_src, dec_syndrome, dec_qubits, dec_p, dec_joint);
    if (sample->parsed()) return run_sampling(sample_args, 0);
    if (qfrac->parsed()) return run_sampling(qfrac_args, 2);
    if (word->parsed()) return run_sampling(word_args, 1);
    if (fit->parsed()) return run_fit(fit_in, fit_ref, fit_out);
    return 2;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ResourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitResource;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
