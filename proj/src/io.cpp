#include "tncode/io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "tncode/holographic.hpp"

namespace tncode {

namespace {

using ordered_json = nlohmann::ordered_json;

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
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

double parse_double(const std::string& s) {
  try {
    size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw std::invalid_argument("csv: bad numeric field '" + s + "'");
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string network_to_json(const TensorNetworkCode& net) {
  ordered_json j;
  j["format"] = "tncode-network";
  j["version"] = 1;
  std::vector<std::string> names;
  for (size_t i = 0; i < net.num_nodes(); ++i) names.push_back(net.node(i).name);
  j["nodes"] = names;
  std::vector<std::array<size_t, 4>> edges;
  for (const auto& e : net.edges())
    edges.push_back({e[0].node + 1, e[0].leg + 1, e[1].node + 1, e[1].leg + 1});
  j["edges"] = edges;
  if (net.tiling()) {
    size_t radius = net.tiling()->radius;
    j["tiling_radius"] = radius;
    TilingCensus c = census(radius);
    ordered_json cj;
    cj["tiles_per_layer"] = c.tiles_per_layer;
    cj["total_tiles"] = c.total_tiles;
    cj["boundary_legs"] = c.boundary_legs;
    cj["growth_ratio"] = c.growth_ratio;
    j["census"] = cj;
  }
  return j.dump(2) + "\n";
}

TensorNetworkCode network_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("network file: invalid JSON: ") + e.what());
  }
  if (!j.is_object() || j.value("format", "") != "tncode-network")
    throw std::invalid_argument("network file: not a tncode-network document");
  if (j.value("version", 0) != 1)
    throw std::invalid_argument("network file: unsupported version");
  if (!j.contains("nodes") || !j["nodes"].is_array() || j["nodes"].empty())
    throw std::invalid_argument("network file: missing node list");

  std::vector<std::string> names = j["nodes"].get<std::vector<std::string>>();
  // Pairings grouped by the later endpoint, in file order.
  std::vector<std::vector<std::pair<size_t, NodeLeg>>> pairings(names.size());
  if (j.contains("edges")) {
    for (const auto& e : j["edges"]) {
      if (!e.is_array() || e.size() != 4)
        throw std::invalid_argument("network file: edge must be [node, leg, node, leg]");
      size_t na = e[0].get<size_t>(), la = e[1].get<size_t>();
      size_t nb = e[2].get<size_t>(), lb = e[3].get<size_t>();
      if (na == 0 || nb == 0 || la == 0 || lb == 0)
        throw std::invalid_argument("network file: ids and legs are 1-based");
      --na, --la, --nb, --lb;
      if (na >= names.size() || nb >= names.size() || na == nb)
        throw std::invalid_argument("network file: edge endpoint out of range");
      if (na < nb) {
        std::swap(na, nb);
        std::swap(la, lb);
      }
      pairings[na].emplace_back(la, NodeLeg{nb, lb});
    }
  }
  TensorNetworkCode net;
  for (size_t i = 0; i < names.size(); ++i) net.add_node(tensor_by_name(names[i]), pairings[i]);
  if (j.contains("tiling_radius")) {
    size_t radius = j["tiling_radius"].get<size_t>();
    TilingInfo info = build_tiling(radius);
    if (info.tiles.size() != net.num_nodes())
      throw std::invalid_argument("network file: tiling radius does not match node count");
    net.set_tiling(std::move(info));
  }
  return net;
}

void save_network(const TensorNetworkCode& net, const std::string& path) {
  write_text_file(path, network_to_json(net));
}

TensorNetworkCode load_network(const std::string& path) {
  return network_from_json(read_text_file(path));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write file: " + path);
  out << text;
  if (!out) throw std::runtime_error("failed writing file: " + path);
}

std::string results_csv_header() {
  return "radius,n,k,targets,p,method,samples,seed,p_fail,stderr,q_frac,bound,d_est";
}

std::string targets_label(const std::vector<size_t>& targets) {
  std::string out;
  for (size_t i = 0; i < targets.size(); ++i) {
    if (i) out.push_back('+');
    out += std::to_string(targets[i] + 1);
  }
  return out;
}

namespace {

std::string csv_common(const EstimateResult& r, const std::string& targets, double p_fail,
                       double std_err) {
  std::string row;
  row += std::to_string(r.radius);
  row += ',' + std::to_string(r.n);
  row += ',' + std::to_string(r.k);
  row += ',' + targets;
  row += ',' + format_double(r.p);
  row += ',' + r.method;
  row += ',' + std::to_string(r.samples);
  row += ',' + std::to_string(r.seed);
  row += ',' + format_double(p_fail);
  row += ',' + format_double(std_err);
  row += ',' + format_double(r.q_frac);
  row += ',' + format_double(r.bound);
  row += ',' + format_double(distance_estimate(static_cast<double>(r.n)));
  return row;
}

}  // namespace

std::string result_csv_row(const EstimateResult& r) {
  return csv_common(r, targets_label(r.targets), r.p_fail, r.std_err);
}

std::string per_qubit_csv_row(const EstimateResult& r, size_t index) {
  return csv_common(r, targets_label({r.targets.at(index)}), r.per_qubit_fail.at(index),
                    r.per_qubit_std_err.at(index));
}

std::vector<ScalingRecord> read_results_csv(const std::string& path) {
  std::string text = read_text_file(path);
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("csv: empty file " + path);
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
  std::vector<std::string> header = split(line, ',');
  std::map<std::string, size_t> col;
  for (size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const char* need : {"radius", "n", "p", "p_fail", "stderr", "samples"})
    if (!col.count(need))
      throw std::invalid_argument(std::string("csv: missing column ") + need);

  std::vector<ScalingRecord> out;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f = split(line, ',');
    if (f.size() < header.size())
      throw std::invalid_argument("csv: short row '" + line + "'");
    ScalingRecord r;
    r.radius = static_cast<size_t>(parse_double(f[col["radius"]]));
    r.n = parse_double(f[col["n"]]);
    r.p = parse_double(f[col["p"]]);
    r.p_fail = parse_double(f[col["p_fail"]]);
    r.std_err = parse_double(f[col["stderr"]]);
    r.samples = static_cast<size_t>(parse_double(f[col["samples"]]));
    out.push_back(r);
  }
  return out;
}

std::string trials_csv_header() {
  return "trial,error,syndrome,true_word,decoded,success,weight,peaked_bits,fail_bits";
}

std::string trial_csv_row(const TrialRecord& rec) {
  std::string row = std::to_string(rec.trial);
  row += ',' + rec.error.str();
  row += ',' + rec.syndrome.str();
  row += ',' + class_word_str(rec.true_word);
  row += ',' + class_word_str(rec.decoded);
  row += ',' + std::to_string(rec.success ? 1 : 0);
  row += ',' + format_double(rec.weight);
  row += ',' + std::to_string(rec.peaked_bits);
  row += ',' + std::to_string(rec.fail_bits);
  return row;
}

std::string class_word_str(const LogicalClass& word) {
  std::string out;
  for (Pauli p : word) out.push_back(pauli_char(p));
  return out;
}

LogicalClass class_word_parse(const std::string& text) {
  LogicalClass out;
  for (char ch : text) out.push_back(pauli_from_char(ch));
  return out;
}

}  // namespace tncode
