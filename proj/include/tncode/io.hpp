#pragma once

#include <string>
#include <vector>

#include "tncode/composition.hpp"
#include "tncode/experiments.hpp"
#include "tncode/threshold.hpp"

namespace tncode {

// Shortest decimal that round-trips the exact double.
std::string format_double(double v);

// Network files: node list, edge list and optional tiling radius; node ids,
// legs and qubits are 1-based on disk. Loading replays the contractions, so
// a loaded network reproduces the builder's flat code and qubit order.
std::string network_to_json(const TensorNetworkCode& net);
TensorNetworkCode network_from_json(const std::string& text);
void save_network(const TensorNetworkCode& net, const std::string& path);
TensorNetworkCode load_network(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// Results CSV. Every row carries the full experiment context plus the
// distance estimate column d_est = n^0.54.
std::string results_csv_header();
std::string targets_label(const std::vector<size_t>& targets);  // 1-based, '+'-joined
// One row per estimate; word-level failure.
std::string result_csv_row(const EstimateResult& r);
// One row for a single target qubit, using the per-qubit columns.
std::string per_qubit_csv_row(const EstimateResult& r, size_t index);

// Reads (radius, n, p, p_fail, stderr, samples) back from a results CSV.
std::vector<ScalingRecord> read_results_csv(const std::string& path);

std::string trials_csv_header();
std::string trial_csv_row(const TrialRecord& rec);

std::string class_word_str(const LogicalClass& word);
LogicalClass class_word_parse(const std::string& text);

}  // namespace tncode
