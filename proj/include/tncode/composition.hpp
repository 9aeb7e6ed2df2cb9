#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tncode/stabilizer.hpp"

namespace tncode {

// Thrown when a requested computation exceeds the configured size guards.
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A stabilizer code playing the role of a network node; leg i is qubit i.
struct CodeTensor {
  std::string name;  // base code name used by the file format
  StabilizerCode code;
};

CodeTensor steane_tensor();
// Looks up a named base code ("steane", "trivial"); throws on unknown names.
CodeTensor tensor_by_name(const std::string& name);

// True iff distinct Pauli patterns supported on the given legs always produce
// distinct syndromes. Guard: 1 <= |legs| <= 8, distinct, in range.
bool distinguishable(const StabilizerCode& code, const std::vector<size_t>& legs);

// Contracts l leg pairs between two codes. pairs[t] = (leg of a, leg of b).
// Result has a.n + b.n - 2l qubits (surviving a legs in order, then surviving
// b legs) and k = a.k + b.k (a's logical qubits first). At least one side must
// be distinguishable on its contracted legs; ties use side a.
StabilizerCode contract_codes(const StabilizerCode& a, const StabilizerCode& b,
                              const std::vector<std::pair<size_t, size_t>>& pairs);

// Uniform sample from the coset E(s) * L * S.
PauliString coset_sample(const StabilizerCode& code, const LogicalClass& word,
                         const Syndrome& s, std::mt19937_64& rng);

struct NodeLeg {
  size_t node = 0;
  size_t leg = 0;
  bool operator==(const NodeLeg&) const = default;
};

// Contraction schedule metadata for layered tilings (see holographic.hpp).
// Slots are 0-based legs of the 7-leg base tensor.
struct TileInfo {
  int layer = 1;
  int in_degree = 0;                   // 0 root, 1 edge child, 2 vertex child
  size_t parent_right = SIZE_MAX;      // 1-in: the only parent; 2-in: ring-successor-side parent
  size_t parent_left = SIZE_MAX;       // 2-in only: ring-predecessor-side parent
  int parent_right_slot = -1;          // slot on parent_right this tile plugs into
  int vslot_l = -1, vslot_r = -1;      // own flank slots (-1 for the root)
  bool flank_open = false;             // true when vertex children sit on the flanks
  size_t left_vchild = SIZE_MAX;       // vertex child between ring-predecessor and this tile
  std::vector<std::pair<int, size_t>> ec_children;  // (own slot, node), ascending slot
};

struct TilingInfo {
  size_t radius = 0;
  std::vector<std::vector<size_t>> rings;  // rings[r-1] = node ids of layer r, ring order
  std::vector<TileInfo> tiles;             // indexed by node id
};

// A stabilizer code built by contracting code tensors. Tracks the network
// graph, the ordered boundary (flat qubit i = boundary[i]) and the flattened
// code. Logical qubits are grouped by node, in insertion order.
class TensorNetworkCode {
public:
  TensorNetworkCode() = default;

  // Adds a node, contracting the listed (node leg, live boundary leg) pairs.
  // The node must be distinguishable on its paired legs. Surviving boundary
  // legs keep their relative order; the node's free legs are appended in leg
  // order. Returns the new node id.
  size_t add_node(const CodeTensor& t,
                  const std::vector<std::pair<size_t, NodeLeg>>& pairings = {});

  size_t num_nodes() const { return nodes_.size(); }
  const CodeTensor& node(size_t i) const { return nodes_[i]; }
  const std::vector<std::array<NodeLeg, 2>>& edges() const { return edges_; }
  const std::vector<NodeLeg>& boundary() const { return boundary_; }
  const StabilizerCode& flat() const { return flat_; }

  // Flat logical indices contributed by each node.
  const std::vector<std::vector<size_t>>& qubit_map() const { return qubit_map_; }

  // Flat qubit index of a boundary leg; throws for dead legs.
  size_t boundary_index(const NodeLeg& leg) const;

  const std::optional<TilingInfo>& tiling() const { return tiling_; }
  void set_tiling(TilingInfo t) { tiling_ = std::move(t); }

private:
  std::vector<CodeTensor> nodes_;
  std::vector<std::array<NodeLeg, 2>> edges_;
  std::vector<NodeLeg> boundary_;
  StabilizerCode flat_;
  std::vector<std::vector<size_t>> qubit_map_;
  std::optional<TilingInfo> tiling_;
};

}  // namespace tncode
