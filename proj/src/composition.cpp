#include "tncode/composition.hpp"

#include <algorithm>
#include <stdexcept>

#include "tncode/gf2.hpp"

namespace tncode {

namespace {

Pauli pauli_from_xz(bool x, bool z) {
  if (x && z) return Pauli::Y;
  if (x) return Pauli::X;
  if (z) return Pauli::Z;
  return Pauli::I;
}

PauliString concat(const PauliString& a, const PauliString& b) {
  PauliString out(a.num_qubits() + b.num_qubits());
  for (size_t i = 0; i < a.num_qubits(); ++i) out.set(i, a.get(i));
  for (size_t i = 0; i < b.num_qubits(); ++i) out.set(a.num_qubits() + i, b.get(i));
  return out;
}

// Row r of M as [x bits | z bits] over n qubits.
PauliString row_to_pauli(const Gf2Matrix& m, size_t r, size_t n) {
  PauliString out(n);
  for (size_t i = 0; i < n; ++i) out.set(i, pauli_from_xz(m.get(r, i), m.get(r, n + i)));
  return out;
}

void pauli_to_row(Gf2Matrix& m, size_t r, const PauliString& p) {
  size_t n = p.num_qubits();
  for (size_t i = 0; i < n; ++i) {
    m.set(r, i, p.x(i));
    m.set(r, n + i, p.z(i));
  }
}

std::vector<uint8_t> pauli_to_bits(const PauliString& p) {
  size_t n = p.num_qubits();
  std::vector<uint8_t> v(2 * n);
  for (size_t i = 0; i < n; ++i) {
    v[i] = p.x(i);
    v[n + i] = p.z(i);
  }
  return v;
}

PauliString bits_to_pauli(const std::vector<uint8_t>& v, size_t n) {
  PauliString out(n);
  for (size_t i = 0; i < n; ++i) out.set(i, pauli_from_xz(v[i], v[n + i]));
  return out;
}

void check_legs(const StabilizerCode& code, const std::vector<size_t>& legs,
                const char* side) {
  std::vector<size_t> seen;
  for (size_t l : legs) {
    if (l >= code.n) throw std::invalid_argument(std::string("leg out of range on side ") + side);
    if (std::find(seen.begin(), seen.end(), l) != seen.end())
      throw std::invalid_argument(std::string("repeated leg on side ") + side);
    seen.push_back(l);
  }
}

}  // namespace

CodeTensor steane_tensor() { return CodeTensor{"steane", steane()}; }

CodeTensor tensor_by_name(const std::string& name) {
  if (name == "steane") return steane_tensor();
  if (name == "trivial") return CodeTensor{"trivial", trivial_code()};
  throw std::invalid_argument("unknown base code: " + name);
}

bool distinguishable(const StabilizerCode& code, const std::vector<size_t>& legs) {
  if (legs.empty()) throw std::invalid_argument("distinguishable: empty leg set");
  if (legs.size() > 8) throw ResourceError("distinguishable: more than 8 legs");
  check_legs(code, legs, "a");
  size_t m = code.stabilizers.size();
  // Rows: syndromes of the single-qubit X and Z patterns on each leg. The
  // pattern -> syndrome map is linear, so injectivity == full row rank.
  Gf2Matrix mat(2 * legs.size(), m);
  for (size_t t = 0; t < legs.size(); ++t) {
    for (size_t j = 0; j < m; ++j) {
      mat.set(2 * t, j, code.stabilizers[j].z(legs[t]));      // X on leg vs S_j
      mat.set(2 * t + 1, j, code.stabilizers[j].x(legs[t]));  // Z on leg vs S_j
    }
  }
  return mat.rank() == 2 * legs.size();
}

StabilizerCode contract_codes(const StabilizerCode& a, const StabilizerCode& b,
                              const std::vector<std::pair<size_t, size_t>>& pairs) {
  const size_t l = pairs.size();
  std::vector<size_t> legs_a, legs_b;
  legs_a.reserve(l);
  legs_b.reserve(l);
  for (auto& [la, lb] : pairs) {
    legs_a.push_back(la);
    legs_b.push_back(lb);
  }
  check_legs(a, legs_a, "a");
  check_legs(b, legs_b, "b");
  if (l > 0 && !distinguishable(a, legs_a) && !distinguishable(b, legs_b))
    throw std::invalid_argument("contract_codes: neither side distinguishes its contracted legs");

  const size_t ma = a.stabilizers.size(), mb = b.stabilizers.size();
  std::vector<size_t> surv_a, surv_b;
  for (size_t i = 0; i < a.n; ++i)
    if (std::find(legs_a.begin(), legs_a.end(), i) == legs_a.end()) surv_a.push_back(i);
  for (size_t i = 0; i < b.n; ++i)
    if (std::find(legs_b.begin(), legs_b.end(), i) == legs_b.end()) surv_b.push_back(i);
  const size_t n_new = surv_a.size() + surv_b.size();
  const size_t k_new = a.k + b.k;

  // Coefficient vectors c over (a's stabilizers | b's stabilizers); rows force
  // equal X and Z parts on each contracted pair.
  Gf2Matrix con(2 * l, ma + mb);
  for (size_t t = 0; t < l; ++t) {
    for (size_t i = 0; i < ma; ++i) {
      con.set(2 * t, i, a.stabilizers[i].x(legs_a[t]));
      con.set(2 * t + 1, i, a.stabilizers[i].z(legs_a[t]));
    }
    for (size_t j = 0; j < mb; ++j) {
      con.set(2 * t, ma + j, b.stabilizers[j].x(legs_b[t]));
      con.set(2 * t + 1, ma + j, b.stabilizers[j].z(legs_b[t]));
    }
  }
  {
    Gf2Matrix probe = con;
    if (l > 0 && probe.rank() != 2 * l)
      throw std::runtime_error("contract_codes: degenerate leg-matching constraints");
  }

  auto lift = [&](const std::vector<uint8_t>& c, const PauliString& extra_a,
                  const PauliString& extra_b) {
    PauliString pa = extra_a, pb = extra_b;
    for (size_t i = 0; i < ma; ++i)
      if (c[i]) pa *= a.stabilizers[i];
    for (size_t j = 0; j < mb; ++j)
      if (c[ma + j]) pb *= b.stabilizers[j];
    for (size_t t = 0; t < l; ++t)
      if (pa.get(legs_a[t]) != pb.get(legs_b[t]))
        throw std::runtime_error("contract_codes: lift mismatch on contracted legs");
    return concat(pa.restricted_to(surv_a), pb.restricted_to(surv_b));
  };

  const PauliString id_a(a.n), id_b(b.n);
  Gf2Matrix ker = con.kernel_basis();
  if (ker.rows() != ma + mb - 2 * l)
    throw std::runtime_error("contract_codes: unexpected stabilizer count");
  const size_t m_new = ker.rows();

  Gf2Matrix smat(m_new, 2 * n_new);
  for (size_t r = 0; r < m_new; ++r) {
    std::vector<uint8_t> c(ma + mb);
    for (size_t i = 0; i < ma + mb; ++i) c[i] = ker.get(r, i);
    pauli_to_row(smat, r, lift(c, id_a, id_b));
  }
  std::vector<size_t> pivots = smat.rref();
  if (pivots.size() != m_new)
    throw std::runtime_error("contract_codes: dependent stabilizers after contraction");
  std::vector<PauliString> stabs;
  stabs.reserve(m_new);
  for (size_t r = 0; r < m_new; ++r) stabs.push_back(row_to_pauli(smat, r, n_new));

  auto lift_logical = [&](const PauliString& lop, bool from_a) {
    std::vector<uint8_t> rhs(2 * l);
    for (size_t t = 0; t < l; ++t) {
      size_t leg = from_a ? legs_a[t] : legs_b[t];
      rhs[2 * t] = lop.x(leg);
      rhs[2 * t + 1] = lop.z(leg);
    }
    auto c = con.solve(rhs);
    if (!c) throw std::runtime_error("contract_codes: logical operator does not extend");
    PauliString out = lift(*c, from_a ? lop : id_a, from_a ? id_b : lop);
    std::vector<uint8_t> v = pauli_to_bits(out);
    smat.reduce_vector(v, pivots);
    return bits_to_pauli(v, n_new);
  };

  std::vector<PauliString> lx, lz;
  for (size_t q = 0; q < a.k; ++q) lx.push_back(lift_logical(a.logical_x[q], true));
  for (size_t q = 0; q < b.k; ++q) lx.push_back(lift_logical(b.logical_x[q], false));
  for (size_t q = 0; q < a.k; ++q) lz.push_back(lift_logical(a.logical_z[q], true));
  for (size_t q = 0; q < b.k; ++q) lz.push_back(lift_logical(b.logical_z[q], false));

  // Pure errors: one elimination with identity right-hand sides solves
  // <e, S_j> = delta_ij for every i. Row j of the system is S_j with X and Z
  // planes swapped, so that row . [x|z] is the symplectic product.
  std::vector<PauliString> pures(m_new, PauliString(n_new));
  if (m_new > 0) {
    Gf2Matrix aug(m_new, 2 * n_new + m_new);
    for (size_t j = 0; j < m_new; ++j) {
      for (size_t i = 0; i < n_new; ++i) {
        aug.set(j, i, stabs[j].z(i));
        aug.set(j, n_new + i, stabs[j].x(i));
      }
      aug.set(j, 2 * n_new + j, true);
    }
    std::vector<size_t> ap = aug.rref();
    if (ap.size() != m_new || ap.back() >= 2 * n_new)
      throw std::runtime_error("contract_codes: singular pure-error system");
    for (size_t i = 0; i < m_new; ++i) {
      std::vector<uint8_t> v(2 * n_new, 0);
      for (size_t r = 0; r < m_new; ++r)
        if (aug.get(r, 2 * n_new + i)) v[ap[r]] = 1;
      pures[i] = bits_to_pauli(v, n_new);
    }
    // Make pure errors commute with the logical representatives, then with
    // each other; each correction only flips the targeted symplectic pairing.
    for (size_t i = 0; i < m_new; ++i) {
      for (size_t q = 0; q < k_new; ++q) {
        if (!pures[i].commutes_with(lx[q])) pures[i] *= lz[q];
        if (!pures[i].commutes_with(lz[q])) pures[i] *= lx[q];
      }
    }
    for (size_t j = 1; j < m_new; ++j)
      for (size_t i = 0; i < j; ++i)
        if (!pures[j].commutes_with(pures[i])) pures[j] *= stabs[i];
  }

  StabilizerCode out;
  out.n = n_new;
  out.k = k_new;
  out.stabilizers = std::move(stabs);
  out.pure_errors = std::move(pures);
  out.logical_x = std::move(lx);
  out.logical_z = std::move(lz);
  return out;
}

PauliString coset_sample(const StabilizerCode& code, const LogicalClass& word,
                         const Syndrome& s, std::mt19937_64& rng) {
  PauliString out = pure_error(code, s) * logical_representative(code, word);
  for (const PauliString& g : code.stabilizers)
    if (rng() & 1) out *= g;
  return out;
}

size_t TensorNetworkCode::add_node(const CodeTensor& t,
                                   const std::vector<std::pair<size_t, NodeLeg>>& pairings) {
  const size_t id = nodes_.size();
  std::vector<size_t> node_legs;
  std::vector<std::pair<size_t, size_t>> flat_pairs;  // (flat qubit, node leg)
  for (auto& [leg, bleg] : pairings) {
    if (leg >= t.code.n) throw std::invalid_argument("add_node: node leg out of range");
    if (std::find(node_legs.begin(), node_legs.end(), leg) != node_legs.end())
      throw std::invalid_argument("add_node: repeated node leg");
    node_legs.push_back(leg);
    flat_pairs.emplace_back(boundary_index(bleg), leg);
  }
  if (!pairings.empty() && !distinguishable(t.code, node_legs))
    throw std::invalid_argument("add_node: node does not distinguish its paired legs");

  StabilizerCode merged;
  if (id == 0) {
    if (!pairings.empty()) throw std::invalid_argument("add_node: first node cannot pair legs");
    merged = t.code;
  } else {
    merged = contract_codes(flat_, t.code, flat_pairs);
  }

  // New boundary: surviving old legs in order, then the node's free legs.
  std::vector<size_t> used_flat;
  for (auto& [fq, leg] : flat_pairs) used_flat.push_back(fq);
  std::vector<NodeLeg> nb;
  for (size_t i = 0; i < boundary_.size(); ++i)
    if (std::find(used_flat.begin(), used_flat.end(), i) == used_flat.end())
      nb.push_back(boundary_[i]);
  for (size_t leg = 0; leg < t.code.n; ++leg)
    if (std::find(node_legs.begin(), node_legs.end(), leg) == node_legs.end())
      nb.push_back(NodeLeg{id, leg});

  std::vector<size_t> logicals;
  for (size_t q = 0; q < t.code.k; ++q) logicals.push_back(flat_.k + q);

  for (auto& [leg, bleg] : pairings) edges_.push_back({NodeLeg{id, leg}, bleg});
  nodes_.push_back(t);
  boundary_ = std::move(nb);
  flat_ = std::move(merged);
  qubit_map_.push_back(std::move(logicals));
  return id;
}

size_t TensorNetworkCode::boundary_index(const NodeLeg& leg) const {
  for (size_t i = 0; i < boundary_.size(); ++i)
    if (boundary_[i] == leg) return i;
  throw std::invalid_argument("boundary_index: leg is not a live boundary leg");
}

}  // namespace tncode
