#include "tncode/decoder.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "tncode/detail/parallel.hpp"

namespace tncode {

namespace {

using Labels = std::vector<uint8_t>;

// All strings of one logical coset as per-qubit class labels, enumerated by a
// Gray walk over the stabilizer group.
std::vector<Labels> coset_strings(const StabilizerCode& code, const LogicalClass& word,
                                  size_t max_strings) {
  size_t m = code.stabilizers.size();
  if (m >= 63 || (uint64_t{1} << m) > max_strings)
    throw ResourceError("coset enumeration too large for contraction");
  std::vector<Labels> out;
  out.reserve(size_t{1} << m);
  PauliString cur = logical_representative(code, word);
  auto emit = [&] {
    Labels l(code.n);
    for (size_t i = 0; i < code.n; ++i) l[i] = static_cast<uint8_t>(cur.get(i));
    out.push_back(std::move(l));
  };
  emit();
  for (uint64_t g = 1; g < (uint64_t{1} << m); ++g) {
    cur *= code.stabilizers[static_cast<size_t>(std::countr_zero(g))];
    emit();
  }
  return out;
}

std::vector<std::array<double, 4>> leg_vectors(const StabilizerCode& flat,
                                               const NoiseModel& noise, const Syndrome& s) {
  PauliString e = pure_error(flat, s);
  std::vector<std::array<double, 4>> v(flat.n);
  for (size_t q = 0; q < flat.n; ++q)
    for (int r = 0; r < 4; ++r)
      v[q][r] = noise.q[q][static_cast<size_t>(pauli_mul(e.get(q), static_cast<Pauli>(r)))];
  return v;
}

// ---------------------------------------------------------------------------
// Layered tiling engine. Tiles are absorbed leaf-to-root; the message of a
// tile W carries one index per up leg plus one "flank bundle" per side whose
// legs are the dangling vertex-child edges of W's subtree, shallowest first.
// Bundles of adjacent subtrees pair up leg by leg, so a parent contracts its
// arc left to right and the root closes the last pair of bundles as a trace.
// ---------------------------------------------------------------------------
class TilingEngine {
public:
  struct Message {
    size_t updim = 4;
    size_t bdim = 1;  // 4^(radius - layer)
    std::vector<double> data;
    double log_scale = 0.0;
    bool zero = false;
    double at(size_t u, size_t l, size_t r) const { return data[(u * bdim + l) * bdim + r]; }
    double& at(size_t u, size_t l, size_t r) { return data[(u * bdim + l) * bdim + r]; }
  };

  TilingEngine(const TensorNetworkCode& net, size_t max_strings)
      : net_(net), tg_(*net.tiling()) {
    R_ = tg_.radius;
    const StabilizerCode& base = net_.node(0).code;
    for (size_t id = 0; id < net_.num_nodes(); ++id) {
      const StabilizerCode& c = net_.node(id).code;
      if (c.stabilizers != base.stabilizers || c.logical_x != base.logical_x ||
          c.logical_z != base.logical_z)
        throw std::logic_error("tiling engine: nodes use different base codes");
      const auto& qm = net_.qubit_map()[id];
      if (qm.size() != 1 || qm[0] != id)
        throw std::logic_error("tiling engine: unexpected logical layout");
    }
    for (int c = 0; c < 4; ++c)
      table_[c] = coset_strings(base, LogicalClass{static_cast<Pauli>(c)}, max_strings);
    group_ = table_[0].size();
    bq_.assign(net_.num_nodes(), {-1, -1, -1, -1, -1, -1, -1});
    const auto& bound = net_.boundary();
    for (size_t q = 0; q < bound.size(); ++q)
      bq_[bound[q].node][bound[q].leg] = static_cast<int>(q);
    b2_ = R_ >= 2 ? (size_t{1} << (2 * (R_ - 2))) : 1;
    cache_pf_ = R_ >= 2 && b2_ * b2_ <= 1024;
  }

  void set_syndrome(const std::vector<std::array<double, 4>>& legvec) {
    legvec_ = legvec;
    sum_msg_.assign(net_.num_nodes(), std::nullopt);
    closure_ready_ = false;
    prefix_.clear();
    suffix_.clear();
    trace_full_.clear();
    h_ready_.assign(7, false);
    h_.assign(7, {});
  }

  ScaledValue chi(const std::vector<int8_t>& spec) {
    size_t fixed = 0;
    size_t target = 0;
    for (size_t i = 0; i < spec.size(); ++i)
      if (spec[i] >= 0) {
        ++fixed;
        target = i;
      }
    if (fixed == 0) return syndrome_probability();
    if (fixed == 1) return chi_single(target, spec[target]);
    return chi_general(spec);
  }

  ScaledValue syndrome_probability() {
    if (R_ == 1) {
      ScaledValue total{0.0, 0.0};
      for (int c = 0; c < 4; ++c) {
        ScaledValue v = chi_single(0, static_cast<int8_t>(c));
        total.mantissa += v.is_zero() ? 0.0 : v.mantissa * std::exp(v.log_scale);
      }
      return total.mantissa == 0.0 ? ScaledValue{} : total;
    }
    ensure_closure();
    if (closure_zero_) return {};
    double sum = 0.0;
    for (size_t s = 0; s < 4 * group_; ++s) sum += trace_full_[s];
    return sum == 0.0 ? ScaledValue{} : ScaledValue{sum, closure_log_};
  }

  // chi with one logical fixed and all others summed.
  ScaledValue chi_single(size_t target, int8_t cls) {
    if (R_ == 1) {
      double sum = 0.0;
      for (const Labels& sig : table_[cls]) {
        double w = 1.0;
        for (size_t leg = 0; leg < sig.size(); ++leg) w *= legvec_[bq_[0][leg]][sig[leg]];
        sum += w;
      }
      return sum == 0.0 ? ScaledValue{} : ScaledValue{sum, 0.0};
    }
    ensure_closure();
    if (closure_zero_) return {};
    if (target == 0) {
      double sum = 0.0;
      for (size_t g = 0; g < group_; ++g) sum += trace_full_[cls * group_ + g];
      return sum == 0.0 ? ScaledValue{} : ScaledValue{sum, closure_log_};
    }
    // Rebuild the messages on the absorber chain from the target up to its
    // layer-2 ancestor, then splice that message into the cached closure.
    std::vector<size_t> chain;  // target, absorber(target), ..., layer-2 node
    size_t node = target;
    while (tg_.tiles[node].layer > 2) {
      chain.push_back(node);
      node = tg_.tiles[node].parent_right;
    }
    chain.push_back(node);
    Message msg = form(chain[0], cls, SIZE_MAX, nullptr);
    for (size_t i = 1; i < chain.size(); ++i)
      msg = form(chain[i], LogicalAssignment::kSum, chain[i - 1], &msg);
    size_t j = static_cast<size_t>(tg_.tiles[chain.back()].parent_right_slot);
    return closure_override(j, msg);
  }

  // Arbitrary per-node class specs: rebuild every message, no caching.
  ScaledValue chi_general(const std::vector<int8_t>& spec) {
    if (R_ == 1) return chi_single(0, spec[0]);
    std::vector<Message> ring2(7);
    for (size_t j = 0; j < 7; ++j) {
      size_t id = tg_.tiles[0].ec_children[j].second;
      ring2[j] = form_spec(id, spec);
      if (ring2[j].zero) return {};
    }
    double log = 0.0;
    for (auto& m : ring2) log += m.log_scale;
    double sum = 0.0;
    std::vector<double> cur(b2_ * b2_), nxt(b2_ * b2_);
    for (int c = 0; c < 4; ++c) {
      if (spec[0] >= 0 && spec[0] != c) continue;
      for (size_t g = 0; g < group_; ++g) {
        const Labels& sig = table_[c][g];
        sum += closed_trace(ring2, sig, cur, nxt);
      }
    }
    return sum == 0.0 ? ScaledValue{} : ScaledValue{sum, log};
  }

  // Warms every cache a parallel marginal sweep reads.
  void warm(const std::vector<size_t>& targets) {
    if (R_ == 1) return;
    ensure_closure();
    if (closure_zero_ || !cache_pf_) return;
    for (size_t t : targets) {
      if (t == 0) continue;
      size_t node = t;
      while (tg_.tiles[node].layer > 2) node = tg_.tiles[node].parent_right;
      ensure_h(static_cast<size_t>(tg_.tiles[node].parent_right_slot));
    }
  }

private:
  const Message& ensure_sum(size_t node) {
    if (!sum_msg_[node]) sum_msg_[node] = form(node, LogicalAssignment::kSum, SIZE_MAX, nullptr);
    return *sum_msg_[node];
  }

  // Message of one non-root tile; children use cached all-sum messages except
  // an optional override.
  Message form(size_t node, int8_t spec, size_t override_child, const Message* override_msg) {
    const TileInfo& t = tg_.tiles[node];
    if (static_cast<size_t>(t.layer) == R_) return form_leaf(node, spec);
    auto child = [&](size_t id) -> const Message& {
      return id == override_child ? *override_msg : ensure_sum(id);
    };
    const Message& mv = child(t.left_vchild);
    std::vector<const Message*> ecs;
    for (auto& [slot, id] : t.ec_children) ecs.push_back(&child(id));
    return assemble(node, spec, mv, ecs);
  }

  // Message with every node's class read from a full spec vector.
  Message form_spec(size_t node, const std::vector<int8_t>& spec) {
    const TileInfo& t = tg_.tiles[node];
    if (static_cast<size_t>(t.layer) == R_) return form_leaf(node, spec[node]);
    Message mv = form_spec(t.left_vchild, spec);
    std::vector<Message> kept;
    kept.reserve(t.ec_children.size());
    for (auto& [slot, id] : t.ec_children) kept.push_back(form_spec(id, spec));
    std::vector<const Message*> ecs;
    for (auto& m : kept) ecs.push_back(&m);
    return assemble(node, spec[node], mv, ecs);
  }

  Message form_leaf(size_t node, int8_t spec) {
    const TileInfo& t = tg_.tiles[node];
    Message out;
    out.updim = t.in_degree == 2 ? 16 : 4;
    out.bdim = 1;
    out.data.assign(out.updim, 0.0);
    for (int c = 0; c < 4; ++c) {
      if (spec >= 0 && spec != c) continue;
      for (const Labels& sig : table_[c]) {
        size_t u = t.in_degree == 2 ? sig[6] * size_t{4} + sig[5] : sig[0];
        double w = 1.0;
        for (size_t leg = 0; leg < 7; ++leg) {
          if (t.in_degree == 1 && leg == 0) continue;
          if (t.in_degree == 2 && (leg == 5 || leg == 6)) continue;
          w *= legvec_[bq_[node][leg]][sig[leg]];
        }
        out.data[u] += w;
      }
    }
    normalize(out);
    return out;
  }

  Message assemble(size_t node, int8_t spec, const Message& mv,
                   const std::vector<const Message*>& ecs) {
    const TileInfo& t = tg_.tiles[node];
    size_t d = R_ - static_cast<size_t>(t.layer);
    size_t B = size_t{1} << (2 * (d - 1));
    size_t D = 4 * B;
    Message out;
    out.updim = t.in_degree == 2 ? 16 : 4;
    out.bdim = D;
    out.zero = mv.zero;
    for (auto* m : ecs) out.zero = out.zero || m->zero;
    if (out.zero) return out;
    out.data.assign(out.updim * D * D, 0.0);

    std::vector<double> acc(D * B), nxt(D * B);
    for (int c = 0; c < 4; ++c) {
      if (spec >= 0 && spec != c) continue;
      for (const Labels& sig : table_[c]) {
        size_t u = t.in_degree == 2 ? sig[6] * size_t{4} + sig[5] : sig[0];
        size_t bl = sig[static_cast<size_t>(t.vslot_l)];
        size_t br = sig[static_cast<size_t>(t.vslot_r)];
        // Left flank: the vertex child's dangling up leg heads the bundle.
        for (size_t a = 0; a < 4; ++a)
          for (size_t l = 0; l < B; ++l)
            for (size_t r = 0; r < B; ++r)
              acc[(a * B + l) * B + r] = mv.at(a * 4 + bl, l, r);
        // Sweep the arc: each edge child contracts against the running right
        // bundle and contributes its own.
        for (size_t e = 0; e < ecs.size(); ++e) {
          const Message& me = *ecs[e];
          size_t lbl = sig[static_cast<size_t>(t.ec_children[e].first)];
          const double* em = &me.data[lbl * B * B];
          std::fill(nxt.begin(), nxt.end(), 0.0);
          for (size_t A = 0; A < D; ++A) {
            const double* arow = &acc[A * B];
            double* nrow = &nxt[A * B];
            for (size_t cur = 0; cur < B; ++cur) {
              double v = arow[cur];
              if (v == 0.0) continue;
              const double* erow = &em[cur * B];
              for (size_t r2 = 0; r2 < B; ++r2) nrow[r2] += v * erow[r2];
            }
          }
          acc.swap(nxt);
        }
        for (size_t A = 0; A < D; ++A)
          for (size_t cur = 0; cur < B; ++cur)
            out.at(u, A, br * B + cur) += acc[A * B + cur];
      }
    }
    normalize(out);
    if (!out.zero) {
      out.log_scale += mv.log_scale;
      for (auto* m : ecs) out.log_scale += m->log_scale;
    }
    return out;
  }

  void normalize(Message& m) {
    double mx = 0.0;
    for (double v : m.data) mx = std::max(mx, v);
    if (mx == 0.0) {
      m.zero = true;
      m.data.clear();
      return;
    }
    for (double& v : m.data) v /= mx;
    m.log_scale = std::log(mx);
  }

  // trace of the cyclic product of the seven layer-2 messages for one root
  // coset string.
  double closed_trace(const std::vector<Message>& ring2, const Labels& sig,
                      std::vector<double>& cur, std::vector<double>& nxt) {
    const double* m0 = &ring2[0].data[size_t{sig[0]} * b2_ * b2_];
    std::copy(m0, m0 + b2_ * b2_, cur.begin());
    for (size_t j = 1; j < 7; ++j) {
      const double* mj = &ring2[j].data[size_t{sig[j]} * b2_ * b2_];
      mat_mul(cur.data(), mj, nxt.data());
      cur.swap(nxt);
    }
    double tr = 0.0;
    for (size_t a = 0; a < b2_; ++a) tr += cur[a * b2_ + a];
    return tr;
  }

  void mat_mul(const double* a, const double* b, double* out) {
    std::fill(out, out + b2_ * b2_, 0.0);
    for (size_t i = 0; i < b2_; ++i)
      for (size_t kk = 0; kk < b2_; ++kk) {
        double v = a[i * b2_ + kk];
        if (v == 0.0) continue;
        const double* brow = &b[kk * b2_];
        double* orow = &out[i * b2_];
        for (size_t j = 0; j < b2_; ++j) orow[j] += v * brow[j];
      }
  }

  void ensure_closure() {
    if (closure_ready_) return;
    closure_ready_ = true;
    closure_zero_ = false;
    closure_log_ = 0.0;
    ring2_ids_.clear();
    for (auto& [slot, id] : tg_.tiles[0].ec_children) ring2_ids_.push_back(id);
    for (size_t id : ring2_ids_) {
      const Message& m = ensure_sum(id);
      if (m.zero) {
        closure_zero_ = true;
        return;
      }
      closure_log_ += m.log_scale;
    }
    size_t nsig = 4 * group_;
    size_t sq = b2_ * b2_;
    trace_full_.assign(nsig, 0.0);
    if (cache_pf_) {
      prefix_.assign(nsig * 7 * sq, 0.0);
      suffix_.assign(nsig * 7 * sq, 0.0);
    }
    std::vector<double> cur(sq), nxt(sq);
    for (int c = 0; c < 4; ++c) {
      for (size_t g = 0; g < group_; ++g) {
        size_t s = c * group_ + g;
        const Labels& sig = table_[c][g];
        if (!cache_pf_) {
          const Message& m0 = *sum_msg_[ring2_ids_[0]];
          const double* p = &m0.data[size_t{sig[0]} * sq];
          std::copy(p, p + sq, cur.begin());
          for (size_t j = 1; j < 7; ++j) {
            const Message& mj = *sum_msg_[ring2_ids_[j]];
            mat_mul(cur.data(), &mj.data[size_t{sig[j]} * sq], nxt.data());
            cur.swap(nxt);
          }
          double tr = 0.0;
          for (size_t a = 0; a < b2_; ++a) tr += cur[a * b2_ + a];
          trace_full_[s] = tr;
          continue;
        }
        double* pref = &prefix_[s * 7 * sq];
        double* suff = &suffix_[s * 7 * sq];
        const Message& m0 = *sum_msg_[ring2_ids_[0]];
        std::copy(&m0.data[size_t{sig[0]} * sq], &m0.data[size_t{sig[0]} * sq] + sq, pref);
        for (size_t j = 1; j < 7; ++j) {
          const Message& mj = *sum_msg_[ring2_ids_[j]];
          mat_mul(pref + (j - 1) * sq, &mj.data[size_t{sig[j]} * sq], pref + j * sq);
        }
        const Message& m6 = *sum_msg_[ring2_ids_[6]];
        std::copy(&m6.data[size_t{sig[6]} * sq], &m6.data[size_t{sig[6]} * sq] + sq, suff + 6 * sq);
        for (size_t j = 6; j-- > 1;) {
          const Message& mj = *sum_msg_[ring2_ids_[j]];
          mat_mul(&mj.data[size_t{sig[j]} * sq], suff + (j + 1) * sq, suff + j * sq);
        }
        double tr = 0.0;
        for (size_t a = 0; a < b2_; ++a) tr += pref[6 * sq + a * b2_ + a];
        trace_full_[s] = tr;
      }
    }
  }

  void ensure_h(size_t j) {
    if (h_ready_[j]) return;
    size_t sq = b2_ * b2_;
    size_t nsig = 4 * group_;
    h_[j].assign(nsig * sq, 0.0);
    std::vector<double> id(sq, 0.0);
    for (size_t a = 0; a < b2_; ++a) id[a * b2_ + a] = 1.0;
    for (size_t s = 0; s < nsig; ++s) {
      const double* pre = j == 0 ? id.data() : &prefix_[(s * 7 + (j - 1)) * sq];
      const double* suf = j == 6 ? id.data() : &suffix_[(s * 7 + (j + 1)) * sq];
      mat_mul(suf, pre, &h_[j][s * sq]);
    }
    h_ready_[j] = true;
  }

  // Closure with the layer-2 message in position j replaced.
  ScaledValue closure_override(size_t j, const Message& msg) {
    if (closure_zero_ || msg.zero) return {};
    double log = closure_log_ - sum_msg_[ring2_ids_[j]]->log_scale + msg.log_scale;
    size_t sq = b2_ * b2_;
    double sum = 0.0;
    if (cache_pf_) {
      ensure_h(j);
      for (int c = 0; c < 4; ++c) {
        for (size_t g = 0; g < group_; ++g) {
          size_t s = c * group_ + g;
          const Labels& sig = table_[c][g];
          const double* mp = &msg.data[size_t{sig[j]} * sq];
          const double* hp = &h_[j][s * sq];
          double v = 0.0;
          for (size_t a = 0; a < b2_; ++a)
            for (size_t b = 0; b < b2_; ++b) v += mp[a * b2_ + b] * hp[b * b2_ + a];
          sum += v;
        }
      }
    } else {
      std::vector<double> cur(sq), nxt(sq);
      for (int c = 0; c < 4; ++c) {
        for (size_t g = 0; g < group_; ++g) {
          const Labels& sig = table_[c][g];
          const double* first = j == 0 ? &msg.data[size_t{sig[0]} * sq]
                                       : &sum_msg_[ring2_ids_[0]]->data[size_t{sig[0]} * sq];
          std::copy(first, first + sq, cur.begin());
          for (size_t jj = 1; jj < 7; ++jj) {
            const double* mj = jj == j ? &msg.data[size_t{sig[jj]} * sq]
                                       : &sum_msg_[ring2_ids_[jj]]->data[size_t{sig[jj]} * sq];
            mat_mul(cur.data(), mj, nxt.data());
            cur.swap(nxt);
          }
          for (size_t a = 0; a < b2_; ++a) sum += cur[a * b2_ + a];
        }
      }
    }
    return sum == 0.0 ? ScaledValue{} : ScaledValue{sum, log};
  }

  const TensorNetworkCode& net_;
  const TilingInfo& tg_;
  size_t R_ = 1;
  std::array<std::vector<Labels>, 4> table_;
  size_t group_ = 0;
  std::vector<std::array<int, 7>> bq_;
  size_t b2_ = 1;
  bool cache_pf_ = false;

  std::vector<std::array<double, 4>> legvec_;
  std::vector<std::optional<Message>> sum_msg_;
  std::vector<size_t> ring2_ids_;
  bool closure_ready_ = false;
  bool closure_zero_ = false;
  double closure_log_ = 0.0;
  std::vector<double> trace_full_;     // per root string
  std::vector<double> prefix_, suffix_;  // per root string, per position
  std::vector<uint8_t> h_ready_;
  std::vector<std::vector<double>> h_;
};

// ---------------------------------------------------------------------------
// Frontier sweep for networks without tiling structure: nodes are absorbed in
// insertion order, keeping a sparse map from open-edge label patterns to
// accumulated weight.
// ---------------------------------------------------------------------------
class GenericEngine {
public:
  GenericEngine(const TensorNetworkCode& net, size_t max_open, size_t max_strings)
      : net_(net), max_strings_(max_strings) {
    size_t nn = net_.num_nodes();
    steps_.resize(nn);
    const auto& edges = net_.edges();
    std::vector<size_t> open;  // edge ids, kept sorted
    for (size_t t = 0; t < nn; ++t) {
      Step& st = steps_[t];
      std::vector<std::pair<size_t, size_t>> later;  // (edge id, own leg)
      for (size_t e = 0; e < edges.size(); ++e) {
        const auto& [a, b] = edges[e];
        size_t hi = std::max(a.node, b.node), lo = std::min(a.node, b.node);
        if (hi == t) {
          size_t leg = a.node == t ? a.leg : b.leg;
          size_t pos = static_cast<size_t>(
              std::find(open.begin(), open.end(), e) - open.begin());
          st.earlier.emplace_back(pos, leg);
        } else if (lo == t) {
          later.emplace_back(e, a.node == t ? a.leg : b.leg);
        }
      }
      std::vector<size_t> consumed;
      for (auto& [pos, leg] : st.earlier) consumed.push_back(open[pos]);
      std::vector<size_t> next_open;
      for (size_t e : open)
        if (std::find(consumed.begin(), consumed.end(), e) == consumed.end())
          next_open.push_back(e);
      for (auto& [e, leg] : later) next_open.push_back(e);
      std::sort(next_open.begin(), next_open.end());
      if (next_open.size() > max_open)
        throw ResourceError("contraction frontier too wide; network has no tiling schedule");
      // Where each new open label comes from: >=0 old key position,
      // -(i+1) label i of the node string's later legs.
      for (size_t e : next_open) {
        auto lit = std::find_if(later.begin(), later.end(),
                                [&](auto& p) { return p.first == e; });
        if (lit != later.end()) {
          st.rebuild.push_back(-static_cast<int>(lit - later.begin()) - 1);
        } else {
          // Survivors are read from the pre-step key, so record that position.
          size_t pos = static_cast<size_t>(
              std::find(open.begin(), open.end(), e) - open.begin());
          st.rebuild.push_back(static_cast<int>(pos));
        }
      }
      for (auto& [e, leg] : later) st.later_legs.push_back(leg);
      open = std::move(next_open);
    }
    const auto& bound = net_.boundary();
    for (size_t q = 0; q < bound.size(); ++q)
      steps_[bound[q].node].boundary.emplace_back(bound[q].leg, q);
  }

  void set_syndrome(const std::vector<std::array<double, 4>>& legvec) { legvec_ = legvec; }

  ScaledValue chi(const std::vector<int8_t>& spec) const {
    std::unordered_map<std::string, double> frontier;
    frontier.emplace("", 1.0);
    double log = 0.0;
    for (size_t t = 0; t < net_.num_nodes(); ++t) {
      const Step& st = steps_[t];
      const StabilizerCode& code = net_.node(t).code;
      const auto& qm = net_.qubit_map()[t];

      // Group this node's admissible strings by their earlier-edge labels.
      std::unordered_map<std::string, std::vector<std::pair<std::string, double>>> groups;
      LogicalClass word(code.k, Pauli::I);
      std::vector<size_t> sum_pos;
      for (size_t i = 0; i < code.k; ++i) {
        int8_t c = spec[qm[i]];
        if (c >= 0)
          word[i] = static_cast<Pauli>(c);
        else
          sum_pos.push_back(i);
      }
      size_t combos = size_t{1} << (2 * sum_pos.size());
      if (sum_pos.size() > 8) throw ResourceError("too many summed logicals on one node");
      for (size_t w = 0; w < combos; ++w) {
        for (size_t i = 0; i < sum_pos.size(); ++i)
          word[sum_pos[i]] = static_cast<Pauli>((w >> (2 * i)) & 3);
        for (const Labels& sig : coset_strings(code, word, max_strings_)) {
          double wt = 1.0;
          for (auto& [leg, q] : st.boundary) wt *= legvec_[q][sig[leg]];
          if (wt == 0.0) continue;
          std::string ekey(st.earlier.size(), '\0');
          for (size_t i = 0; i < st.earlier.size(); ++i)
            ekey[i] = static_cast<char>(sig[st.earlier[i].second]);
          std::string lkey(st.later_legs.size(), '\0');
          for (size_t i = 0; i < st.later_legs.size(); ++i)
            lkey[i] = static_cast<char>(sig[st.later_legs[i]]);
          groups[ekey].emplace_back(std::move(lkey), wt);
        }
      }

      std::unordered_map<std::string, double> next;
      std::string ekey(st.earlier.size(), '\0');
      for (const auto& [key, val] : frontier) {
        for (size_t i = 0; i < st.earlier.size(); ++i) ekey[i] = key[st.earlier[i].first];
        auto it = groups.find(ekey);
        if (it == groups.end()) continue;
        for (const auto& [lkey, wt] : it->second) {
          std::string nkey(st.rebuild.size(), '\0');
          for (size_t i = 0; i < st.rebuild.size(); ++i) {
            int src = st.rebuild[i];
            nkey[i] = src >= 0 ? key[static_cast<size_t>(src)] : lkey[static_cast<size_t>(-src - 1)];
          }
          next[nkey] += val * wt;
        }
      }
      double mx = 0.0;
      for (const auto& [key, val] : next) mx = std::max(mx, val);
      if (mx == 0.0) return {};
      for (auto& [key, val] : next) val /= mx;
      log += std::log(mx);
      frontier = std::move(next);
    }
    auto it = frontier.find("");
    if (it == frontier.end() || it->second == 0.0) return {};
    return ScaledValue{it->second, log};
  }

private:
  struct Step {
    std::vector<std::pair<size_t, size_t>> earlier;  // (key position, own leg)
    std::vector<size_t> later_legs;
    std::vector<int> rebuild;
    std::vector<std::pair<size_t, size_t>> boundary;  // (own leg, flat qubit)
  };

  const TensorNetworkCode& net_;
  size_t max_strings_;
  std::vector<Step> steps_;
  std::vector<std::array<double, 4>> legvec_;
};

QubitMarginal finish_marginal(size_t qubit, const std::array<ScaledValue, 4>& chis, size_t K) {
  QubitMarginal out;
  out.qubit = qubit;
  out.chi = chis;
  double maxls = 0.0;
  bool any = false;
  for (const auto& v : chis)
    if (!v.is_zero() && (!any || v.log_scale > maxls)) {
      maxls = v.log_scale;
      any = true;
    }
  if (!any) throw std::domain_error("syndrome has zero probability under this noise model");
  std::array<double, 4> rel{};
  double sum = 0.0;
  for (int c = 0; c < 4; ++c) {
    rel[c] = chis[c].is_zero() ? 0.0 : chis[c].mantissa * std::exp(chis[c].log_scale - maxls);
    sum += rel[c];
  }
  int best = 0;
  for (int c = 1; c < 4; ++c)
    if (rel[c] > rel[best]) best = c;
  for (int c = 0; c < 4; ++c) {
    out.conditional[c] = rel[c] / sum;
    if (c != best && rel[c] == rel[best]) out.tie = true;
  }
  out.decoded = static_cast<Pauli>(best);
  double kk = static_cast<double>(K);
  out.peaked = !out.tie && out.conditional[best] > kk / (kk + 1.0);
  return out;
}

}  // namespace

struct Decoder::Impl {
  std::unique_ptr<TilingEngine> tiling;
  std::unique_ptr<GenericEngine> generic;
  std::optional<ScaledValue> sp;

  ScaledValue chi(const std::vector<int8_t>& spec) {
    return tiling ? tiling->chi(spec) : generic->chi(spec);
  }
};

Decoder::Decoder(const TensorNetworkCode& net, NoiseModel noise, Options opt)
    : net_(net), noise_(std::move(noise)), opt_(opt), impl_(new Impl) {
  if (net_.num_nodes() == 0) throw std::invalid_argument("decoder: empty network");
  if (noise_.num_qubits() != net_.flat().n)
    throw std::invalid_argument("decoder: noise model size mismatch");
  validate(noise_);
  if (net_.tiling() && !opt_.force_generic)
    impl_->tiling = std::make_unique<TilingEngine>(net_, opt_.max_node_strings);
  else
    impl_->generic = std::make_unique<GenericEngine>(net_, opt_.max_open_legs,
                                                     opt_.max_node_strings);
}

Decoder::~Decoder() = default;

void Decoder::set_syndrome(const Syndrome& s) {
  if (s.bits.size() != net_.flat().stabilizers.size())
    throw std::invalid_argument("decoder: syndrome length mismatch");
  syndrome_ = s;
  auto lv = leg_vectors(net_.flat(), noise_, s);
  if (impl_->tiling)
    impl_->tiling->set_syndrome(lv);
  else
    impl_->generic->set_syndrome(lv);
  impl_->sp.reset();
}

ScaledValue Decoder::chi(const LogicalAssignment& assign) {
  if (!syndrome_) throw std::logic_error("decoder: no syndrome set");
  if (assign.classes.size() != net_.flat().k)
    throw std::invalid_argument("decoder: assignment length mismatch");
  for (int8_t c : assign.classes)
    if (c < -1 || c > 3) throw std::invalid_argument("decoder: bad class label");
  return impl_->chi(assign.classes);
}

ScaledValue Decoder::syndrome_probability() {
  if (!syndrome_) throw std::logic_error("decoder: no syndrome set");
  if (!impl_->sp) impl_->sp = impl_->chi(LogicalAssignment::all_sum(net_.flat().k).classes);
  return *impl_->sp;
}

QubitMarginal Decoder::marginal(size_t qubit, size_t num_targets) {
  if (!syndrome_) throw std::logic_error("decoder: no syndrome set");
  if (qubit >= net_.flat().k) throw std::invalid_argument("decoder: logical qubit out of range");
  std::array<ScaledValue, 4> chis;
  LogicalAssignment a = LogicalAssignment::all_sum(net_.flat().k);
  for (int c = 0; c < 4; ++c) {
    a.classes[qubit] = static_cast<int8_t>(c);
    chis[c] = impl_->chi(a.classes);
  }
  return finish_marginal(qubit, chis, std::max<size_t>(num_targets, 1));
}

DecodeResult Decoder::decode_marginal(size_t qubit) {
  DecodeResult out;
  out.marginals.push_back(marginal(qubit, 1));
  out.syndrome_probability = syndrome_probability();
  out.decoded = {out.marginals[0].decoded};
  out.tie = out.marginals[0].tie;
  return out;
}

DecodeResult Decoder::decode_parallel(const std::vector<size_t>& qubits, size_t threads) {
  if (!syndrome_) throw std::logic_error("decoder: no syndrome set");
  if (qubits.empty()) throw std::invalid_argument("decoder: no target qubits");
  {
    std::vector<size_t> sorted = qubits;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw std::invalid_argument("decoder: repeated target qubit");
  }
  DecodeResult out;
  out.syndrome_probability = syndrome_probability();
  if (impl_->tiling) impl_->tiling->warm(qubits);
  out.marginals.resize(qubits.size());
  size_t K = qubits.size();
  detail::parallel_for(qubits.size(), threads, [&](size_t i) {
    out.marginals[i] = marginal(qubits[i], K);
  });
  for (const auto& m : out.marginals) {
    out.decoded.push_back(m.decoded);
    out.tie = out.tie || m.tie;
  }
  return out;
}

DecodeResult Decoder::decode_joint(const std::vector<size_t>& qubits) {
  if (!syndrome_) throw std::logic_error("decoder: no syndrome set");
  if (qubits.empty()) throw std::invalid_argument("decoder: no target qubits");
  if (qubits.size() > opt_.max_joint_targets)
    throw ResourceError("decode_joint: too many target qubits");
  DecodeResult out;
  size_t K = qubits.size();
  size_t words = size_t{1} << (2 * K);
  std::vector<ScaledValue> vals(words);
  LogicalAssignment a = LogicalAssignment::all_sum(net_.flat().k);
  for (size_t w = 0; w < words; ++w) {
    for (size_t t = 0; t < K; ++t) a.classes[qubits[t]] = static_cast<int8_t>((w >> (2 * t)) & 3);
    vals[w] = impl_->chi(a.classes);
  }
  double maxls = 0.0;
  bool any = false;
  for (const auto& v : vals)
    if (!v.is_zero() && (!any || v.log_scale > maxls)) {
      maxls = v.log_scale;
      any = true;
    }
  if (!any) throw std::domain_error("syndrome has zero probability under this noise model");
  out.joint_conditional.assign(words, 0.0);
  double sum = 0.0;
  for (size_t w = 0; w < words; ++w) {
    double rel = vals[w].is_zero() ? 0.0
                                   : vals[w].mantissa * std::exp(vals[w].log_scale - maxls);
    out.joint_conditional[w] = rel;
    sum += rel;
  }
  size_t best = 0;
  for (size_t w = 1; w < words; ++w)
    if (out.joint_conditional[w] > out.joint_conditional[best]) best = w;
  for (size_t w = 0; w < words; ++w)
    if (w != best && out.joint_conditional[w] == out.joint_conditional[best]) out.tie = true;
  for (size_t w = 0; w < words; ++w) out.joint_conditional[w] /= sum;
  for (size_t t = 0; t < K; ++t) out.decoded.push_back(static_cast<Pauli>((best >> (2 * t)) & 3));
  out.decoded_conditional = out.joint_conditional[best];
  out.syndrome_probability = ScaledValue{sum, maxls};
  return out;
}

double Decoder::word_probability(const LogicalClass& word) {
  if (!syndrome_) throw std::logic_error("decoder: no syndrome set");
  if (word.size() != net_.flat().k)
    throw std::invalid_argument("decoder: word length mismatch");
  LogicalAssignment a = LogicalAssignment::all_sum(net_.flat().k);
  for (size_t i = 0; i < word.size(); ++i) a.classes[i] = static_cast<int8_t>(word[i]);
  ScaledValue num = impl_->chi(a.classes);
  ScaledValue den = syndrome_probability();
  if (den.is_zero()) throw std::domain_error("syndrome has zero probability under this noise model");
  return num.ratio(den);
}

ScaledValue chi(const TensorNetworkCode& net, const LogicalAssignment& assign,
                const Syndrome& s, const NoiseModel& noise) {
  Decoder d(net, noise);
  d.set_syndrome(s);
  return d.chi(assign);
}

DecodeResult decode_marginal(const TensorNetworkCode& net, size_t qubit,
                             const Syndrome& s, const NoiseModel& noise) {
  Decoder d(net, noise);
  d.set_syndrome(s);
  return d.decode_marginal(qubit);
}

DecodeResult decode_parallel(const TensorNetworkCode& net, const std::vector<size_t>& qubits,
                             const Syndrome& s, const NoiseModel& noise, size_t threads) {
  Decoder d(net, noise);
  d.set_syndrome(s);
  return d.decode_parallel(qubits, threads);
}

DecodeResult decode_joint(const TensorNetworkCode& net, const std::vector<size_t>& qubits,
                          const Syndrome& s, const NoiseModel& noise) {
  Decoder d(net, noise);
  d.set_syndrome(s);
  return d.decode_joint(qubits);
}

double word_probability(const TensorNetworkCode& net, const LogicalClass& word,
                        const Syndrome& s, const NoiseModel& noise) {
  Decoder d(net, noise);
  d.set_syndrome(s);
  return d.word_probability(word);
}

}  // namespace tncode
