#include "tncode/stabilizer.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "tncode/gf2.hpp"

namespace tncode {

std::string Syndrome::str() const {
  std::string s(bits.size(), '0');
  for (size_t i = 0; i < bits.size(); ++i) s[i] = bits[i] ? '1' : '0';
  return s;
}

Syndrome Syndrome::parse(const std::string& text) {
  Syndrome s;
  s.bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') throw std::invalid_argument("syndrome must be a 0/1 string");
    s.bits.push_back(c == '1');
  }
  return s;
}

namespace {

PauliString swap_xz(const PauliString& p) {
  PauliString r(p.num_qubits());
  for (size_t i = 0; i < p.num_qubits(); ++i) {
    Pauli c = p.get(i);
    if (c == Pauli::X) c = Pauli::Z;
    else if (c == Pauli::Z) c = Pauli::X;
    r.set(i, c);
  }
  return r;
}

// Rows are (x-half | z-half) symplectic vectors.
Gf2Matrix symplectic_rows(const std::vector<PauliString>& ops, size_t n) {
  Gf2Matrix m(ops.size(), 2 * n);
  for (size_t r = 0; r < ops.size(); ++r)
    for (size_t i = 0; i < n; ++i) {
      if (ops[r].x(i)) m.set(r, i, true);
      if (ops[r].z(i)) m.set(r, n + i, true);
    }
  return m;
}

}  // namespace

StabilizerCode steane() {
  StabilizerCode c;
  c.n = 7;
  c.k = 1;
  const char* sx[3] = {"XXIXXII", "IXXXIIX", "XIXXIXI"};
  const char* ez[3] = {"IIZZIII", "ZIIZIII", "IZIZIII"};
  for (const char* s : sx) c.stabilizers.push_back(PauliString::parse(s));
  for (const char* s : sx) c.stabilizers.push_back(swap_xz(PauliString::parse(s)));
  for (const char* e : ez) c.pure_errors.push_back(PauliString::parse(e));
  for (const char* e : ez) c.pure_errors.push_back(swap_xz(PauliString::parse(e)));
  c.logical_x.push_back(PauliString::parse("XXXXXXX"));
  c.logical_z.push_back(PauliString::parse("ZZZZZZZ"));
  return c;
}

StabilizerCode trivial_code() {
  StabilizerCode c;
  c.n = 1;
  c.k = 1;
  c.logical_x.push_back(PauliString::parse("X"));
  c.logical_z.push_back(PauliString::parse("Z"));
  return c;
}

std::vector<std::string> validate(const StabilizerCode& code) {
  std::vector<std::string> bad;
  const size_t m = code.n - code.k;
  auto len_ok = [&](const std::vector<PauliString>& ops) {
    return std::all_of(ops.begin(), ops.end(),
                       [&](const PauliString& p) { return p.num_qubits() == code.n; });
  };
  if (code.k > code.n) bad.push_back("k exceeds n");
  if (code.stabilizers.size() != m) bad.push_back("stabilizer count is not n-k");
  if (code.pure_errors.size() != m) bad.push_back("pure error count is not n-k");
  if (code.logical_x.size() != code.k || code.logical_z.size() != code.k)
    bad.push_back("logical representative count is not k");
  if (!len_ok(code.stabilizers) || !len_ok(code.pure_errors) ||
      !len_ok(code.logical_x) || !len_ok(code.logical_z)) {
    bad.push_back("operator length differs from n");
    return bad;
  }
  if (!bad.empty()) return bad;

  for (size_t i = 0; i < m; ++i)
    for (size_t j = i + 1; j < m; ++j)
      if (!code.stabilizers[i].commutes_with(code.stabilizers[j])) {
        bad.push_back("stabilizers " + std::to_string(i) + " and " + std::to_string(j) +
                      " anticommute");
      }
  if (symplectic_rows(code.stabilizers, code.n).rank() != m)
    bad.push_back("stabilizer generators are dependent");

  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < m; ++j) {
      bool anti = !code.pure_errors[i].commutes_with(code.stabilizers[j]);
      if (anti != (i == j))
        bad.push_back("pure error " + std::to_string(i) + " pairs wrongly with stabilizer " +
                      std::to_string(j));
    }

  for (size_t a = 0; a < code.k; ++a) {
    for (size_t j = 0; j < m; ++j) {
      if (!code.logical_x[a].commutes_with(code.stabilizers[j]))
        bad.push_back("logical X " + std::to_string(a) + " anticommutes with stabilizer " +
                      std::to_string(j));
      if (!code.logical_z[a].commutes_with(code.stabilizers[j]))
        bad.push_back("logical Z " + std::to_string(a) + " anticommutes with stabilizer " +
                      std::to_string(j));
    }
    for (size_t b = 0; b < code.k; ++b) {
      bool anti = !code.logical_x[a].commutes_with(code.logical_z[b]);
      if (anti != (a == b))
        bad.push_back("logical X " + std::to_string(a) + " pairs wrongly with logical Z " +
                      std::to_string(b));
    }
    for (size_t b = a + 1; b < code.k; ++b) {
      if (!code.logical_x[a].commutes_with(code.logical_x[b]))
        bad.push_back("logical X operators " + std::to_string(a) + "," + std::to_string(b) +
                      " anticommute");
      if (!code.logical_z[a].commutes_with(code.logical_z[b]))
        bad.push_back("logical Z operators " + std::to_string(a) + "," + std::to_string(b) +
                      " anticommute");
    }
  }

  // All 2n listed generators together must span the full group mod phases.
  std::vector<PauliString> all = code.stabilizers;
  all.insert(all.end(), code.pure_errors.begin(), code.pure_errors.end());
  all.insert(all.end(), code.logical_x.begin(), code.logical_x.end());
  all.insert(all.end(), code.logical_z.begin(), code.logical_z.end());
  if (symplectic_rows(all, code.n).rank() != 2 * code.n)
    bad.push_back("generators do not span the full Pauli group");

  return bad;
}

Syndrome syndrome(const StabilizerCode& code, const PauliString& p) {
  if (p.num_qubits() != code.n) throw std::invalid_argument("operator length differs from n");
  Syndrome s;
  s.bits.resize(code.stabilizers.size());
  for (size_t i = 0; i < code.stabilizers.size(); ++i)
    s.bits[i] = !p.commutes_with(code.stabilizers[i]);
  return s;
}

PauliString pure_error(const StabilizerCode& code, const Syndrome& s) {
  if (s.bits.size() != code.stabilizers.size())
    throw std::invalid_argument("syndrome length differs from n-k");
  PauliString e(code.n);
  for (size_t i = 0; i < s.bits.size(); ++i)
    if (s.bits[i]) e *= code.pure_errors[i];
  return e;
}

LogicalClass logical_class(const StabilizerCode& code, const PauliString& p) {
  if (p.num_qubits() != code.n) throw std::invalid_argument("operator length differs from n");
  for (size_t i = 0; i < code.stabilizers.size(); ++i)
    if (!p.commutes_with(code.stabilizers[i]))
      throw std::invalid_argument("operator has nonzero syndrome; logical class undefined");
  LogicalClass word(code.k);
  for (size_t a = 0; a < code.k; ++a) {
    bool xpart = !p.commutes_with(code.logical_z[a]);
    bool zpart = !p.commutes_with(code.logical_x[a]);
    word[a] = xpart ? (zpart ? Pauli::Y : Pauli::X) : (zpart ? Pauli::Z : Pauli::I);
  }
  return word;
}

PauliString logical_representative(const StabilizerCode& code, const LogicalClass& word) {
  if (word.size() != code.k) throw std::invalid_argument("class word length differs from k");
  PauliString rep(code.n);
  for (size_t a = 0; a < code.k; ++a) {
    switch (word[a]) {
      case Pauli::I: break;
      case Pauli::X: rep *= code.logical_x[a]; break;
      case Pauli::Y: rep *= code.logical_x[a]; rep *= code.logical_z[a]; break;
      case Pauli::Z: rep *= code.logical_z[a]; break;
    }
  }
  return rep;
}

size_t distance_bruteforce(const StabilizerCode& code) {
  if (code.n > 14) throw std::invalid_argument("distance_bruteforce supports n <= 14");
  if (code.k == 0) throw std::invalid_argument("distance undefined for k = 0");

  auto qualifies = [&](const PauliString& p) {
    for (const PauliString& s : code.stabilizers)
      if (!p.commutes_with(s)) return false;
    for (const PauliString& l : code.logical_x)
      if (!p.commutes_with(l)) return true;
    for (const PauliString& l : code.logical_z)
      if (!p.commutes_with(l)) return true;
    return false;
  };

  // Weight-ordered search over supports and per-support Pauli patterns.
  std::vector<size_t> support;
  for (size_t w = 1; w <= code.n; ++w) {
    support.assign(w, 0);
    for (size_t i = 0; i < w; ++i) support[i] = i;
    while (true) {
      size_t patterns = 1;
      for (size_t i = 0; i < w; ++i) patterns *= 3;
      for (size_t pat = 0; pat < patterns; ++pat) {
        PauliString p(code.n);
        size_t t = pat;
        for (size_t i = 0; i < w; ++i) {
          p.set(support[i], static_cast<Pauli>(1 + t % 3));
          t /= 3;
        }
        if (qualifies(p)) return w;
      }
      // next combination
      size_t i = w;
      while (i > 0) {
        --i;
        if (support[i] != i + code.n - w) {
          ++support[i];
          for (size_t j = i + 1; j < w; ++j) support[j] = support[j - 1] + 1;
          break;
        }
        if (i == 0) { i = w + 1; break; }
      }
      if (i == w + 1) break;
    }
  }
  throw std::runtime_error("no logical operator found");
}

double chi_oracle(const StabilizerCode& code, const LogicalClass& word,
                  const Syndrome& s, const NoiseModel& noise) {
  const size_t m = code.n - code.k;
  if (m > 26) throw std::invalid_argument("chi_oracle supports n-k <= 26");
  if (noise.num_qubits() != code.n)
    throw std::invalid_argument("noise model length differs from n");

  PauliString cur = pure_error(code, s) * logical_representative(code, word);
  double total = noise.prob(cur);
  // Gray-code walk over the full stabilizer group.
  const uint64_t count = uint64_t{1} << m;
  for (uint64_t i = 1; i < count; ++i) {
    cur *= code.stabilizers[std::countr_zero(i)];
    total += noise.prob(cur);
  }
  return total;
}

}  // namespace tncode
