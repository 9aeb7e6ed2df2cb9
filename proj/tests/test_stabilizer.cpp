#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "tncode/stabilizer.hpp"

using namespace tncode;

TEST_SUITE("stabilizer") {

TEST_CASE("steane generator table") {
  StabilizerCode c = steane();
  CHECK(c.n == 7);
  CHECK(c.k == 1);
  REQUIRE(c.stabilizers.size() == 6);
  CHECK(c.stabilizers[0].str() == "XXIXXII");
  CHECK(c.stabilizers[1].str() == "IXXXIIX");
  CHECK(c.stabilizers[2].str() == "XIXXIXI");
  CHECK(c.stabilizers[3].str() == "ZZIZZII");
  CHECK(c.stabilizers[4].str() == "IZZZIIZ");
  CHECK(c.stabilizers[5].str() == "ZIZZIZI");
  CHECK(c.pure_errors[0].str() == "IIZZIII");
  CHECK(c.pure_errors[1].str() == "ZIIZIII");
  CHECK(c.pure_errors[2].str() == "IZIZIII");
  CHECK(c.pure_errors[3].str() == "IIXXIII");
  CHECK(c.pure_errors[4].str() == "XIIXIII");
  CHECK(c.pure_errors[5].str() == "IXIXIII");
  CHECK(c.logical_x[0].str() == "XXXXXXX");
  CHECK(c.logical_z[0].str() == "ZZZZZZZ");
  CHECK(validate(c).empty());
}

TEST_CASE("trivial code") {
  StabilizerCode c = trivial_code();
  CHECK(c.n == 1);
  CHECK(c.k == 1);
  CHECK(c.stabilizers.empty());
  CHECK(validate(c).empty());
  CHECK(syndrome(c, PauliString::parse("X")).bits.empty());
  CHECK(logical_class(c, PauliString::parse("Y")) == LogicalClass{Pauli::Y});
}

TEST_CASE("validate flags broken codes") {
  StabilizerCode c = steane();
  c.stabilizers[0] = PauliString::parse("XIIIIII");
  CHECK_FALSE(validate(c).empty());
}

TEST_CASE("syndrome of single-qubit errors") {
  StabilizerCode c = steane();
  PauliString e(7);
  e.set(2, Pauli::X);
  CHECK(syndrome(c, e).str() == "000011");
  PauliString ez(7);
  ez.set(2, Pauli::Z);
  CHECK(syndrome(c, ez).str() == "011000");
  CHECK(syndrome(c, PauliString(7)).str() == "000000");
  CHECK(syndrome(c, c.logical_x[0]).str() == "000000");
}

TEST_CASE("pure error reproduces its syndrome") {
  StabilizerCode c = steane();
  CHECK(pure_error(c, Syndrome::parse("011000")).str() == "ZZIIIII");
  for (unsigned s = 0; s < 64; ++s) {
    Syndrome sy;
    for (int b = 0; b < 6; ++b) sy.bits.push_back((s >> b) & 1);
    CHECK(syndrome(c, pure_error(c, sy)) == sy);
  }
}

TEST_CASE("syndrome parse round trip") {
  Syndrome s = Syndrome::parse("0101");
  CHECK(s.bits == std::vector<uint8_t>{0, 1, 0, 1});
  CHECK(s.str() == "0101");
  CHECK_THROWS_AS(Syndrome::parse("012"), std::invalid_argument);
}

TEST_CASE("logical class and representative") {
  StabilizerCode c = steane();
  CHECK(logical_class(c, PauliString(7)) == LogicalClass{Pauli::I});
  CHECK(logical_class(c, c.stabilizers[0]) == LogicalClass{Pauli::I});
  CHECK(logical_class(c, c.logical_x[0]) == LogicalClass{Pauli::X});
  CHECK(logical_class(c, c.logical_z[0]) == LogicalClass{Pauli::Z});
  CHECK(logical_class(c, c.logical_x[0] * c.logical_z[0]) == LogicalClass{Pauli::Y});
  CHECK(logical_class(c, c.logical_x[0] * c.stabilizers[3]) == LogicalClass{Pauli::X});
  // Representative inverts the classification.
  for (int w = 0; w < 4; ++w) {
    LogicalClass word{static_cast<Pauli>(w)};
    PauliString rep = logical_representative(c, word);
    CHECK(syndrome(c, rep).str() == "000000");
    CHECK(logical_class(c, rep) == word);
  }
  // Anticommuting-with-stabilizer input is rejected.
  PauliString e(7);
  e.set(0, Pauli::X);
  CHECK_THROWS_AS(logical_class(c, e), std::invalid_argument);
}

TEST_CASE("steane distance is 3") {
  CHECK(distance_bruteforce(steane()) == 3);
}

TEST_CASE("chi oracle sums to syndrome probability") {
  StabilizerCode c = steane();
  NoiseModel noise = depolarizing(0.1, 7);
  // Summing chi over classes and syndromes exhausts the full Pauli
  // distribution: total must be exactly 1.
  double total = 0.0;
  for (unsigned s = 0; s < 64; ++s) {
    Syndrome sy;
    for (int b = 0; b < 6; ++b) sy.bits.push_back((s >> b) & 1);
    for (int w = 0; w < 4; ++w)
      total += chi_oracle(c, {static_cast<Pauli>(w)}, sy, noise);
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("chi oracle on the trivial code is the noise row") {
  StabilizerCode c = trivial_code();
  NoiseModel noise = depolarizing(0.3, 1);
  Syndrome empty;
  CHECK(chi_oracle(c, {Pauli::I}, empty, noise) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(chi_oracle(c, {Pauli::X}, empty, noise) == doctest::Approx(0.1).epsilon(1e-15));
}

TEST_CASE("chi oracle dominated by the actual error class") {
  StabilizerCode c = steane();
  NoiseModel noise = depolarizing(0.01, 7);
  // A weight-1 error: its own class should dominate its syndrome's coset sums.
  PauliString e(7);
  e.set(4, Pauli::Y);
  Syndrome s = syndrome(c, e);
  LogicalClass mine = logical_class(c, e * pure_error(c, s));
  double best = chi_oracle(c, mine, s, noise);
  for (int w = 0; w < 4; ++w) {
    LogicalClass word{static_cast<Pauli>(w)};
    if (word != mine) CHECK(best > chi_oracle(c, word, s, noise));
  }
}

TEST_CASE("noise model validation") {
  NoiseModel ok = depolarizing(0.2, 3);
  CHECK_NOTHROW(validate(ok));
  CHECK(ok.prob(PauliString::parse("IXZ")) ==
        doctest::Approx(0.8 * (0.2 / 3) * (0.2 / 3)).epsilon(1e-14));
  NoiseModel bad = ok;
  bad.q[1][0] = 0.5;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  CHECK_THROWS_AS(depolarizing(-0.1, 2), std::invalid_argument);
}

TEST_CASE("guards") {
  StabilizerCode big;
  big.n = 15;
  big.k = 15;
  for (size_t i = 0; i < 15; ++i) {
    big.logical_x.push_back(PauliString(15));
    big.logical_z.push_back(PauliString(15));
    big.logical_x.back().set(i, Pauli::X);
    big.logical_z.back().set(i, Pauli::Z);
  }
  CHECK_THROWS(distance_bruteforce(big));
}

}  // TEST_SUITE
