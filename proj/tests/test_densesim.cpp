#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "qeclab/codes.hpp"
#include "qeclab/densesim.hpp"

using namespace qeclab;

TEST_CASE("ket labeling is big-endian: qubit 0 is the leftmost label") {
  StateVector sv(2);
  sv.apply_x(0);
  // |10> lives at basis index 2
  CHECK(std::abs(sv.amp(2) - cplx{1, 0}) < 1e-12);
  CHECK(sv.dump()[0].first == "10");
}

TEST_CASE("basic gates") {
  StateVector sv(1);
  sv.apply_h(0);
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(sv.amp(0) - s) < 1e-12);
  CHECK(std::abs(sv.amp(1) - s) < 1e-12);

  CHECK_THROWS(sv.apply_x(1));
  CHECK_THROWS(sv.apply_cnot(0, 0));
}

TEST_CASE("CNOT fanout copies a superposition into a GHZ-like state") {
  // (a|0> + b|1>)|00> -> a|000> + b|111>
  const cplx a{0.6, 0.0}, b{0.0, 0.8};
  StateVector sv(3);
  sv.amp(0) = a;
  sv.amp(0b100) = b;
  sv.apply_cnot(0, 1);
  sv.apply_cnot(0, 2);
  CHECK(std::abs(sv.amp(0b000) - a) < 1e-12);
  CHECK(std::abs(sv.amp(0b111) - b) < 1e-12);
  CHECK(std::abs(sv.norm_sq() - 1.0) < 1e-12);
}

TEST_CASE("repeated small X rotations accumulate coherently") {
  // N applications of exp(i eps X): P(|1>) = sin^2(N eps)
  const double eps = 0.02;
  for (int N : {1, 5, 25}) {
    StateVector sv(1);
    for (int k = 0; k < N; ++k) sv.apply_rotation(0, 'X', eps);
    const double p1 = std::norm(sv.amp(1));
    CHECK(std::abs(p1 - std::pow(std::sin(N * eps), 2)) < 1e-10);
  }
}

TEST_CASE("measure_pauli") {
  std::mt19937_64 rng(3);

  StateVector sv(1);
  auto r = sv.measure_pauli(PauliTerm::parse("Z"), rng);
  CHECK(r.outcome == +1);
  CHECK(r.probability == Catch::Approx(1.0));

  // XXX on |000>: +-1 each at probability 1/2; +1 branch is the GHZ state
  StateVector ghz(3);
  CHECK(ghz.prob_plus(PauliTerm::parse("XXX")) == Catch::Approx(0.5));
  ghz.measure_forced(PauliTerm::parse("XXX"), +1);
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(ghz.amp(0b000) - s) < 1e-12);
  CHECK(std::abs(ghz.amp(0b111) - s) < 1e-12);

  // non-Hermitian operators are rejected
  StateVector sv2(1);
  CHECK_THROWS(sv2.prob_plus(PauliTerm::parse("iX")));
}

TEST_CASE("3-qubit parity readout reproduces the bit-flip syndrome table") {
  // data 0..2, ancilla 3 reads Z0Z1, ancilla 4 reads Z0Z2
  const std::vector<std::pair<std::string, std::pair<int, int>>> rows = {
      {"III", {0, 0}}, {"XII", {1, 1}}, {"IXI", {1, 0}}, {"IIX", {0, 1}}};
  std::mt19937_64 rng(4);
  for (const auto& [err, bits] : rows) {
    StateVector sv(5);
    sv.apply_h(0);  // arbitrary logical state a|000>+b|111>
    sv.apply_cnot(0, 1);
    sv.apply_cnot(0, 2);
    for (std::size_t q = 0; q < 3; ++q)
      if (err[q] == 'X') sv.apply_x(q);
    sv.apply_cnot(0, 3);
    sv.apply_cnot(1, 3);
    sv.apply_cnot(0, 4);
    sv.apply_cnot(2, 4);
    CHECK(sv.measure_qubit(3, rng) == bits.first);
    CHECK(sv.measure_qubit(4, rng) == bits.second);
  }
}

TEST_CASE("stabilizer projection builds the Steane logical zero") {
  StateVector sv(7);
  const auto code = make_steane7();
  // |0>^7 is already a +1 eigenstate of the Z generators; projecting with
  // the X generators yields the 8-term expansion at 1/sqrt(8)
  sv.project_onto_stabilizers(
      {code.generators[0], code.generators[1], code.generators[2]});
  auto terms = sv.dump();
  REQUIRE(terms.size() == 8);
  for (const auto& [ket, amp] : terms)
    CHECK(std::abs(amp - cplx{1.0 / std::sqrt(8.0), 0}) < 1e-12);
}

TEST_CASE("projection with an empty generator list is the identity") {
  StateVector sv(2);
  sv.apply_h(0);
  StateVector before = sv;
  sv.project_onto_stabilizers({});
  CHECK(sv.fidelity(before) == Catch::Approx(1.0));
}

TEST_CASE("incompatible projection is rejected") {
  StateVector sv(1);  // |0> has zero overlap with the -Z eigenspace
  CHECK_THROWS(sv.project_onto_stabilizers({PauliTerm::parse("-Z")}));
}

TEST_CASE("fidelity") {
  StateVector a(1);
  CHECK(a.fidelity(a) == Catch::Approx(1.0));

  StateVector rotated(1);
  const double eps = 0.3;
  rotated.apply_rotation(0, 'X', eps);
  CHECK(a.fidelity(rotated) == Catch::Approx(std::pow(std::cos(eps), 2)));

  StateVector b(1);
  b.apply_x(0);
  CHECK(a.fidelity(b) == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("involutions and norm drift") {
  std::mt19937_64 rng(5);
  StateVector sv(3);
  for (std::size_t i = 0; i < 8; ++i)
    sv.amp(i) = {std::uniform_real_distribution<>(-1, 1)(rng),
                 std::uniform_real_distribution<>(-1, 1)(rng)};
  sv.normalize();
  StateVector orig = sv;

  sv.apply_h(1);
  sv.apply_h(1);
  CHECK(sv.fidelity(orig) == Catch::Approx(1.0));

  for (int k = 0; k < 4; ++k) sv.apply_p(2);
  CHECK(sv.fidelity(orig) == Catch::Approx(1.0));

  sv.apply_cnot(0, 2);
  sv.apply_cnot(0, 2);
  CHECK(sv.fidelity(orig) == Catch::Approx(1.0));
  CHECK(std::abs(sv.norm_sq() - 1.0) < 1e-10);
}

TEST_CASE("qubit cap") {
  CHECK_THROWS(StateVector(15));
  CHECK_THROWS(StateVector(0));
}
