#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <random>
#include <sstream>

#include "qeclab/ftsim.hpp"

using namespace qeclab;

namespace {

Circuit serial_cnot_chain() {
  return Circuit::parse(
      "QUBITS 6\n"
      "BLOCK A 0 1 2\n"
      "BLOCK B 3 4 5\n"
      "PREP 0\nPREP 1\nPREP 2\nPREP 3\nPREP 4\nPREP 5\n"
      "GATE CNOT 0 3\n"
      "GATE CNOT 3 4\n"
      "GATE CNOT 4 5\n");
}

Circuit transversal_cnots() {
  return Circuit::parse(
      "QUBITS 6\n"
      "BLOCK A 0 1 2\n"
      "BLOCK B 3 4 5\n"
      "PREP 0\nPREP 1\nPREP 2\nPREP 3\nPREP 4\nPREP 5\n"
      "GATE CNOT 0 3\n"
      "GATE CNOT 1 4\n"
      "GATE CNOT 2 5\n");
}

}  // namespace

TEST_CASE("circuit parsing") {
  auto c = Circuit::parse(
      "QUBITS 2\n"
      "# comment line\n"
      "PREP 0\n"
      "GATE H 0\n"
      "GATE CNOT 0 1\n"
      "MEASURE 1\n"
      "CTRL 0 X 0\n");
  CHECK(c.n == 2);
  CHECK(c.locations.size() == 5);
  CHECK(c.num_measurements == 1);

  CHECK_THROWS(Circuit::parse("GATE H 0\n"));            // QUBITS missing
  CHECK_THROWS(Circuit::parse("QUBITS 2\nGATE H 5\n"));  // out of range
  CHECK_THROWS(Circuit::parse("QUBITS 2\nCTRL 0 X 0\n"));  // control before measure
  CHECK_THROWS(Circuit::parse("QUBITS 2\nFROB 0\n"));
}

TEST_CASE("fault propagation through a CNOT cascade") {
  auto serial = serial_cnot_chain();
  // X on the control before the chain spreads to four qubits
  FaultEvent f{0, PauliTerm::single(6, 0, 'X')};
  auto r = propagate(serial, f);
  CHECK(r.residual == PauliTerm::parse("XIIXXX"));
  CHECK(r.residual.weight() == 4);

  // the staggered layout stops the cascade at one error per block
  auto trans = transversal_cnots();
  auto r2 = propagate(trans, f);
  CHECK(r2.residual == PauliTerm::parse("XIIXII"));
  CHECK(r2.residual.weight() == 2);

  // a fault after the last location is untouched
  FaultEvent tail{serial.locations.size(), PauliTerm::single(6, 4, 'Y')};
  CHECK(propagate(serial, tail).residual == PauliTerm::single(6, 4, 'Y'));

  CHECK_THROWS(propagate(serial, FaultEvent{99, PauliTerm::identity(6)}));
}

TEST_CASE("propagation is linear in the injected fault") {
  std::mt19937_64 rng(60);
  auto c = serial_cnot_chain();
  const char ops[4] = {'I', 'X', 'Y', 'Z'};
  for (int it = 0; it < 100; ++it) {
    PauliTerm a(6), b(6);
    for (std::size_t q = 0; q < 6; ++q) {
      a.set_op(q, ops[rng() % 4]);
      b.set_op(q, ops[rng() % 4]);
    }
    const std::size_t loc = rng() % (c.locations.size() + 1);
    auto ra = propagate(c, {loc, a}).residual;
    auto rb = propagate(c, {loc, b}).residual;
    auto rab = propagate(c, {loc, multiply(a, b)}).residual;
    CHECK(rab.same_masks(multiply(ra, rb)));
  }
}

TEST_CASE("measurements absorb faults and drive the Pauli frame") {
  auto c = Circuit::parse(
      "QUBITS 2\n"
      "BLOCK A 0 1\n"
      "PREP 0\n"
      "MEASURE 0\n"
      "CTRL 0 X 1\n");
  // X on qubit 0 flips the readout; the classical control then flips qubit 1
  auto r = propagate(c, {0, PauliTerm::single(2, 0, 'X')});
  CHECK(r.meas_flips == std::vector<std::uint8_t>{1});
  CHECK(r.residual == PauliTerm::parse("IX"));

  // Z on the measured qubit is invisible
  auto rz = propagate(c, {0, PauliTerm::single(2, 0, 'Z')});
  CHECK(rz.meas_flips == std::vector<std::uint8_t>{0});
  CHECK(rz.residual.is_identity());
}

TEST_CASE("single-fault criterion") {
  auto bad = check_fault_tolerance(serial_cnot_chain());
  CHECK_FALSE(bad.pass);
  CHECK(bad.worst_residual_weight == 4);
  CHECK(bad.worst_block == "B");
  CHECK(bad.worst_block_weight == 3);

  CHECK(check_fault_tolerance(transversal_cnots()).pass);

  Circuit no_blocks;
  no_blocks.n = 2;
  CHECK_THROWS(check_fault_tolerance(no_blocks));
}

TEST_CASE("transversal certification for the Steane code") {
  const auto code = make_steane7();

  auto x = transversal_validity(code, "X");
  CHECK(x.valid);
  CHECK(x.logical_action == "X->X, Z->-Z");

  auto z = transversal_validity(code, "Z");
  CHECK(z.valid);
  CHECK(z.logical_action == "X->-X, Z->Z");

  auto h = transversal_validity(code, "H");
  CHECK(h.valid);
  CHECK(h.logical_action == "X->Z, Z->X");

  // bitwise P implements the logical P-dagger: X -> -Y
  auto p = transversal_validity(code, "P");
  CHECK(p.valid);
  CHECK(p.logical_action == "X->-Y, Z->Z");

  auto pd = transversal_validity(code, "Pdag");
  CHECK(pd.valid);
  CHECK(pd.logical_action == "X->Y, Z->Z");

  auto cx = transversal_validity(code, "CNOT");
  CHECK(cx.valid);
  CHECK(cx.logical_action == "XI->(XI)(IX), IX->(IX), ZI->(ZI), IZ->(ZI)(IZ)");
}

TEST_CASE("transversal H is invalid on the five-qubit code") {
  auto h = transversal_validity(make_five_qubit(), "H");
  CHECK_FALSE(h.valid);
  CHECK(h.witness_index == 0);
  REQUIRE(h.witness);
  CHECK(h.witness->format() == "ZXXZI");  // image of XZZXI under bitwise H
}

TEST_CASE("CNOT conjugation of stabilizer pairs stays in the group") {
  // image of K^i (x) K^j for all 36 pairs, against the known products
  const auto code = make_steane7();
  const PauliTerm id(7);
  auto conj = [&](PauliTerm p) {
    for (std::size_t q = 0; q < 7; ++q) clifford::conj_cnot(p, q, 7 + q);
    return p;
  };
  auto expected = [&](std::size_t i, std::size_t j) {
    auto prod = [&](std::initializer_list<std::size_t> idx) {
      PauliTerm r(7);
      for (auto k : idx) r = multiply(r, code.generators[k]);
      return r;
    };
    // X-sector rows copy control->target; Z-sector columns copy target->control
    if (i < 3 && j < 3)
      return i == j ? tensor(prod({i}), id)
                    : tensor(prod({i}), prod({i, j}));
    if (i < 3) return tensor(prod({i, j}), prod({i, j}));
    if (j < 3) return tensor(prod({i}), prod({j}));
    return i == j ? tensor(id, prod({i}))
                  : tensor(prod({i, j}), prod({j}));
  };
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) {
      INFO("i=" << i << " j=" << j);
      auto img = conj(tensor(code.generators[i], code.generators[j]));
      CHECK(img == expected(i, j));
    }
}

TEST_CASE("fault-tolerant Steane preparation, noiseless") {
  std::mt19937_64 rng(61);
  auto result = ft_steane_prep(rng);
  REQUIRE(result.success);
  CHECK(result.cat_rejections == 0);

  // output on the data block is exactly the 8-term logical zero
  auto sv = result.tableau.to_statevector();
  const auto code = make_steane7();
  StateVector ref(12);
  {
    std::mt19937_64 r2(62);
    auto zero = encode_zero_dense(code, r2);
    for (std::size_t i = 0; i < (std::size_t{1} << 7); ++i)
      ref.amp(i << 5) = zero.amp(i);  // ancillas 7..11 in |0>
  }
  CHECK(sv.fidelity(ref) == Catch::Approx(1.0));
}

TEST_CASE("corrupted cat states are rejected by the verifier") {
  // an X on cat qubit 1 during preparation makes |0001>+|1110>-type states:
  // qubits 7 and 10 then disagree and the verifier fires
  std::mt19937_64 rng(63);
  FtPrepOptions opt;
  bool injected = false;
  opt.injector = [&](StabilizerTableau& t, const std::string& stage) {
    if (!injected && stage == "cat_prep:0:0") {
      t.apply_pauli(PauliTerm::single(12, 10, 'X'));
      injected = true;
    }
  };
  auto result = ft_steane_prep(rng, opt);
  CHECK(result.success);
  CHECK(result.cat_rejections >= 1);
  CHECK(result.tableau.contains(PauliTerm::parse("IIIXXXXIIIII")) ==
        GroupRelation::in_group_plus);
}

TEST_CASE("a flipped syndrome round is outvoted") {
  // Z on a cat qubit flips one extraction bit; the tie-breaking third
  // round restores the correct majority and the output is still clean
  std::mt19937_64 rng(64);
  FtPrepOptions opt;
  bool injected = false;
  opt.injector = [&](StabilizerTableau& t, const std::string& stage) {
    if (!injected && stage == "cat_verified:0:0") {
      t.apply_pauli(PauliTerm::single(12, 8, 'Z'));
      injected = true;
    }
  };
  auto result = ft_steane_prep(rng, opt);
  REQUIRE(result.success);
  const auto code = make_steane7();
  for (const auto& g : code.generators) {
    CHECK(result.tableau.contains(tensor(g, PauliTerm::identity(5))) ==
          GroupRelation::in_group_plus);
  }
}
