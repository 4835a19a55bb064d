#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "qeclab/pauli.hpp"

namespace qeclab {

/// Heisenberg-picture conjugation g -> U g U^dag for the Clifford generators,
/// tracking the i^e phase exactly.
namespace clifford {

inline void flip_sign(PauliTerm& g) {
  g.set_phase_exponent(g.phase_exponent() + 2);
}

inline void conj_h(PauliTerm& g, std::size_t q) {
  const bool x = g.x_bit(q), z = g.z_bit(q);
  g.set_x(q, z);
  g.set_z(q, x);
  if (x && z) flip_sign(g);  // HYH = -Y
}

inline void conj_p(PauliTerm& g, std::size_t q) {
  if (g.x_bit(q)) {
    g.set_phase_exponent(g.phase_exponent() + 1);  // X -> iXZ
    g.set_z(q, !g.z_bit(q));
  }
}

inline void conj_pdag(PauliTerm& g, std::size_t q) {
  if (g.x_bit(q)) {
    g.set_phase_exponent(g.phase_exponent() + 3);
    g.set_z(q, !g.z_bit(q));
  }
}

inline void conj_x(PauliTerm& g, std::size_t q) {
  if (g.z_bit(q)) flip_sign(g);
}

inline void conj_y(PauliTerm& g, std::size_t q) {
  if (g.z_bit(q) != g.x_bit(q)) flip_sign(g);
}

inline void conj_z(PauliTerm& g, std::size_t q) {
  if (g.x_bit(q)) flip_sign(g);
}

inline void conj_cnot(PauliTerm& g, std::size_t c, std::size_t t) {
  // X_c -> X_c X_t, Z_t -> Z_c Z_t; in the i^e (X|Z) factor ordering the
  // reshuffle picks up no sign (cross-qubit factors commute)
  g.set_x(t, g.x_bit(t) != g.x_bit(c));
  g.set_z(c, g.z_bit(c) != g.z_bit(t));
}

inline void conj_gate(PauliTerm& g, const std::string& name,
                      const std::vector<std::size_t>& targets) {
  if (name == "CNOT") {
    if (targets.size() != 2 || targets[0] == targets[1])
      throw std::invalid_argument("CNOT: need 2 distinct targets");
    conj_cnot(g, targets[0], targets[1]);
    return;
  }
  if (targets.size() != 1)
    throw std::invalid_argument(name + ": need 1 target");
  const std::size_t q = targets[0];
  if (q >= g.n()) throw std::out_of_range("conj_gate: target out of range");
  if (name == "H") conj_h(g, q);
  else if (name == "P") conj_p(g, q);
  else if (name == "Pdag") conj_pdag(g, q);
  else if (name == "X") conj_x(g, q);
  else if (name == "Y") conj_y(g, q);
  else if (name == "Z") conj_z(g, q);
  else throw std::invalid_argument("conj_gate: non-Clifford gate " + name);
}

}  // namespace clifford
}  // namespace qeclab
