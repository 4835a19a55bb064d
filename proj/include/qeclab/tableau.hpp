#pragma once

#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "qeclab/clifford.hpp"
#include "qeclab/densesim.hpp"
#include "qeclab/pauli.hpp"
#include "qeclab/symplectic.hpp"

namespace qeclab {

/// Heisenberg-picture simulator: n stabilizer generators with paired
/// destabilizers for O(n^2) measurement updates.  Generator signs are
/// restricted to ±1 (phase exponent 0 or 2).
class StabilizerTableau {
public:
  /// |0>^n : stabilizers {+Z_q}, destabilizers {+X_q}.
  static StabilizerTableau computational_state(std::size_t n) {
    if (n == 0) throw std::invalid_argument("computational_state: n must be >= 1");
    StabilizerTableau t;
    t.n_ = n;
    for (std::size_t q = 0; q < n; ++q) {
      t.stabs_.push_back(PauliTerm::single(n, q, 'Z'));
      t.destabs_.push_back(PauliTerm::single(n, q, 'X'));
    }
    return t;
  }

  std::size_t n() const { return n_; }
  const std::vector<PauliTerm>& generators() const { return stabs_; }

  void apply_gate(const std::string& name, const std::vector<std::size_t>& targets) {
    for (auto t : targets)
      if (t >= n_) throw std::out_of_range("apply_gate: target out of range");
    for (auto* rows : {&stabs_, &destabs_})
      for (auto& g : *rows) clifford::conj_gate(g, name, targets);
  }

  /// Pauli application: flips the sign of every anticommuting generator.
  void apply_pauli(const PauliTerm& e) {
    if (e.n() != n_) throw std::invalid_argument("apply_pauli: size mismatch");
    for (auto& g : stabs_)
      if (!commutes(g, e)) flip_sign(g);
    for (auto& g : destabs_)
      if (!commutes(g, e)) flip_sign(g);
  }

  struct MeasureResult {
    int outcome;
    bool deterministic;
  };

  /// Projective measurement of a Hermitian Pauli with real sign.
  template <typename Rng>
  MeasureResult measure_pauli(const PauliTerm& p, Rng& rng) {
    if (p.n() != n_) throw std::invalid_argument("measure_pauli: size mismatch");
    std::size_t k = n_;
    for (std::size_t i = 0; i < n_; ++i) {
      if (!commutes(stabs_[i], p)) { k = i; break; }
    }
    if (k == n_) {
      // deterministic: ±p is a product of stabilizers picked out by the
      // destabilizers that anticommute with p
      PauliTerm prod = PauliTerm::identity(n_);
      for (std::size_t i = 0; i < n_; ++i)
        if (!commutes(destabs_[i], p)) prod = multiply(prod, stabs_[i]);
      if (!prod.same_masks(p))
        throw std::logic_error("measure_pauli: tableau invariant broken");
      const int rel = ((prod.phase_exponent() - p.phase_exponent()) % 4 + 4) % 4;
      return {rel == 0 ? +1 : -1, true};
    }
    std::uniform_int_distribution<int> coin(0, 1);
    const int outcome = coin(rng) ? -1 : +1;
    for (std::size_t i = 0; i < n_; ++i) {
      if (i != k && !commutes(stabs_[i], p)) stabs_[i] = multiply(stabs_[i], stabs_[k]);
      if (!commutes(destabs_[i], p) && i != k) destabs_[i] = multiply(destabs_[i], stabs_[k]);
    }
    destabs_[k] = stabs_[k];
    PauliTerm newstab = p;
    if (outcome < 0) newstab.set_phase_exponent(newstab.phase_exponent() + 2);
    stabs_[k] = newstab;
    return {outcome, false};
  }

  GroupRelation contains(const PauliTerm& p) const {
    return classify_against_group(stabs_, p);
  }

  /// Resets qubit q to |0> (measure Z, flip on -1).
  template <typename Rng>
  void reset_qubit(std::size_t q, Rng& rng) {
    auto r = measure_pauli(PauliTerm::single(n_, q, 'Z'), rng);
    if (r.outcome < 0) apply_pauli(PauliTerm::single(n_, q, 'X'));
  }

  /// Dense oracle bridge: the unique joint +1 eigenstate.
  StateVector to_statevector(std::size_t cap = StateVector::kDefaultQubitCap) const {
    if (n_ > cap) throw std::invalid_argument("to_statevector: qubit cap exceeded");
    // the rank-1 projector is nonzero on some basis state; scan from |0...0>
    for (std::size_t basis = 0; basis < (std::size_t{1} << n_); ++basis) {
      StateVector sv(n_, cap);
      sv.amp(0) = 0;
      sv.amp(basis) = 1;
      try {
        sv.project_onto_stabilizers(stabs_);
      } catch (const std::runtime_error&) {
        continue;
      }
      sv.canonicalize_phase();
      return sv;
    }
    throw std::logic_error("to_statevector: no supporting basis state found");
  }

  /// One signed Pauli string per generator line.
  std::string dump() const {
    std::string out;
    for (const auto& g : stabs_) {
      const std::string s = g.format();
      out += (s[0] == '-' ? s : "+" + s);
      out += '\n';
    }
    return out;
  }

  /// Debug invariant: pairwise commutation, independence, pairing.
  bool check_invariants() const {
    for (std::size_t i = 0; i < stabs_.size(); ++i)
      for (std::size_t j = i + 1; j < stabs_.size(); ++j)
        if (!commutes(stabs_[i], stabs_[j])) return false;
    if (symplectic_rank(stabs_) != stabs_.size()) return false;
    for (std::size_t i = 0; i < stabs_.size(); ++i)
      for (std::size_t j = 0; j < destabs_.size(); ++j)
        if (commutes(destabs_[j], stabs_[i]) != (i != j)) return false;
    return true;
  }

private:
  static void flip_sign(PauliTerm& g) { clifford::flip_sign(g); }

  std::size_t n_ = 0;
  std::vector<PauliTerm> stabs_, destabs_;
};

}  // namespace qeclab
