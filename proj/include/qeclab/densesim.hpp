#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "qeclab/pauli.hpp"

namespace qeclab {

using cplx = std::complex<double>;

/// Exact dense simulator for small registers; the slow oracle backend.
///
/// Ket labeling is big-endian: qubit 0 is the leftmost bit of the basis
/// label, i.e. basis index bit (n-1-q) holds qubit q.
class StateVector {
public:
  static constexpr std::size_t kDefaultQubitCap = 14;

  explicit StateVector(std::size_t n, std::size_t cap = kDefaultQubitCap) : n_(n) {
    if (n == 0) throw std::invalid_argument("StateVector: n must be >= 1");
    if (n > cap) throw std::invalid_argument("StateVector: qubit cap exceeded");
    amps_.assign(std::size_t{1} << n, cplx{0.0, 0.0});
    amps_[0] = 1.0;
  }

  std::size_t n() const { return n_; }
  const std::vector<cplx>& amplitudes() const { return amps_; }
  cplx& amp(std::size_t i) { return amps_[i]; }
  const cplx& amp(std::size_t i) const { return amps_[i]; }

  std::size_t bit_pos(std::size_t q) const { return n_ - 1 - q; }

  double norm_sq() const {
    double s = 0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
  }

  void normalize() {
    const double nrm = std::sqrt(norm_sq());
    if (nrm < 1e-300) throw std::runtime_error("StateVector: zero-norm state");
    for (auto& a : amps_) a /= nrm;
  }

  /// Single-qubit unitary [[m00,m01],[m10,m11]] on qubit q.
  void apply_1q(std::size_t q, cplx m00, cplx m01, cplx m10, cplx m11) {
    check_target(q);
    const std::size_t mask = std::size_t{1} << bit_pos(q);
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if (i & mask) continue;
      const cplx a0 = amps_[i], a1 = amps_[i | mask];
      amps_[i] = m00 * a0 + m01 * a1;
      amps_[i | mask] = m10 * a0 + m11 * a1;
    }
  }

  void apply_x(std::size_t q) { apply_1q(q, 0, 1, 1, 0); }
  void apply_z(std::size_t q) { apply_1q(q, 1, 0, 0, -1); }
  void apply_h(std::size_t q) {
    const double s = 1.0 / std::sqrt(2.0);
    apply_1q(q, s, s, s, -s);
  }
  void apply_p(std::size_t q) { apply_1q(q, 1, 0, 0, cplx{0, 1}); }
  void apply_pdag(std::size_t q) { apply_1q(q, 1, 0, 0, cplx{0, -1}); }
  void apply_t(std::size_t q) {
    apply_1q(q, 1, 0, 0, std::polar(1.0, M_PI / 4));
  }

  /// exp(i*eps*sigma_axis) = cos(eps) I + i sin(eps) sigma_axis.
  void apply_rotation(std::size_t q, char axis, double eps) {
    const cplx c = std::cos(eps), is = cplx{0, 1} * std::sin(eps);
    switch (axis) {
      case 'X': apply_1q(q, c, is, is, c); break;
      case 'Y': apply_1q(q, c, is * cplx{0, -1}, is * cplx{0, 1}, c); break;
      case 'Z': apply_1q(q, c + is, 0, 0, c - is); break;
      default: throw std::invalid_argument("rotation: bad axis");
    }
  }

  void apply_cnot(std::size_t control, std::size_t target) {
    check_target(control);
    check_target(target);
    if (control == target)
      throw std::invalid_argument("CNOT: duplicate targets");
    const std::size_t cm = std::size_t{1} << bit_pos(control);
    const std::size_t tm = std::size_t{1} << bit_pos(target);
    for (std::size_t i = 0; i < amps_.size(); ++i)
      if ((i & cm) && !(i & tm)) std::swap(amps_[i], amps_[i | tm]);
  }

  /// Named-gate dispatch: X, Z, H, P, Pdag, T, CNOT.
  void apply_gate(const std::string& name, const std::vector<std::size_t>& targets) {
    if (name == "CNOT") {
      if (targets.size() != 2) throw std::invalid_argument("CNOT: need 2 targets");
      apply_cnot(targets[0], targets[1]);
      return;
    }
    if (targets.size() != 1) throw std::invalid_argument(name + ": need 1 target");
    const std::size_t q = targets[0];
    if (name == "X") apply_x(q);
    else if (name == "Z") apply_z(q);
    else if (name == "H") apply_h(q);
    else if (name == "P") apply_p(q);
    else if (name == "Pdag") apply_pdag(q);
    else if (name == "T") apply_t(q);
    else throw std::invalid_argument("apply_gate: unknown gate " + name);
  }

  /// Applies a full Pauli term including its phase.
  void apply_pauli(const PauliTerm& p) {
    if (p.n() != n_) throw std::invalid_argument("apply_pauli: size mismatch");
    static const cplx iphase[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    std::size_t xmask = 0, zmask = 0;
    for (std::size_t q = 0; q < n_; ++q) {
      if (p.x_bit(q)) xmask |= std::size_t{1} << bit_pos(q);
      if (p.z_bit(q)) zmask |= std::size_t{1} << bit_pos(q);
    }
    std::vector<cplx> out(amps_.size());
    const cplx ph = iphase[p.phase_exponent()];
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      // X^x Z^z |i> = (-1)^{z·i} |i ^ x>
      const int zpar = __builtin_popcountll(i & zmask) & 1;
      out[i ^ xmask] = (zpar ? -ph : ph) * amps_[i];
    }
    amps_ = std::move(out);
  }

  /// Expectation <psi|P|psi> of a Hermitian term.
  double expectation(const PauliTerm& p) const {
    StateVector tmp = *this;
    tmp.apply_pauli(p);
    cplx s = 0;
    for (std::size_t i = 0; i < amps_.size(); ++i)
      s += std::conj(amps_[i]) * tmp.amps_[i];
    return s.real();
  }

  struct MeasureResult {
    int outcome;        // +1 or -1
    double probability; // Born probability of the sampled outcome
  };

  /// Projective measurement of a Hermitian Pauli (phase ±1).
  template <typename Rng>
  MeasureResult measure_pauli(const PauliTerm& p, Rng& rng) {
    const double p_plus = prob_plus(p);
    int outcome;
    if (p_plus > 1.0 - 1e-12) outcome = +1;
    else if (p_plus < 1e-12) outcome = -1;
    else {
      std::uniform_real_distribution<double> u(0.0, 1.0);
      outcome = (u(rng) < p_plus) ? +1 : -1;
    }
    const double prob = collapse(p, outcome);
    return {outcome, prob};
  }

  /// Forces a given outcome; returns its Born probability (state collapses).
  double measure_forced(const PauliTerm& p, int outcome) {
    return collapse(p, outcome);
  }

  double prob_plus(const PauliTerm& p) const {
    require_hermitian(p);
    return 0.5 * (1.0 + expectation(p));
  }

  /// Z-basis measurement of a single qubit; returns the classical bit.
  template <typename Rng>
  int measure_qubit(std::size_t q, Rng& rng) {
    auto r = measure_pauli(PauliTerm::single(n_, q, 'Z'), rng);
    return r.outcome == +1 ? 0 : 1;
  }

  /// Projects onto the +1 eigenspace of each generator: Π (I+G_i)/2.
  void project_onto_stabilizers(const std::vector<PauliTerm>& gens) {
    for (const auto& g : gens) {
      require_hermitian(g);
      StateVector tmp = *this;
      tmp.apply_pauli(g);
      for (std::size_t i = 0; i < amps_.size(); ++i)
        amps_[i] = 0.5 * (amps_[i] + tmp.amps_[i]);
    }
    if (norm_sq() < 1e-20)
      throw std::runtime_error("project_onto_stabilizers: incompatible stabilizer set");
    normalize();
  }

  double fidelity(const StateVector& other) const {
    if (other.n_ != n_) throw std::invalid_argument("fidelity: size mismatch");
    cplx s = 0;
    for (std::size_t i = 0; i < amps_.size(); ++i)
      s += std::conj(amps_[i]) * other.amps_[i];
    return std::norm(s);
  }

  /// Fixes global phase: first nonzero amplitude made real positive.
  void canonicalize_phase() {
    for (const auto& a : amps_) {
      if (std::abs(a) > 1e-12) {
        const cplx ph = a / std::abs(a);
        for (auto& b : amps_) b /= ph;
        return;
      }
    }
  }

  /// (bitstring, amplitude) pairs for nonzero amplitudes, lexicographic.
  std::vector<std::pair<std::string, cplx>> dump(double eps = 1e-12) const {
    std::vector<std::pair<std::string, cplx>> out;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if (std::abs(amps_[i]) <= eps) continue;
      std::string bits(n_, '0');
      for (std::size_t q = 0; q < n_; ++q)
        if (i & (std::size_t{1} << bit_pos(q))) bits[q] = '1';
      out.emplace_back(bits, amps_[i]);
    }
    return out;
  }

private:
  void check_target(std::size_t q) const {
    if (q >= n_) throw std::out_of_range("StateVector: target out of range");
  }
  static void require_hermitian(const PauliTerm& p) {
    // Hermitian iff overall coefficient is ±1 once Y's i factors are folded in
    int y = 0;
    for (std::size_t q = 0; q < p.n(); ++q)
      if (p.x_bit(q) && p.z_bit(q)) ++y;
    if (((p.phase_exponent() - y) % 2 + 2) % 2 != 0)
      throw std::invalid_argument("measure/project: non-Hermitian Pauli operator");
  }

  double collapse(const PauliTerm& p, int outcome) {
    require_hermitian(p);
    StateVector tmp = *this;
    tmp.apply_pauli(p);
    const double sign = outcome > 0 ? 1.0 : -1.0;
    for (std::size_t i = 0; i < amps_.size(); ++i)
      amps_[i] = 0.5 * (amps_[i] + sign * tmp.amps_[i]);
    const double prob = norm_sq();
    if (prob < 1e-20)
      throw std::runtime_error("measure: impossible forced outcome");
    normalize();
    return prob;
  }

  std::size_t n_;
  std::vector<cplx> amps_;
};

}  // namespace qeclab
