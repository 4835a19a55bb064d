#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

#include "qeclab/densesim.hpp"
#include "qeclab/pauli.hpp"

namespace qeclab {

/// I.i.d. per-qubit Pauli error rates.
struct PauliChannel {
  double p_x = 0, p_y = 0, p_z = 0;

  double p() const { return p_x + p_y + p_z; }

  void check() const {
    if (p_x < 0 || p_y < 0 || p_z < 0 || p() > 1.0 + 1e-12)
      throw std::invalid_argument("PauliChannel: probabilities outside simplex");
  }

  static PauliChannel depolarizing(double p) { return {p / 3, p / 3, p / 3}; }
  static PauliChannel bit_flip(double p) { return {p, 0, 0}; }
  static PauliChannel phase_flip(double p) { return {0, 0, p}; }
};

/// Small systematic rotation exp(i eps sigma) on every qubit it touches.
struct CoherentError {
  char axis = 'X';
  double angle = 0;
};

struct MeasurementModel {
  double p_loss = 0;        // per-qubit loss probability
  double p_meas_flip = 0;   // classical readout flip
  double p_init_flip = 0;   // preparation gives |1> instead of |0>
};

struct LindbladProbs {
  double p_x, p_y, p_z;
  double p() const { return p_x + p_y + p_z; }
};

/// Closed-form Pauli-twirl probabilities for amplitude damping at rate
/// Gamma plus pure dephasing at rate Gamma_z after time t.
inline LindbladProbs lindblad_pauli_probs(double gamma, double gamma_z, double t) {
  if (gamma < 0 || gamma_z < 0 || t < 0)
    throw std::invalid_argument("lindblad_pauli_probs: negative argument");
  const double pxy = 0.25 * (1.0 - std::exp(-2.0 * gamma * t));
  const double pz =
      0.25 * (1.0 + std::exp(-2.0 * gamma * t) -
              2.0 * std::exp(-(gamma + 2.0 * gamma_z) * t));
  return {pxy, pxy, pz};
}

template <typename Rng>
PauliTerm sample_pauli_error(const PauliChannel& ch, std::size_t n, Rng& rng) {
  ch.check();
  PauliTerm e(n);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t q = 0; q < n; ++q) {
    const double r = u(rng);
    if (r < ch.p_x) e.set_op(q, 'X');
    else if (r < ch.p_x + ch.p_y) e.set_op(q, 'Y');
    else if (r < ch.p()) e.set_op(q, 'Z');
  }
  return e;
}

// ---------------------------------------------------------------------------
// coherent-error digitization on the 3-qubit code

/// One correction cycle of the 3-qubit bit-flip code under U^3 = exp(i eps X)
/// on every data qubit.  Branch order matches the ancilla readout (a1 a2)
/// measuring Z1Z2 and Z1Z3: 00, 11, 10, 01 correcting I, X1, X2, X3.
struct CoherentRep3Report {
  std::complex<double> c0, c1, c2, c3;  // expansion of U^3 over X-weight
  double f_unencoded;                   // cos^2(eps)
  double f_no_detection;                // |c0|^2 / (|c0|^2 + |c3|^2)
  double f_error_detected;              // |c1|^2 / (|c1|^2 + |c2|^2)
  double p_no_detection;                // |c0|^2 + |c3|^2
  double p_detected_each;               // |c1|^2 + |c2|^2, per syndrome

  double sim_probs[4];                  // densesim branch probabilities
  double sim_fidelities[4];             // post-correction overlap with clean state
  double max_deviation;                 // analytic vs simulated
};

inline CoherentRep3Report digitize_coherent_rep3(double eps) {
  if (!(std::abs(eps) < M_PI / 2))
    throw std::invalid_argument("digitize_coherent_rep3: need |eps| < pi/2");
  const double c = std::cos(eps), s = std::sin(eps);
  const std::complex<double> I(0, 1);
  CoherentRep3Report r{};
  r.c0 = c * c * c;
  r.c1 = I * c * c * s;
  r.c2 = -c * s * s;
  r.c3 = -I * s * s * s;
  r.f_unencoded = c * c;
  r.p_no_detection = std::norm(r.c0) + std::norm(r.c3);
  r.p_detected_each = std::norm(r.c1) + std::norm(r.c2);
  r.f_no_detection = std::norm(r.c0) / r.p_no_detection;
  // a corrected detected branch matches the unencoded qubit exactly, which
  // also covers the eps = 0 case where the branch has probability zero
  r.f_error_detected = r.p_detected_each > 0
                           ? std::norm(r.c1) / r.p_detected_each
                           : r.f_unencoded;

  // 5-qubit circuit: data 0..2, ancillas 3 (Z1Z2) and 4 (Z1Z3)
  struct Branch { int a1, a2; std::size_t correct; };
  const Branch branches[4] = {{+1, +1, 3}, {-1, -1, 0}, {-1, +1, 1}, {+1, -1, 2}};
  r.max_deviation = 0;
  for (int b = 0; b < 4; ++b) {
    const double want_p = (b == 0) ? r.p_no_detection : r.p_detected_each;
    const double want_f = (b == 0) ? r.f_no_detection : r.f_error_detected;
    if (want_p < 1e-30) {  // branch never fires (eps = 0)
      r.sim_probs[b] = 0;
      r.sim_fidelities[b] = want_f;
      continue;
    }
    StateVector sv(5);
    sv.apply_rotation(0, 'X', eps);
    sv.apply_rotation(1, 'X', eps);
    sv.apply_rotation(2, 'X', eps);
    sv.apply_cnot(0, 3); sv.apply_cnot(1, 3);
    sv.apply_cnot(0, 4); sv.apply_cnot(2, 4);
    double prob = sv.measure_forced(PauliTerm::single(5, 3, 'Z'), branches[b].a1);
    prob *= sv.measure_forced(PauliTerm::single(5, 4, 'Z'), branches[b].a2);
    if (branches[b].correct < 3) sv.apply_x(branches[b].correct);
    // fidelity against |000> (x) |a1 a2>: overlap = amplitude of that basis ket
    std::size_t ket = 0;
    if (branches[b].a1 < 0) ket |= std::size_t{1} << sv.bit_pos(3);
    if (branches[b].a2 < 0) ket |= std::size_t{1} << sv.bit_pos(4);
    const double fid = std::norm(sv.amp(ket));
    r.sim_probs[b] = prob;
    r.sim_fidelities[b] = fid;
    r.max_deviation = std::max(r.max_deviation, std::abs(prob - want_p));
    r.max_deviation = std::max(r.max_deviation, std::abs(fid - want_f));
  }
  return r;
}

// ---------------------------------------------------------------------------
// loss as located 50/50 dephasing

/// Loss with detection and fresh replacement: the replaced qubit carries a Z
/// relative to the pre-loss state with probability 1/2.  Returns whether the
/// Z fired; callers treat the site as a located error either way.
template <typename State, typename Rng>
bool apply_loss(State& state, std::size_t q, Rng& rng) {
  std::bernoulli_distribution coin(0.5);
  const bool z = coin(rng);
  if (z) state.apply_pauli(PauliTerm::single(state.n(), q, 'Z'));
  return z;
}

}  // namespace qeclab
