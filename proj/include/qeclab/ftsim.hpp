#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qeclab/clifford.hpp"
#include "qeclab/codes.hpp"
#include "qeclab/decode.hpp"
#include "qeclab/noise.hpp"
#include "qeclab/pauli.hpp"
#include "qeclab/symplectic.hpp"
#include "qeclab/tableau.hpp"

namespace qeclab {

// ---------------------------------------------------------------------------
// circuits

struct Location {
  enum class Kind { prep, gate, measure, ctrl };
  Kind kind;
  std::string gate;                  // gate / ctrl
  std::vector<std::size_t> targets;  // gate / ctrl targets; prep/measure: {q}
  std::size_t meas_id = 0;           // measure: sequential id
  std::size_t meas_ref = 0;          // ctrl: id of the controlling measurement
};

/// Straight-line Clifford circuit with classical Pauli feed-forward.
///
/// Text form, one location per line:
///   QUBITS n
///   BLOCK label q...
///   PREP q | GATE name q... | MEASURE q | CTRL m name q...
struct Circuit {
  std::size_t n = 0;
  std::vector<Location> locations;
  std::map<std::string, std::vector<std::size_t>> blocks;
  std::size_t num_measurements = 0;

  void validate() const {
    if (n == 0) throw std::invalid_argument("Circuit: QUBITS missing or zero");
    std::size_t seen_meas = 0;
    for (const auto& loc : locations) {
      for (auto q : loc.targets)
        if (q >= n) throw std::invalid_argument("Circuit: target out of range");
      if (loc.kind == Location::Kind::measure) ++seen_meas;
      if (loc.kind == Location::Kind::ctrl && loc.meas_ref >= seen_meas)
        throw std::invalid_argument("Circuit: control references a later measurement");
    }
    for (const auto& [label, qs] : blocks)
      for (auto q : qs)
        if (q >= n) throw std::invalid_argument("Circuit: block qubit out of range");
  }

  static Circuit parse(const std::string& text) {
    Circuit c;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      std::istringstream ls(line);
      std::string word;
      if (!(ls >> word) || word[0] == '#') continue;
      if (word == "QUBITS") {
        if (!(ls >> c.n)) throw std::invalid_argument("Circuit: bad QUBITS line");
      } else if (word == "BLOCK") {
        std::string label;
        if (!(ls >> label)) throw std::invalid_argument("Circuit: bad BLOCK line");
        std::size_t q;
        while (ls >> q) c.blocks[label].push_back(q);
      } else if (word == "PREP" || word == "MEASURE") {
        Location loc;
        loc.kind = word == "PREP" ? Location::Kind::prep : Location::Kind::measure;
        std::size_t q;
        if (!(ls >> q)) throw std::invalid_argument("Circuit: bad " + word + " line");
        loc.targets = {q};
        if (loc.kind == Location::Kind::measure) loc.meas_id = c.num_measurements++;
        c.locations.push_back(loc);
      } else if (word == "GATE" || word == "CTRL") {
        Location loc;
        loc.kind = word == "GATE" ? Location::Kind::gate : Location::Kind::ctrl;
        if (loc.kind == Location::Kind::ctrl && !(ls >> loc.meas_ref))
          throw std::invalid_argument("Circuit: bad CTRL line");
        if (!(ls >> loc.gate)) throw std::invalid_argument("Circuit: bad " + word + " line");
        std::size_t q;
        while (ls >> q) loc.targets.push_back(q);
        if (loc.targets.empty())
          throw std::invalid_argument("Circuit: " + word + " without targets");
        c.locations.push_back(loc);
      } else {
        throw std::invalid_argument("Circuit: unknown keyword " + word);
      }
    }
    c.validate();
    return c;
  }
};

// ---------------------------------------------------------------------------
// single-fault propagation

struct FaultEvent {
  std::size_t location;  // fault inserted after this location index
  PauliTerm pauli;       // on the full register
};

struct PropagationResult {
  PauliTerm residual;
  std::vector<std::uint8_t> meas_flips;  // by measurement id
};

namespace detail {

inline void clear_qubit(PauliTerm& p, std::size_t q) {
  if (p.x_bit(q) && p.z_bit(q))
    p.set_phase_exponent(p.phase_exponent() + 3);  // drop the Y's i
  p.set_x(q, false);
  p.set_z(q, false);
}

}  // namespace detail

/// Conjugates the injected Pauli through every later location.  Measurements
/// absorb the fault on their qubit and record whether the readout flips;
/// classical controls are tracked as a Pauli frame (only Pauli-gate controls
/// are supported, matching feed-forward corrections).
inline PropagationResult propagate(const Circuit& c, const FaultEvent& fault) {
  if (fault.location >= c.locations.size() + 1)
    throw std::out_of_range("propagate: fault location out of range");
  if (fault.pauli.n() != c.n)
    throw std::invalid_argument("propagate: fault register size mismatch");
  PropagationResult r{fault.pauli, std::vector<std::uint8_t>(c.num_measurements, 0)};
  for (std::size_t i = fault.location + 1; i < c.locations.size(); ++i) {
    const auto& loc = c.locations[i];
    switch (loc.kind) {
      case Location::Kind::prep:
        detail::clear_qubit(r.residual, loc.targets[0]);
        break;
      case Location::Kind::gate:
        clifford::conj_gate(r.residual, loc.gate, loc.targets);
        break;
      case Location::Kind::measure: {
        const std::size_t q = loc.targets[0];
        if (r.residual.x_bit(q)) r.meas_flips[loc.meas_id] = 1;
        detail::clear_qubit(r.residual, q);
        break;
      }
      case Location::Kind::ctrl: {
        if (loc.gate != "X" && loc.gate != "Y" && loc.gate != "Z")
          throw std::invalid_argument("propagate: non-Pauli classical control");
        if (r.meas_flips[loc.meas_ref]) {
          PauliTerm g(c.n);
          for (auto q : loc.targets) g.set_op(q, loc.gate[0]);
          r.residual = multiply(r.residual, g);
        }
        break;
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// fault-tolerance criterion

struct FtCheckReport {
  bool pass = true;
  // worst offender (only meaningful when !pass)
  std::size_t worst_location = 0;
  std::size_t worst_qubit = 0;
  char worst_pauli = 'I';
  std::string worst_block;
  std::size_t worst_block_weight = 0;
  std::size_t worst_residual_weight = 0;  // total, across all blocks
  std::map<std::string, std::size_t> residual_weight;  // for the worst fault
};

inline std::size_t weight_on(const PauliTerm& p, const std::vector<std::size_t>& qubits) {
  std::size_t w = 0;
  for (auto q : qubits)
    if (p.x_bit(q) || p.z_bit(q)) ++w;
  return w;
}

/// Single-fault criterion: every (location, qubit, Pauli) fault must leave
/// at most one faulty qubit per logical block.
inline FtCheckReport check_fault_tolerance(const Circuit& c) {
  if (c.blocks.empty())
    throw std::invalid_argument("check_fault_tolerance: no block partition");
  FtCheckReport report;
  const char paulis[3] = {'X', 'Y', 'Z'};
  for (std::size_t loc = 0; loc < c.locations.size(); ++loc) {
    for (auto q : c.locations[loc].targets) {
      for (char p : paulis) {
        FaultEvent f{loc, PauliTerm::single(c.n, q, p)};
        auto res = propagate(c, f);
        for (const auto& [label, qs] : c.blocks) {
          const std::size_t w = weight_on(res.residual, qs);
          if (w > 1 && w > report.worst_block_weight) {
            report.pass = false;
            report.worst_location = loc;
            report.worst_qubit = q;
            report.worst_pauli = p;
            report.worst_block = label;
            report.worst_block_weight = w;
            report.worst_residual_weight = res.residual.weight();
            report.residual_weight.clear();
            for (const auto& [l2, q2] : c.blocks)
              report.residual_weight[l2] = weight_on(res.residual, q2);
          }
        }
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// transversal gates

struct TransversalReport {
  bool valid = true;
  std::size_t witness_index = 0;     // generator that escaped (if invalid)
  std::optional<PauliTerm> witness;  // its image
  std::string logical_action;        // e.g. "X->Z, Z->X"; CNOT uses XI/IX/ZI/IZ
};

namespace detail {

/// Matches `img` against signed products of the given logical operators
/// modulo the stabilizer group; returns e.g. "-Y" or "XX".
inline std::string reduce_logical(const std::vector<PauliTerm>& gens,
                                  const std::vector<std::pair<std::string, PauliTerm>>& basis,
                                  const PauliTerm& img) {
  const std::size_t m = basis.size();
  // fewest-factor names first so singletons beat equivalent products
  for (std::size_t nf = 0; nf <= m; ++nf) {
    for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
      if (static_cast<std::size_t>(std::popcount(mask)) != nf) continue;
      PauliTerm cand = PauliTerm::identity(img.n());
      std::string name;
      for (std::size_t b = 0; b < m; ++b)
        if ((mask >> b) & 1) {
          cand = multiply(cand, basis[b].second);
          name += basis[b].first;
        }
      if (name.empty()) name = "I";
      auto rel = classify_against_group(gens, multiply(img, cand.inverse()));
      if (rel == GroupRelation::in_group_plus) return name;
      if (rel == GroupRelation::in_group_minus) return "-" + name;
    }
  }
  return "?";
}

}  // namespace detail

/// Bitwise application of a 1-qubit Clifford (or pairwise CNOT between two
/// blocks): valid iff every conjugated generator stays in the (+1) stabilizer
/// group.  logical_action reports the induced map on the logical operators.
inline TransversalReport transversal_validity(const CodeSpec& code,
                                              const std::string& gate) {
  TransversalReport report;
  if (gate == "CNOT") {
    const std::size_t n = code.n;
    std::vector<PauliTerm> gens;
    const PauliTerm id(n);
    for (const auto& g : code.generators) {
      gens.push_back(tensor(g, id));
      gens.push_back(tensor(id, g));
    }
    auto conj = [&](PauliTerm p) {
      for (std::size_t q = 0; q < n; ++q) clifford::conj_cnot(p, q, n + q);
      return p;
    };
    for (std::size_t i = 0; i < gens.size(); ++i) {
      PauliTerm img = conj(gens[i]);
      if (classify_against_group(gens, img) != GroupRelation::in_group_plus) {
        report.valid = false;
        report.witness_index = i;
        report.witness = img;
        return report;
      }
    }
    if (code.k == 1) {
      std::vector<std::pair<std::string, PauliTerm>> basis = {
          {"(XI)", tensor(code.logical_x[0], id)},
          {"(IX)", tensor(id, code.logical_x[0])},
          {"(ZI)", tensor(code.logical_z[0], id)},
          {"(IZ)", tensor(id, code.logical_z[0])}};
      std::string action;
      for (const auto& [nm, op] : basis) {
        if (!action.empty()) action += ", ";
        action += nm.substr(1, 2) + "->" +
                  detail::reduce_logical(gens, basis, conj(op));
      }
      report.logical_action = action;
    }
    return report;
  }

  auto conj1 = [&](PauliTerm p) {
    for (std::size_t q = 0; q < code.n; ++q) clifford::conj_gate(p, gate, {q});
    return p;
  };
  for (std::size_t i = 0; i < code.generators.size(); ++i) {
    PauliTerm img = conj1(code.generators[i]);
    if (classify_against_group(code.generators, img) != GroupRelation::in_group_plus) {
      report.valid = false;
      report.witness_index = i;
      report.witness = img;
      return report;
    }
  }
  if (code.k == 1) {
    PauliTerm ybar = multiply(code.logical_x[0], code.logical_z[0]);
    ybar.set_phase_exponent(ybar.phase_exponent() + 1);  // hermitian Y = iXZ
    std::vector<std::pair<std::string, PauliTerm>> basis = {
        {"X", code.logical_x[0]}, {"Z", code.logical_z[0]}, {"Y", ybar}};
    report.logical_action =
        "X->" + detail::reduce_logical(code.generators, basis, conj1(code.logical_x[0])) +
        ", Z->" + detail::reduce_logical(code.generators, basis, conj1(code.logical_z[0]));
  }
  return report;
}

// ---------------------------------------------------------------------------
// fault-tolerant Steane |0>_L preparation (Shor-style cat extraction)

struct FtPrepOptions {
  PauliChannel noise{};
  std::size_t max_rounds = 64;  // cat re-preparations allowed per extraction
  // test hook: invoked at named protocol stages, e.g. "cat_prep:2:1",
  // "extract:0:1", "cat_verified:0:1"
  std::function<void(StabilizerTableau&, const std::string&)> injector;
};

struct FtPrepResult {
  StabilizerTableau tableau = StabilizerTableau::computational_state(1);
  bool success = false;
  std::size_t cat_attempts = 0;       // total cat preparations, incl. rejected
  std::size_t cat_rejections = 0;     // verifier fired
  std::vector<std::vector<int>> syndrome_history;  // [stabilizer][round] bits
  std::vector<std::uint8_t> majority;              // voted bit per stabilizer
};

/// 12-qubit register: data 0..6, cat ancilla 7..10, verifier 11.
/// Each Steane stabilizer is read through a verified 4-qubit cat state,
/// 2 rounds plus a tie-breaking 3rd on disagreement; afterwards one Pauli
/// frame correction (the voted syndrome decoded per CSS sector at weight <= 1)
/// pins every generator to +1.
template <typename Rng>
FtPrepResult ft_steane_prep(Rng& rng, const FtPrepOptions& opt = {}) {
  constexpr std::size_t kData = 7, kCat0 = 7, kVerifier = 11, kTotal = 12;
  const CodeSpec code = make_steane7();
  FtPrepResult result;
  auto t = StabilizerTableau::computational_state(kTotal);

  auto embed = [&](const PauliTerm& p7) {
    PauliTerm p(kTotal);
    for (std::size_t q = 0; q < kData; ++q) {
      p.set_x(q, p7.x_bit(q));
      p.set_z(q, p7.z_bit(q));
    }
    p.set_phase_exponent(p7.phase_exponent());
    return p;
  };
  auto stage = [&](const std::string& tag) {
    if (opt.injector) opt.injector(t, tag);
  };
  auto noisy = [&](std::initializer_list<std::size_t> qubits) {
    if (opt.noise.p() <= 0) return;
    for (auto q : qubits) {
      auto e = sample_pauli_error(opt.noise, 1, rng);
      if (!e.is_identity()) {
        PauliTerm full(kTotal);
        full.set_x(q, e.x_bit(0));
        full.set_z(q, e.z_bit(0));
        t.apply_pauli(full);
      }
    }
  };
  auto cnot = [&](std::size_t c, std::size_t q) {
    t.apply_gate("CNOT", {c, q});
    noisy({c, q});
  };

  // verified cat (|0000> + |1111>)/sqrt(2) on 7..10; parity of cat qubits
  // 1 and 4 caught on the verifier
  auto prepare_cat = [&](std::size_t stab, std::size_t round) -> bool {
    for (std::size_t attempt = 0; attempt < opt.max_rounds; ++attempt) {
      ++result.cat_attempts;
      for (std::size_t q = kCat0; q < kTotal; ++q) t.reset_qubit(q, rng);
      t.apply_gate("H", {kCat0});
      noisy({kCat0});
      cnot(kCat0, kCat0 + 1);
      cnot(kCat0, kCat0 + 2);
      cnot(kCat0, kCat0 + 3);
      stage("cat_prep:" + std::to_string(stab) + ":" + std::to_string(round));
      cnot(kCat0, kVerifier);
      cnot(kCat0 + 3, kVerifier);
      auto v = t.measure_pauli(PauliTerm::single(kTotal, kVerifier, 'Z'), rng);
      if (v.outcome > 0) {
        stage("cat_verified:" + std::to_string(stab) + ":" + std::to_string(round));
        return true;
      }
      ++result.cat_rejections;
    }
    return false;
  };

  // one cat-mediated readout of stabilizer `stab`
  auto extract_bit = [&](std::size_t stab, std::size_t round,
                         std::optional<int>& bit_out) -> bool {
    if (!prepare_cat(stab, round)) return false;
    const PauliTerm& k = code.generators[stab];
    const bool x_type = k.x_bit([&] {
      for (std::size_t q = 0; q < kData; ++q)
        if (k.x_bit(q) || k.z_bit(q)) return q;
      return std::size_t{0};
    }());
    std::size_t cat = kCat0;
    for (std::size_t q = 0; q < kData; ++q) {
      if (!(k.x_bit(q) || k.z_bit(q))) continue;
      if (x_type) {
        cnot(cat, q);  // controlled-X from cat onto data
      } else {
        // controlled-Z from cat onto data, as H CNOT H
        t.apply_gate("H", {q});
        cnot(cat, q);
        t.apply_gate("H", {q});
        noisy({q});
      }
      ++cat;
    }
    stage("extract:" + std::to_string(stab) + ":" + std::to_string(round));
    int parity = 0;
    for (std::size_t c = kCat0; c < kCat0 + 4; ++c) {
      t.apply_gate("H", {c});  // cat read out in the X basis
      noisy({c});
      auto m = t.measure_pauli(PauliTerm::single(kTotal, c, 'Z'), rng);
      if (m.outcome < 0) parity ^= 1;
    }
    bit_out = parity;
    return true;
  };

  // Full-syndrome acquisition passes, repeated until two consecutive passes
  // vote identically.  A fault striking mid-pass leaves votes for the
  // already-measured generators stale; frame-correcting from such a mixed
  // syndrome can plant a second data error.  A single fault corrupts at most
  // one pass, so agreement between consecutive passes guarantees the accepted
  // syndrome describes one definite state.
  constexpr std::size_t kMaxPasses = 4;
  result.syndrome_history.assign(code.generators.size(), {});
  result.majority.assign(code.generators.size(), 0);
  std::vector<std::uint8_t> prev;
  bool converged = false;
  for (std::size_t pass = 0; pass < kMaxPasses && !converged; ++pass) {
    std::vector<std::uint8_t> votes(code.generators.size(), 0);
    for (std::size_t s = 0; s < code.generators.size(); ++s) {
      std::optional<int> b1, b2, b3;
      if (!extract_bit(s, 0, b1) || !extract_bit(s, 1, b2)) return result;
      result.syndrome_history[s].push_back(*b1);
      result.syndrome_history[s].push_back(*b2);
      int vote = *b1;
      if (*b1 != *b2) {
        if (!extract_bit(s, 2, b3)) return result;
        result.syndrome_history[s].push_back(*b3);
        vote = *b3;  // two rounds disagree: the tie-breaker is the majority
      }
      votes[s] = static_cast<std::uint8_t>(vote);
    }
    converged = pass > 0 && votes == prev;
    prev = votes;
  }
  result.majority = prev;
  if (!converged) return result;  // persistent disagreement: report failure

  // frame correction, decoded per CSS sector at weight <= 1 each.  The Z-type
  // part pins the X generators, whose first-time projection outcomes on
  // |0..0> are random (this completes the encoding rather than correcting
  // noise); the X-type part corrects a deposited error flagged by the Z
  // generators.  Both sector decodes are unique for this code; a generic
  // commutation solver must not be used (it could differ by a logical).
  auto matches = [&](const PauliTerm& e) {
    for (std::size_t s = 0; s < code.generators.size(); ++s)
      if ((commutes(code.generators[s], e) ? 0 : 1) != result.majority[s])
        return false;
    return true;
  };
  PauliTerm fix7(kData);
  bool matched = false;
  for (std::size_t qz = 0; qz <= kData && !matched; ++qz)
    for (std::size_t qx = 0; qx <= kData; ++qx) {
      PauliTerm e(kData);
      if (qz < kData) e.set_z(qz, true);
      if (qx < kData) e.set_x(qx, true);
      if (matches(e)) {
        fix7 = e;
        matched = true;
        break;
      }
    }
  if (!matched) return result;  // syndrome outside the single-fault-per-sector set
  t.apply_pauli(embed(fix7));

  // park the ancillas so dense cross-checks start from |0>
  for (std::size_t q = kCat0; q < kTotal; ++q) t.reset_qubit(q, rng);
  result.tableau = t;
  result.success = true;
  return result;
}

}  // namespace qeclab
