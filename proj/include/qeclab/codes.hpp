#pragma once

#include <bit>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qeclab/densesim.hpp"
#include "qeclab/pauli.hpp"
#include "qeclab/symplectic.hpp"
#include "qeclab/tableau.hpp"

namespace qeclab {

/// Static [[n,k,d]] subspace-code definition.
struct CodeSpec {
  std::string name;
  std::size_t n = 0, k = 0, d = 0;
  std::vector<PauliTerm> generators;
  std::vector<PauliTerm> logical_x, logical_z;  // one per logical qubit
  bool css = false;
  bool degenerate = false;
  bool x_sector_only = false;  // rep3/parity_loss protect one sector only

  bool validate() const {
    if (generators.size() != n - k) return false;
    for (std::size_t i = 0; i < generators.size(); ++i)
      for (std::size_t j = i + 1; j < generators.size(); ++j)
        if (!commutes(generators[i], generators[j])) return false;
    if (symplectic_rank(generators) != generators.size()) return false;
    if (logical_x.size() != k || logical_z.size() != k) return false;
    for (std::size_t a = 0; a < k; ++a) {
      for (const auto& g : generators)
        if (!commutes(g, logical_x[a]) || !commutes(g, logical_z[a])) return false;
      if (classify_against_group(generators, logical_x[a]) != GroupRelation::commutes_outside)
        return false;
      if (classify_against_group(generators, logical_z[a]) != GroupRelation::commutes_outside)
        return false;
      for (std::size_t b = 0; b < k; ++b)
        if (commutes(logical_x[a], logical_z[b]) != (a != b)) return false;
    }
    return true;
  }
};

/// Bacon-Shor C(n1,n2) on an n1 x n2 lattice; qubit (i,j) (1-based, as the
/// row/column operators are written) sits at index (i-1)*n2 + (j-1).
struct SubsystemCodeSpec {
  std::string name;
  std::size_t n1 = 0, n2 = 0, n = 0;
  std::vector<PauliTerm> stabilizers;            // S : (n1-1) X-rows then (n2-1) Z-columns
  std::vector<PauliTerm> gauge;                  // T : two-qubit checks
  std::vector<std::vector<std::size_t>> witness; // per stabilizer: gauge indices whose product is it
  PauliTerm logical_x{1}, logical_z{1};
};

/// Planar surface-code lattice maintaining a unique "clean" state.
///
/// N x N cell convention: 2N^2 edge qubits, N^2 vertex generators (X),
/// N^2-1 plaquette generators (Z, three-body on the west/east boundary),
/// plus one fixed logical-Z chain closing the generating set to full rank.
/// Plaquette-defect chains terminate on the north/south boundaries; chains
/// joining those boundaries commute with every A_p and B_v.
struct SurfaceLattice {
  std::size_t N = 0;
  std::size_t n = 0;  // 2N^2

  // edge ids: horizontal h(i,j), i in [0,N), j in [0,N+1); then vertical
  // v(i,j), i in [0,N-1), j in [0,N)
  std::size_t h_edge(std::size_t i, std::size_t j) const { return i * (N + 1) + j; }
  std::size_t v_edge(std::size_t i, std::size_t j) const { return N * (N + 1) + i * N + j; }

  std::vector<PauliTerm> plaquettes;  // A_p, index by face (r,c), c in [-1, N-1]
  std::vector<std::pair<int, int>> plaquette_coords;
  std::vector<PauliTerm> vertices;    // B_v
  PauliTerm logical_z{1};             // Z chain along the north row
  PauliTerm logical_x{1};             // X chain, north-south (reference)

  std::size_t face_rows() const { return N - 1; }
  std::size_t face_cols() const { return N + 1; }
  std::size_t face_index(int r, int c) const {
    return static_cast<std::size_t>(r) * face_cols() + static_cast<std::size_t>(c + 1);
  }

  /// Faces flipped by an X error on edge e; row -1 / row N-1 mean the
  /// north / south boundary (the chain ends there).
  std::vector<std::pair<int, int>> faces_of_edge(std::size_t e) const {
    const std::size_t nh = N * (N + 1);
    std::vector<std::pair<int, int>> out;
    if (e < nh) {
      const int i = static_cast<int>(e / (N + 1));
      const int j = static_cast<int>(e % (N + 1));
      out.emplace_back(i - 1, j - 1);
      out.emplace_back(i, j - 1);
    } else {
      const std::size_t r = e - nh;
      const int i = static_cast<int>(r / N);
      const int j = static_cast<int>(r % N);
      out.emplace_back(i, j - 1);
      out.emplace_back(i, j);
    }
    return out;
  }

  bool face_in_bounds(int r, int /*c*/) const {
    return r >= 0 && r < static_cast<int>(face_rows());
  }

  /// All generators (plaquettes + vertices + fixed logical Z), full rank.
  std::vector<PauliTerm> clean_surface_generators() const {
    std::vector<PauliTerm> gens = plaquettes;
    gens.insert(gens.end(), vertices.begin(), vertices.end());
    gens.push_back(logical_z);
    return gens;
  }
};

// ---------------------------------------------------------------------------
// builtin constructors

inline CodeSpec make_rep3() {
  CodeSpec c;
  c.name = "rep3";
  c.n = 3; c.k = 1; c.d = 3;
  c.generators = {PauliTerm::parse("ZZI"), PauliTerm::parse("ZIZ")};
  c.logical_x = {PauliTerm::parse("XXX")};
  c.logical_z = {PauliTerm::parse("ZII")};
  c.css = true;
  c.x_sector_only = true;  // bit-flip code: Z errors are invisible
  return c;
}

inline CodeSpec make_shor9() {
  CodeSpec c;
  c.name = "shor9";
  c.n = 9; c.k = 1; c.d = 3;
  c.generators = {
      PauliTerm::parse("ZZIIIIIII"), PauliTerm::parse("ZIZIIIIII"),
      PauliTerm::parse("IIIZZIIII"), PauliTerm::parse("IIIZIZIII"),
      PauliTerm::parse("IIIIIIZZI"), PauliTerm::parse("IIIIIIZIZ"),
      PauliTerm::parse("XXXXXXIII"), PauliTerm::parse("XXXIIIXXX")};
  c.logical_x = {PauliTerm::parse("ZIIZIIZII")};
  c.logical_z = {PauliTerm::parse("XXXIIIIII")};
  c.css = true;
  c.degenerate = true;
  return c;
}

inline CodeSpec make_steane7() {
  CodeSpec c;
  c.name = "steane7";
  c.n = 7; c.k = 1; c.d = 3;
  c.generators = {
      PauliTerm::parse("IIIXXXX"), PauliTerm::parse("XIXIXIX"),
      PauliTerm::parse("IXXIIXX"), PauliTerm::parse("IIIZZZZ"),
      PauliTerm::parse("ZIZIZIZ"), PauliTerm::parse("IZZIIZZ")};
  c.logical_x = {PauliTerm::parse("XXXXXXX")};
  c.logical_z = {PauliTerm::parse("ZZZZZZZ")};
  c.css = true;
  return c;
}

inline CodeSpec make_five_qubit() {
  CodeSpec c;
  c.name = "five_qubit";
  c.n = 5; c.k = 1; c.d = 3;
  c.generators = {
      PauliTerm::parse("XZZXI"), PauliTerm::parse("IXZZX"),
      PauliTerm::parse("XIXZZ"), PauliTerm::parse("ZXIXZ")};
  c.logical_x = {PauliTerm::parse("XXXXX")};
  c.logical_z = {PauliTerm::parse("ZZZZZ")};
  c.css = false;
  return c;
}

inline CodeSpec make_detect4() {
  CodeSpec c;
  c.name = "detect4";
  c.n = 4; c.k = 2; c.d = 2;
  c.generators = {PauliTerm::parse("ZZZZ"), PauliTerm::parse("XXXX")};
  c.logical_x = {PauliTerm::parse("XIXI"), PauliTerm::parse("XXII")};
  c.logical_z = {PauliTerm::parse("ZZII"), PauliTerm::parse("ZIZI")};
  c.css = true;
  return c;
}

/// q redundancy blocks of the N-qubit parity (conjugate-basis GHZ) encoding.
inline CodeSpec make_parity_loss(std::size_t N, std::size_t q) {
  if (N < 2 || q < 1)
    throw std::invalid_argument("parity_loss: need N >= 2, q >= 1");
  CodeSpec c;
  c.name = "parity_loss(" + std::to_string(N) + "," + std::to_string(q) + ")";
  c.n = N * q;
  c.k = 1;
  // min-weight logicals: X on one qubit per block (weight q), block-wide Z
  // (weight N); a lone X is undetected when q = 1, which is the point: loss
  // converts to a *known* flip via the reduction identity
  c.d = std::min(N, q);
  for (std::size_t b = 0; b < q; ++b)
    for (std::size_t i = 0; i + 1 < N; ++i) {
      PauliTerm g(c.n);
      g.set_op(b * N + i, 'X');
      g.set_op(b * N + i + 1, 'X');
      c.generators.push_back(g);
    }
  for (std::size_t b = 0; b + 1 < q; ++b) {
    PauliTerm g(c.n);
    for (std::size_t i = 0; i < N; ++i) {
      g.set_op(b * N + i, 'Z');
      g.set_op((b + 1) * N + i, 'Z');
    }
    c.generators.push_back(g);
  }
  PauliTerm lz(c.n);
  for (std::size_t i = 0; i < N; ++i) lz.set_op(i, 'Z');
  PauliTerm lx(c.n);
  for (std::size_t b = 0; b < q; ++b) lx.set_op(b * N, 'X');
  c.logical_z = {lz};
  c.logical_x = {lx};
  c.css = true;
  return c;
}

inline SubsystemCodeSpec make_bacon_shor(std::size_t n1, std::size_t n2) {
  if (n1 < 2 || n2 < 2)
    throw std::invalid_argument("bacon_shor: need n1, n2 >= 2");
  SubsystemCodeSpec s;
  s.name = "bacon_shor(" + std::to_string(n1) + "," + std::to_string(n2) + ")";
  s.n1 = n1; s.n2 = n2; s.n = n1 * n2;
  auto idx = [n2](std::size_t i, std::size_t j) { return (i - 1) * n2 + (j - 1); };

  // gauge group T: X_{i,j}X_{i+1,j} then Z_{i,j}Z_{i,j+1} (1-based ranges)
  std::vector<std::vector<std::size_t>> x_rows(n1), z_cols(n2);
  for (std::size_t i = 1; i < n1; ++i)
    for (std::size_t j = 1; j <= n2; ++j) {
      PauliTerm g(s.n);
      g.set_op(idx(i, j), 'X');
      g.set_op(idx(i + 1, j), 'X');
      x_rows[i].push_back(s.gauge.size());
      s.gauge.push_back(g);
    }
  for (std::size_t i = 1; i <= n1; ++i)
    for (std::size_t j = 1; j < n2; ++j) {
      PauliTerm g(s.n);
      g.set_op(idx(i, j), 'Z');
      g.set_op(idx(i, j + 1), 'Z');
      z_cols[j].push_back(s.gauge.size());
      s.gauge.push_back(g);
    }

  // stabilizers S: X_{i,*}X_{i+1,*} then Z_{*,j}Z_{*,j+1}
  for (std::size_t i = 1; i < n1; ++i) {
    PauliTerm g(s.n);
    for (std::size_t j = 1; j <= n2; ++j) {
      g.set_op(idx(i, j), 'X');
      g.set_op(idx(i + 1, j), 'X');
    }
    s.stabilizers.push_back(g);
    s.witness.push_back(x_rows[i]);
  }
  for (std::size_t j = 1; j < n2; ++j) {
    PauliTerm g(s.n);
    for (std::size_t i = 1; i <= n1; ++i) {
      g.set_op(idx(i, j), 'Z');
      g.set_op(idx(i, j + 1), 'Z');
    }
    s.stabilizers.push_back(g);
    s.witness.push_back(z_cols[j]);
  }

  PauliTerm lz(s.n), lx(s.n);
  for (std::size_t i = 1; i <= n1; ++i) lz.set_op(idx(i, 1), 'Z');  // Z_{*,1}
  for (std::size_t j = 1; j <= n2; ++j) lx.set_op(idx(1, j), 'X');  // X_{1,*}
  s.logical_z = lz;
  s.logical_x = lx;
  return s;
}

inline SurfaceLattice make_surface(std::size_t N) {
  if (N < 2) throw std::invalid_argument("surface: need N >= 2");
  SurfaceLattice s;
  s.N = N;
  s.n = 2 * N * N;

  // vertex X stabilizers at (i,j), i,j in [0,N)
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      PauliTerm g(s.n);
      g.set_op(s.h_edge(i, j), 'X');
      g.set_op(s.h_edge(i, j + 1), 'X');
      if (i > 0) g.set_op(s.v_edge(i - 1, j), 'X');
      if (i + 1 < N) g.set_op(s.v_edge(i, j), 'X');
      s.vertices.push_back(g);
    }

  // plaquette Z stabilizers: faces (r,c), r in [0,N-1), c in [-1,N-1];
  // the west (c = -1) and east (c = N-1) columns are weight-3 half faces
  for (std::size_t r = 0; r + 1 < N; ++r) {
    for (int c = -1; c < static_cast<int>(N); ++c) {
      PauliTerm g(s.n);
      if (c == -1) {
        g.set_op(s.h_edge(r, 0), 'Z');
        g.set_op(s.h_edge(r + 1, 0), 'Z');
        g.set_op(s.v_edge(r, 0), 'Z');
      } else if (c == static_cast<int>(N) - 1) {
        g.set_op(s.h_edge(r, N), 'Z');
        g.set_op(s.h_edge(r + 1, N), 'Z');
        g.set_op(s.v_edge(r, N - 1), 'Z');
      } else {
        g.set_op(s.h_edge(r, c + 1), 'Z');
        g.set_op(s.h_edge(r + 1, c + 1), 'Z');
        g.set_op(s.v_edge(r, c), 'Z');
        g.set_op(s.v_edge(r, c + 1), 'Z');
      }
      s.plaquettes.push_back(g);
      s.plaquette_coords.emplace_back(static_cast<int>(r), c);
    }
  }

  PauliTerm lz(s.n), lx(s.n);
  for (std::size_t j = 0; j <= N; ++j) lz.set_op(s.h_edge(0, j), 'Z');
  for (std::size_t i = 0; i < N; ++i) lx.set_op(s.h_edge(i, 0), 'X');
  s.logical_z = lz;
  s.logical_x = lx;
  return s;
}

inline const std::vector<std::string>& builtin_code_names() {
  static const std::vector<std::string> names = {
      "rep3", "shor9", "steane7", "five_qubit", "detect4",
      "bacon_shor", "surface", "parity_loss"};
  return names;
}

/// Subspace-code lookup by name; parameterized families take defaults
/// rep3-style callers use make_* directly.
inline std::optional<CodeSpec> builtin_code(const std::string& name) {
  if (name == "rep3") return make_rep3();
  if (name == "shor9") return make_shor9();
  if (name == "steane7") return make_steane7();
  if (name == "five_qubit") return make_five_qubit();
  if (name == "detect4") return make_detect4();
  if (name.rfind("parity_loss", 0) == 0) {
    std::size_t N = 3, q = 1;
    if (name.size() > 11 && std::sscanf(name.c_str(), "parity_loss(%zu,%zu)", &N, &q) != 2)
      return std::nullopt;
    return make_parity_loss(N, q);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// encoding

namespace detail {

/// Correction flipping exactly the requested generator signs while fixing
/// every listed logical-Z to +1.
template <typename MeasureFn>
PauliTerm sign_fix_from_measurements(const CodeSpec& code, MeasureFn&& measure) {
  std::vector<std::pair<PauliTerm, bool>> constraints;
  for (const auto& g : code.generators)
    constraints.emplace_back(g, measure(g) < 0);
  for (const auto& lz : code.logical_z)
    constraints.emplace_back(lz, measure(lz) < 0);
  auto fix = solve_commutation_pattern(constraints, code.n);
  if (!fix) throw std::logic_error("encode_zero: inconsistent sign-fix system");
  return *fix;
}

}  // namespace detail

/// Projective encoding of |0...0>_L: measure every stabilizer, then repair
/// all -1 signs with one Pauli frame correction.
template <typename Rng>
StabilizerTableau encode_zero(const CodeSpec& code, Rng& rng) {
  auto t = StabilizerTableau::computational_state(code.n);
  auto fix = detail::sign_fix_from_measurements(
      code, [&](const PauliTerm& p) { return t.measure_pauli(p, rng).outcome; });
  t.apply_pauli(fix);
  return t;
}

template <typename Rng>
StateVector encode_zero_dense(const CodeSpec& code, Rng& rng,
                              std::size_t cap = StateVector::kDefaultQubitCap) {
  StateVector sv(code.n, cap);
  auto fix = detail::sign_fix_from_measurements(
      code, [&](const PauliTerm& p) { return sv.measure_pauli(p, rng).outcome; });
  sv.apply_pauli(fix);
  sv.canonicalize_phase();
  return sv;
}

/// Subsystem encoding: stabilizer signs and logical Z fixed, gauge arbitrary.
template <typename Rng>
StabilizerTableau encode_zero(const SubsystemCodeSpec& sub, Rng& rng) {
  auto t = StabilizerTableau::computational_state(sub.n);
  std::vector<std::pair<PauliTerm, bool>> constraints;
  for (const auto& g : sub.stabilizers)
    constraints.emplace_back(g, t.measure_pauli(g, rng).outcome < 0);
  constraints.emplace_back(sub.logical_z, t.measure_pauli(sub.logical_z, rng).outcome < 0);
  auto fix = solve_commutation_pattern(constraints, sub.n);
  if (!fix) throw std::logic_error("encode_zero: inconsistent sign-fix system");
  t.apply_pauli(*fix);
  return t;
}

/// Ordered gauge factors whose product is stabilizer s (phase +1).
inline std::vector<PauliTerm> stabilizer_gauge_decomposition(
    const SubsystemCodeSpec& sub, std::size_t s) {
  if (s >= sub.stabilizers.size())
    throw std::out_of_range("stabilizer_gauge_decomposition: bad index");
  std::vector<PauliTerm> out;
  for (auto gi : sub.witness[s]) out.push_back(sub.gauge[gi]);
  return out;
}

// ---------------------------------------------------------------------------
// parity-code loss reduction

struct LossReduction {
  StateVector state;      // one qubit fewer
  bool logical_flip;      // measured |1>: a known logical bit flip occurred
};

/// Removes a parity-block qubit whose computational-basis measurement
/// result is known, shrinking the block from N to N-1 qubits.
inline LossReduction parity_loss_reduce(const StateVector& state,
                                        std::size_t lost_qubit, int measured_bit) {
  if (state.n() < 2)
    throw std::invalid_argument("parity_loss_reduce: block exhausted (N=1)");
  StateVector work = state;
  const PauliTerm zq = PauliTerm::single(state.n(), lost_qubit, 'Z');
  work.measure_forced(zq, measured_bit == 0 ? +1 : -1);
  // factor out the now-product qubit
  StateVector reduced(state.n() - 1, state.n());
  const std::size_t lost_pos = work.bit_pos(lost_qubit);
  const std::size_t lost_mask = std::size_t{1} << lost_pos;
  const std::size_t fixed = measured_bit ? lost_mask : 0;
  for (std::size_t i = 0; i < (std::size_t{1} << state.n()); ++i) {
    if ((i & lost_mask) != fixed) continue;
    const std::size_t low = i & (lost_mask - 1);
    const std::size_t high = (i >> (lost_pos + 1)) << lost_pos;
    reduced.amp(high | low) = work.amp(i);
  }
  reduced.normalize();
  return {std::move(reduced), measured_bit == 1};
}

// ---------------------------------------------------------------------------
// distance verification (exhaustive, small n)

/// True when no Pauli of weight < d commutes with every generator while
/// lying outside the generated group.  Sector-restricted codes only search
/// the error type they claim to handle.
inline bool verify_distance(const CodeSpec& code) {
  if (code.d < 2) return true;
  if (code.n > 12) throw std::invalid_argument("verify_distance: n too large");
  const std::uint64_t lim = std::uint64_t{1} << code.n;
  auto undetected_logical = [&](std::uint64_t xm, std::uint64_t zm) {
    const auto w = static_cast<std::size_t>(std::popcount(xm | zm));
    if (w == 0 || w >= code.d) return false;
    PauliTerm e = PauliTerm::from_masks(code.n, xm, zm);
    for (const auto& g : code.generators)
      if (!commutes(g, e)) return false;
    return classify_against_group(code.generators, e) == GroupRelation::commutes_outside;
  };
  for (std::uint64_t xm = 0; xm < lim; ++xm) {
    if (code.x_sector_only) {
      if (undetected_logical(xm, 0)) return false;
    } else {
      for (std::uint64_t zm = 0; zm < lim; ++zm)
        if (undetected_logical(xm, zm)) return false;
    }
  }
  return true;
}

}  // namespace qeclab
