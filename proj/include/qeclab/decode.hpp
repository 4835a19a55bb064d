#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qeclab/codes.hpp"
#include "qeclab/pauli.hpp"
#include "qeclab/symplectic.hpp"

namespace qeclab {

struct SyndromeRecord {
  std::vector<std::uint8_t> bits;  // ordered as the code's generator list
  std::size_t round = 0;

  bool any() const {
    for (auto b : bits) if (b) return true;
    return false;
  }
  bool operator==(const SyndromeRecord& o) const { return bits == o.bits; }
};

/// Syndrome a Pauli error produces, by pure commutation (no state needed).
inline SyndromeRecord syndrome_of(const std::vector<PauliTerm>& generators,
                                  const PauliTerm& error) {
  SyndromeRecord s;
  s.bits.reserve(generators.size());
  for (const auto& g : generators)
    s.bits.push_back(commutes(g, error) ? 0 : 1);
  return s;
}

inline SyndromeRecord syndrome_of(const CodeSpec& code, const PauliTerm& error) {
  return syndrome_of(code.generators, error);
}

/// Projective stabilizer readout; leaves codespace states untouched.
template <typename State, typename Rng>
SyndromeRecord extract_syndrome(State& state, const CodeSpec& code, Rng& rng) {
  SyndromeRecord s;
  s.bits.reserve(code.generators.size());
  for (const auto& g : code.generators)
    s.bits.push_back(state.measure_pauli(g, rng).outcome < 0 ? 1 : 0);
  return s;
}

// ---------------------------------------------------------------------------
// lookup decoding

struct SyndromeTable {
  std::map<std::vector<std::uint8_t>, PauliTerm> entries;
  std::size_t t = 0;      // guaranteed correction radius
  bool saturated = false; // some syndrome is shared by inequivalent errors

  std::optional<PauliTerm> lookup(const SyndromeRecord& s) const {
    auto it = entries.find(s.bits);
    if (it == entries.end()) return std::nullopt;
    return it->second;
  }
};

/// Exhaustive weight <= t = floor((d-1)/2) table.  Degenerate collisions keep
/// the first (lowest-weight, lexicographically earliest) representative;
/// collisions between inequivalent errors mark the table saturated.
inline SyndromeTable build_lookup(const CodeSpec& code) {
  if (code.d < 3)
    throw std::invalid_argument("build_lookup: " + code.name +
                                " is detection-only (d < 3)");
  if (code.n > 12)
    throw std::invalid_argument("build_lookup: n > 12");
  SyndromeTable table;
  table.t = (code.d - 1) / 2;

  auto equivalent = [&](const PauliTerm& a, const PauliTerm& b) {
    auto rel = classify_against_group(code.generators, multiply(a, b));
    return rel == GroupRelation::in_group_plus || rel == GroupRelation::in_group_minus;
  };
  auto visit = [&](const PauliTerm& e) {
    auto s = syndrome_of(code, e);
    auto it = table.entries.find(s.bits);
    if (it == table.entries.end()) {
      table.entries.emplace(s.bits, e);
    } else if (!equivalent(it->second, e)) {
      table.saturated = true;  // first (minimum-weight) entry kept
    }
  };

  visit(PauliTerm::identity(code.n));
  const std::vector<char> ops =
      code.x_sector_only ? std::vector<char>{'X'} : std::vector<char>{'X', 'Y', 'Z'};
  // weight-ascending enumeration; within a weight, position combinations and
  // op choices advance in lexicographic order
  for (std::size_t w = 1; w <= table.t; ++w) {
    std::vector<std::size_t> pos(w);
    for (std::size_t i = 0; i < w; ++i) pos[i] = i;
    while (true) {
      std::vector<std::size_t> sel(w, 0);
      while (true) {
        PauliTerm e(code.n);
        for (std::size_t i = 0; i < w; ++i) e.set_op(pos[i], ops[sel[i]]);
        visit(e);
        std::size_t i = w;
        while (i > 0 && ++sel[i - 1] == ops.size()) sel[--i] = 0;
        if (i == 0) break;
      }
      std::size_t i = w;
      while (i > 0 && pos[i - 1] == code.n - w + (i - 1)) --i;
      if (i == 0) break;
      ++pos[i - 1];
      for (std::size_t j = i; j < w; ++j) pos[j] = pos[j - 1] + 1;
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// detection-only codes

enum class DetectOutcome { clean, detected };

inline DetectOutcome detect_only(const CodeSpec& code, const SyndromeRecord& s) {
  if (s.bits.size() != code.generators.size())
    throw std::invalid_argument("detect_only: syndrome length mismatch");
  return s.any() ? DetectOutcome::detected : DetectOutcome::clean;
}

// ---------------------------------------------------------------------------
// subsystem syndrome by gauge composition

/// Measures two-body gauge operators and composes each stabilizer parity from
/// its witness outcomes.  A stabilizer's witness factors are measured
/// consecutively: interleaving an anticommuting gauge operator between two
/// factors of the same stabilizer would randomize their split product.  With
/// that grouping the composed parities (and the logical content) do not depend
/// on gauge_order, even though the gauge state moves.
template <typename State, typename Rng>
SyndromeRecord baconshor_syndrome(State& state, const SubsystemCodeSpec& sub,
                                  Rng& rng, std::vector<std::size_t> gauge_order = {}) {
  if (gauge_order.empty()) {
    gauge_order.resize(sub.gauge.size());
    for (std::size_t i = 0; i < gauge_order.size(); ++i) gauge_order[i] = i;
  }
  std::vector<int> owner(sub.gauge.size(), -1);
  for (std::size_t w = 0; w < sub.witness.size(); ++w)
    for (auto gi : sub.witness[w]) owner[gi] = static_cast<int>(w);
  std::vector<std::uint8_t> outcome(sub.gauge.size(), 0);
  std::vector<bool> done(sub.witness.size() + 1, false);
  auto measure = [&](std::size_t gi) {
    outcome[gi] = state.measure_pauli(sub.gauge[gi], rng).outcome < 0 ? 1 : 0;
  };
  // gauge_order fixes the order of witness groups (by first appearance) and
  // the order of factors within each group
  for (auto gi : gauge_order) {
    if (owner[gi] < 0) {
      measure(gi);  // gauge operator not part of any witness
      continue;
    }
    if (done[owner[gi]]) continue;
    done[owner[gi]] = true;
    for (auto gj : gauge_order)
      if (owner[gj] == owner[gi]) measure(gj);
  }
  SyndromeRecord s;
  for (const auto& wit : sub.witness) {
    std::uint8_t parity = 0;
    for (auto gi : wit) parity ^= outcome[gi];
    s.bits.push_back(parity);
  }
  return s;
}

// ---------------------------------------------------------------------------
// surface-code matching

struct DefectSet {
  std::vector<std::pair<int, int>> faces;  // plaquette coordinates (r, c)
};

/// Plaquette defects an X-type error produces (Y counts as X here).
inline DefectSet defects_from_error(const SurfaceLattice& lat, const PauliTerm& error) {
  std::map<std::pair<int, int>, int> flip;
  for (std::size_t e = 0; e < lat.n; ++e) {
    if (!error.x_bit(e)) continue;
    for (auto f : lat.faces_of_edge(e))
      if (lat.face_in_bounds(f.first, f.second)) flip[f] ^= 1;
  }
  DefectSet d;
  for (auto& [f, v] : flip)
    if (v) d.faces.push_back(f);
  return d;
}

struct MatchResult {
  // defect-index pairs; second = -1 means matched to the nearer boundary
  std::vector<std::pair<int, int>> pairs;
  std::size_t total_weight = 0;
  PauliTerm correction{1};
};

namespace detail {

inline std::size_t face_distance(std::pair<int, int> a, std::pair<int, int> b) {
  return static_cast<std::size_t>(std::abs(a.first - b.first) +
                                  std::abs(a.second - b.second));
}

inline std::size_t boundary_distance(const SurfaceLattice& lat, std::pair<int, int> a) {
  const int rows = static_cast<int>(lat.face_rows());
  return static_cast<std::size_t>(std::min(a.first + 1, rows - a.first));
}

inline void xor_edge(std::vector<std::uint8_t>& edges, std::size_t e) {
  edges[e] ^= 1;
}

/// Shortest dual path between two faces: rows first (at the start column),
/// then columns (at the end row).  Deterministic by construction.
inline void path_edges(const SurfaceLattice& lat, std::pair<int, int> a,
                       std::pair<int, int> b, std::vector<std::uint8_t>& edges) {
  int r = a.first, c = a.second;
  while (r != b.first) {
    const int step = b.first > r ? 1 : -1;
    const int upper = step > 0 ? r + 1 : r;  // face rows (r, r+step) share h(upper, c+1)
    xor_edge(edges, lat.h_edge(static_cast<std::size_t>(upper),
                               static_cast<std::size_t>(c + 1)));
    r += step;
  }
  while (c != b.second) {
    const int step = b.second > c ? 1 : -1;
    const int right = step > 0 ? c + 1 : c;  // faces (c, c+step) share v(r, right)
    xor_edge(edges, lat.v_edge(static_cast<std::size_t>(r),
                               static_cast<std::size_t>(right)));
    c += step;
  }
}

inline void boundary_path_edges(const SurfaceLattice& lat, std::pair<int, int> a,
                                std::vector<std::uint8_t>& edges) {
  const int rows = static_cast<int>(lat.face_rows());
  const int col = a.second + 1;
  if (a.first + 1 <= rows - a.first) {
    for (int k = 0; k <= a.first; ++k)
      xor_edge(edges, lat.h_edge(static_cast<std::size_t>(k),
                                 static_cast<std::size_t>(col)));
  } else {
    for (int k = a.first + 1; k <= rows; ++k)
      xor_edge(edges, lat.h_edge(static_cast<std::size_t>(k),
                                 static_cast<std::size_t>(col)));
  }
}

}  // namespace detail

/// Exact minimum-weight matching of plaquette defects against each other and
/// the north/south boundaries, by memoized search over defect subsets.
inline MatchResult mwpm_decode(const SurfaceLattice& lat, const DefectSet& defects) {
  const std::size_t m = defects.faces.size();
  if (m > 20) throw std::invalid_argument("mwpm_decode: too many defects");
  auto sorted = defects.faces;
  std::sort(sorted.begin(), sorted.end());

  const std::size_t full = (std::size_t{1} << m) - 1;
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> best(full + 1, kUnset);
  std::vector<std::pair<int, int>> choice(full + 1, {-2, -2});
  best[0] = 0;

  // bottom-up over subsets: resolve the lowest-index defect of each subset
  for (std::size_t s = 1; s <= full; ++s) {
    int d = 0;
    while (!((s >> d) & 1)) ++d;
    const std::size_t rest = s & ~(std::size_t{1} << d);
    std::size_t w = detail::boundary_distance(lat, sorted[d]) + best[rest];
    choice[s] = {d, -1};
    for (int e = d + 1; e < static_cast<int>(m); ++e) {
      if (!((rest >> e) & 1)) continue;
      const std::size_t sub = rest & ~(std::size_t{1} << e);
      const std::size_t cand =
          detail::face_distance(sorted[d], sorted[e]) + best[sub];
      if (cand < w) {
        w = cand;
        choice[s] = {d, e};
      }
    }
    best[s] = w;
  }

  MatchResult result;
  result.correction = PauliTerm(lat.n == 0 ? 1 : lat.n);
  result.total_weight = best[full];
  std::vector<std::uint8_t> edges(lat.n, 0);
  std::size_t s = full;
  while (s) {
    auto [d, e] = choice[s];
    result.pairs.emplace_back(d, e);
    if (e < 0) {
      detail::boundary_path_edges(lat, sorted[d], edges);
      s &= ~(std::size_t{1} << d);
    } else {
      detail::path_edges(lat, sorted[d], sorted[e], edges);
      s &= ~(std::size_t{1} << d);
      s &= ~(std::size_t{1} << e);
    }
  }
  for (std::size_t q = 0; q < lat.n; ++q)
    if (edges[q]) result.correction.set_op(q, 'X');
  std::reverse(result.pairs.begin(), result.pairs.end());
  return result;
}

// ---------------------------------------------------------------------------
// residual classification

struct ResidualVerdict {
  bool success = false;
  bool logical_failure = false;
};

inline ResidualVerdict classify_residual_against(
    const std::vector<PauliTerm>& gens, const PauliTerm& residual) {
  for (const auto& g : gens)
    if (!commutes(g, residual))
      throw std::invalid_argument("classify_residual: residual has nonzero syndrome");
  auto rel = classify_against_group(gens, residual);
  const bool ok =
      rel == GroupRelation::in_group_plus || rel == GroupRelation::in_group_minus;
  return {ok, !ok};
}

inline ResidualVerdict classify_residual(const CodeSpec& code, const PauliTerm& r) {
  return classify_residual_against(code.generators, r);
}

/// Subsystem codes: anything in <S u T> is harmless gauge motion.
inline ResidualVerdict classify_residual(const SubsystemCodeSpec& sub,
                                         const PauliTerm& r) {
  for (const auto& g : sub.stabilizers)
    if (!commutes(g, r))
      throw std::invalid_argument("classify_residual: residual has nonzero syndrome");
  std::vector<PauliTerm> group = sub.stabilizers;
  group.insert(group.end(), sub.gauge.begin(), sub.gauge.end());
  auto rel = classify_against_group(group, r);
  const bool ok =
      rel == GroupRelation::in_group_plus || rel == GroupRelation::in_group_minus;
  return {ok, !ok};
}

inline ResidualVerdict classify_residual(const SurfaceLattice& lat, const PauliTerm& r) {
  std::vector<PauliTerm> gens = lat.plaquettes;
  gens.insert(gens.end(), lat.vertices.begin(), lat.vertices.end());
  return classify_residual_against(gens, r);
}

}  // namespace qeclab
