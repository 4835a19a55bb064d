#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qeclab/pauli.hpp"

namespace qeclab {

/// GF(2) row vector of a Pauli term: x bits followed by z bits.
inline std::vector<std::uint64_t> symplectic_row(const PauliTerm& p) {
  std::vector<std::uint64_t> row;
  const std::size_t nb = p.n();
  const std::size_t words = (2 * nb + 63) / 64;
  row.assign(words, 0);
  for (std::size_t q = 0; q < nb; ++q) {
    if (p.x_bit(q)) row[q / 64] |= (std::uint64_t{1} << (q % 64));
    if (p.z_bit(q)) row[(nb + q) / 64] |= (std::uint64_t{1} << ((nb + q) % 64));
  }
  return row;
}

namespace detail {

inline bool get_bit(const std::vector<std::uint64_t>& v, std::size_t i) {
  return (v[i / 64] >> (i % 64)) & 1;
}

inline void xor_rows(std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] ^= b[i];
}

}  // namespace detail

/// Rank of the generator set as symplectic GF(2) vectors.
inline std::size_t symplectic_rank(const std::vector<PauliTerm>& gens) {
  if (gens.empty()) return 0;
  std::vector<std::vector<std::uint64_t>> rows;
  rows.reserve(gens.size());
  for (const auto& g : gens) rows.push_back(symplectic_row(g));
  const std::size_t cols = 2 * gens[0].n();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && !detail::get_bit(rows[pivot], c)) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (r != rank && detail::get_bit(rows[r], c)) detail::xor_rows(rows[r], rows[rank]);
    ++rank;
  }
  return rank;
}

/// Expresses p's masks as a product of gens, if possible.  Returns the
/// coefficient bitmask over gens (index i set means gens[i] participates),
/// ignoring phases.
inline std::optional<std::vector<bool>> solve_group_combination(
    const std::vector<PauliTerm>& gens, const PauliTerm& p) {
  const std::size_t m = gens.size();
  std::vector<std::vector<std::uint64_t>> rows;
  std::vector<std::vector<bool>> coeffs(m);
  for (std::size_t i = 0; i < m; ++i) {
    rows.push_back(symplectic_row(gens[i]));
    coeffs[i].assign(m, false);
    coeffs[i][i] = true;
  }
  auto target = symplectic_row(p);
  std::vector<bool> tcoeff(m, false);
  const std::size_t cols = 2 * p.n();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < m; ++c) {
    std::size_t pivot = rank;
    while (pivot < m && !detail::get_bit(rows[pivot], c)) ++pivot;
    if (pivot == m) continue;
    std::swap(rows[rank], rows[pivot]);
    std::swap(coeffs[rank], coeffs[pivot]);
    for (std::size_t r = 0; r < m; ++r) {
      if (r != rank && detail::get_bit(rows[r], c)) {
        detail::xor_rows(rows[r], rows[rank]);
        for (std::size_t k = 0; k < m; ++k)
          coeffs[r][k] = coeffs[r][k] != coeffs[rank][k];
      }
    }
    if (detail::get_bit(target, c)) {
      detail::xor_rows(target, rows[rank]);
      for (std::size_t k = 0; k < m; ++k)
        tcoeff[k] = tcoeff[k] != coeffs[rank][k];
    }
    ++rank;
  }
  for (auto w : target)
    if (w) return std::nullopt;
  return tcoeff;
}

enum class GroupRelation { in_group_plus, in_group_minus, anticommutes, commutes_outside };

/// Classifies ±p against the group generated by gens (all gens must carry
/// real ±1 sign, i.e. even phase exponent).
inline GroupRelation classify_against_group(const std::vector<PauliTerm>& gens,
                                            const PauliTerm& p) {
  for (const auto& g : gens)
    if (!commutes(g, p)) return GroupRelation::anticommutes;
  auto combo = solve_group_combination(gens, p);
  if (!combo) return GroupRelation::commutes_outside;
  PauliTerm prod = PauliTerm::identity(p.n());
  for (std::size_t i = 0; i < gens.size(); ++i)
    if ((*combo)[i]) prod = multiply(prod, gens[i]);
  const int rel = ((prod.phase_exponent() - p.phase_exponent()) % 4 + 4) % 4;
  // commuting real products differ by ±1 only
  return rel == 0 ? GroupRelation::in_group_plus : GroupRelation::in_group_minus;
}

/// Finds a Pauli P (phase +1) whose commutation pattern against each
/// constraint term matches the requested bit (true = anticommute).
/// Returns nullopt when the constraints are inconsistent.
inline std::optional<PauliTerm> solve_commutation_pattern(
    const std::vector<std::pair<PauliTerm, bool>>& constraints, std::size_t n) {
  // unknown is the 2n-bit vector (x|z); <P,g> = x·g.z + z·g.x
  const std::size_t m = constraints.size();
  const std::size_t cols = 2 * n;
  // build rows of the linear system: row i = (g.z | g.x), rhs = bit
  std::vector<std::vector<std::uint64_t>> rows(m);
  std::vector<bool> rhs(m);
  const std::size_t words = (cols + 63) / 64;
  for (std::size_t i = 0; i < m; ++i) {
    rows[i].assign(words, 0);
    const auto& g = constraints[i].first;
    for (std::size_t q = 0; q < n; ++q) {
      if (g.z_bit(q)) rows[i][q / 64] |= (std::uint64_t{1} << (q % 64));
      if (g.x_bit(q)) rows[i][(n + q) / 64] |= (std::uint64_t{1} << ((n + q) % 64));
    }
    rhs[i] = constraints[i].second;
  }
  std::vector<std::size_t> pivot_col;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < m; ++c) {
    std::size_t pivot = rank;
    while (pivot < m && !detail::get_bit(rows[pivot], c)) ++pivot;
    if (pivot == m) continue;
    std::swap(rows[rank], rows[pivot]);
    std::swap(rhs[rank], rhs[pivot]);
    for (std::size_t r = 0; r < m; ++r) {
      if (r != rank && detail::get_bit(rows[r], c)) {
        detail::xor_rows(rows[r], rows[rank]);
        rhs[r] = rhs[r] != rhs[rank];
      }
    }
    pivot_col.push_back(c);
    ++rank;
  }
  for (std::size_t r = rank; r < m; ++r)
    if (rhs[r]) return std::nullopt;
  PauliTerm result(n);
  for (std::size_t r = 0; r < rank; ++r) {
    if (!rhs[r]) continue;
    const std::size_t c = pivot_col[r];
    if (c < n) result.set_x(c, true);
    else       result.set_z(c - n, true);
  }
  return result;
}

}  // namespace qeclab
