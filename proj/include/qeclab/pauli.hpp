#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qeclab {

/// Signed n-qubit Pauli operator in symplectic form.
///
/// A term is i^phase * (X^x0 Z^z0) ⊗ ... ⊗ (X^x_{n-1} Z^z_{n-1}) with
/// phase in {0,1,2,3}.  Y is stored as both bits set with the extra i
/// folded into the phase (Y = iXZ), so a bare "Y" string parses to
/// phase=1, x=1, z=1.  Qubit 0 is the leftmost symbol in text form.
class PauliTerm {
public:
  explicit PauliTerm(std::size_t n)
      : n_(n), x_((n + 63) / 64, 0), z_((n + 63) / 64, 0), phase_(0) {
    if (n == 0) throw std::invalid_argument("PauliTerm: n must be >= 1");
  }

  static PauliTerm identity(std::size_t n) { return PauliTerm(n); }

  /// Single non-identity factor at qubit q ('X','Y','Z').
  static PauliTerm single(std::size_t n, std::size_t q, char op) {
    PauliTerm t(n);
    t.set_op(q, op);
    return t;
  }

  /// Phase-+1 term from packed bit masks (n <= 64; bit q = qubit q).
  static PauliTerm from_masks(std::size_t n, std::uint64_t xm, std::uint64_t zm) {
    if (n > 64) throw std::invalid_argument("PauliTerm::from_masks: n > 64");
    PauliTerm t(n);
    t.x_[0] = xm;
    t.z_[0] = zm;
    return t;
  }

  static PauliTerm parse(std::string_view text) {
    int ph = 0;
    // optional sign prefix: '+', '-', 'i', '-i', '+i'
    std::size_t pos = 0;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      if (text[pos] == '-') ph = 2;
      ++pos;
    }
    if (pos < text.size() && text[pos] == 'i') {
      ph = (ph + 1) % 4;
      ++pos;
    }
    if (pos >= text.size())
      throw std::invalid_argument("PauliTerm::parse: empty operator string");
    PauliTerm t(text.size() - pos);
    for (std::size_t q = 0; pos < text.size(); ++q, ++pos)
      t.set_op(q, text[pos]);
    t.phase_ = (t.phase_ + ph) % 4;
    return t;
  }

  std::size_t n() const { return n_; }
  int phase_exponent() const { return phase_; }

  bool x_bit(std::size_t q) const { return (x_[q / 64] >> (q % 64)) & 1; }
  bool z_bit(std::size_t q) const { return (z_[q / 64] >> (q % 64)) & 1; }

  void set_x(std::size_t q, bool v) { set_bit(x_, q, v); }
  void set_z(std::size_t q, bool v) { set_bit(z_, q, v); }
  void set_phase_exponent(int e) { phase_ = ((e % 4) + 4) % 4; }

  void set_op(std::size_t q, char op) {
    check_index(q);
    switch (op) {
      case 'I': set_x(q, false); set_z(q, false); break;
      case 'X': set_x(q, true);  set_z(q, false); break;
      case 'Z': set_x(q, false); set_z(q, true);  break;
      case 'Y':
        // undo any previous Y phase at this position first
        if (x_bit(q) && z_bit(q)) phase_ = (phase_ + 3) % 4;
        set_x(q, true);
        set_z(q, true);
        phase_ = (phase_ + 1) % 4;
        return;
      default:
        throw std::invalid_argument(std::string("PauliTerm: illegal symbol '") + op + "'");
    }
    // clearing a Y also clears its phase contribution; callers building
    // terms incrementally go through single()/parse() so this is enough
  }

  char op_at(std::size_t q) const {
    const bool x = x_bit(q), z = z_bit(q);
    if (x && z) return 'Y';
    if (x) return 'X';
    if (z) return 'Z';
    return 'I';
  }

  /// Number of non-identity positions.
  std::size_t weight() const {
    std::size_t w = 0;
    for (std::size_t i = 0; i < x_.size(); ++i)
      w += static_cast<std::size_t>(__builtin_popcountll(x_[i] | z_[i]));
    return w;
  }

  bool is_identity() const {
    for (std::size_t i = 0; i < x_.size(); ++i)
      if (x_[i] | z_[i]) return false;
    return true;
  }

  /// Group product a*b with exact phase.
  friend PauliTerm multiply(const PauliTerm& a, const PauliTerm& b) {
    if (a.n_ != b.n_)
      throw std::invalid_argument("PauliTerm::multiply: dimension mismatch");
    PauliTerm r(a.n_);
    // moving X^{b.x} left past Z^{a.z} gives (-1)^{|a.z & b.x|}
    std::size_t swaps = 0;
    for (std::size_t i = 0; i < a.x_.size(); ++i) {
      swaps += static_cast<std::size_t>(__builtin_popcountll(a.z_[i] & b.x_[i]));
      r.x_[i] = a.x_[i] ^ b.x_[i];
      r.z_[i] = a.z_[i] ^ b.z_[i];
    }
    r.phase_ = static_cast<int>((a.phase_ + b.phase_ + 2 * (swaps & 1)) % 4);
    return r;
  }

  /// True iff the symplectic inner product vanishes (phase-independent).
  friend bool commutes(const PauliTerm& a, const PauliTerm& b) {
    if (a.n_ != b.n_)
      throw std::invalid_argument("PauliTerm::commutes: dimension mismatch");
    std::size_t s = 0;
    for (std::size_t i = 0; i < a.x_.size(); ++i)
      s += static_cast<std::size_t>(__builtin_popcountll(a.x_[i] & b.z_[i])) +
           static_cast<std::size_t>(__builtin_popcountll(a.z_[i] & b.x_[i]));
    return (s & 1) == 0;
  }

  PauliTerm inverse() const {
    PauliTerm r = *this;
    // P * P = i^{2*phase} * (-1)^{#Y-positions-swap}?  Simpler: P^2 has the
    // same masks xor'd away, so P^{-1} = P up to phase. Compute P*P's phase
    // and cancel it.
    PauliTerm sq = multiply(*this, *this);
    r.phase_ = ((phase_ - sq.phase_) % 4 + 4) % 4;
    return r;
  }

  /// Canonical text form: phase prefix ("", "-", "i", "-i") relative to the
  /// letter string, where each Y accounts for one factor of i.
  std::string format() const {
    int y_count = 0;
    std::string body;
    body.reserve(n_);
    for (std::size_t q = 0; q < n_; ++q) {
      char c = op_at(q);
      if (c == 'Y') ++y_count;
      body += c;
    }
    int rel = ((phase_ - y_count) % 4 + 4) % 4;
    static const char* prefix[4] = {"", "i", "-", "-i"};
    return prefix[rel] + body;
  }

  bool same_masks(const PauliTerm& o) const {
    return n_ == o.n_ && x_ == o.x_ && z_ == o.z_;
  }

  bool operator==(const PauliTerm& o) const {
    return same_masks(o) && phase_ == o.phase_;
  }

  /// Tensor product a ⊗ b (a on the left block).
  friend PauliTerm tensor(const PauliTerm& a, const PauliTerm& b) {
    PauliTerm r(a.n_ + b.n_);
    for (std::size_t q = 0; q < a.n_; ++q) {
      r.set_x(q, a.x_bit(q));
      r.set_z(q, a.z_bit(q));
    }
    for (std::size_t q = 0; q < b.n_; ++q) {
      r.set_x(a.n_ + q, b.x_bit(q));
      r.set_z(a.n_ + q, b.z_bit(q));
    }
    r.phase_ = (a.phase_ + b.phase_) % 4;
    return r;
  }

  const std::vector<std::uint64_t>& x_words() const { return x_; }
  const std::vector<std::uint64_t>& z_words() const { return z_; }

private:
  void check_index(std::size_t q) const {
    if (q >= n_) throw std::out_of_range("PauliTerm: qubit index out of range");
  }
  static void set_bit(std::vector<std::uint64_t>& w, std::size_t q, bool v) {
    if (v) w[q / 64] |= (std::uint64_t{1} << (q % 64));
    else   w[q / 64] &= ~(std::uint64_t{1} << (q % 64));
  }

  std::size_t n_;
  std::vector<std::uint64_t> x_, z_;
  int phase_;  // exponent of i
};

}  // namespace qeclab
