#pragma once

// Sp(2g, Z_2) acting on theta characteristics.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "thetalab/chars.hpp"

namespace thetalab {

class SymplecticError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// M = [[A, B], [C, D]] over Z_2, stored as 2g rows of 2g bits (bit j = column j).
class SpMod2Element {
 public:
  SpMod2Element() = default;

  static SpMod2Element identity(int g);
  /// Rows of 0/1 entries; must be square of even size.
  static SpMod2Element from_matrix(const std::vector<std::vector<int>>& rows);
  static SpMod2Element from_blocks(const std::vector<std::vector<int>>& a,
                                   const std::vector<std::vector<int>>& b,
                                   const std::vector<std::vector<int>>& c,
                                   const std::vector<std::vector<int>>& d);

  int genus() const { return g_; }
  int entry(int i, int j) const { return static_cast<int>((rows_[i] >> j) & 1U); }
  /// Block entries, 0-based inside the g x g block.
  int a(int i, int j) const { return entry(i, j); }
  int b(int i, int j) const { return entry(i, g_ + j); }
  int c(int i, int j) const { return entry(g_ + i, j); }
  int d(int i, int j) const { return entry(g_ + i, g_ + j); }

  /// M J M^t = J with J = [[0, I], [I, 0]] (signs are irrelevant mod 2).
  bool is_symplectic() const;

  SpMod2Element transpose() const;
  SpMod2Element operator*(const SpMod2Element& rhs) const;
  friend bool operator==(const SpMod2Element&, const SpMod2Element&) = default;

  std::string to_string() const;

 private:
  SpMod2Element(int g, std::vector<std::uint64_t> rows) : g_(g), rows_(std::move(rows)) {}

  int g_ = 0;
  std::vector<std::uint64_t> rows_;
};

/// sigma o [eps; delta] = [[D, C], [B, A]] [eps; delta] + [diag(C D^t); diag(A B^t)] mod 2.
///
/// This is a left action: act(s1 * s2, m) == act(s1, act(s2, m)), and it
/// preserves parity.
Characteristic act(const SpMod2Element& sigma, const Characteristic& m);

/// The genus-2 element sending [00;00] to [11;11].
SpMod2Element sigma0();

/// Block-embeds `piece` on the 0-based coordinates `positions` of genus g.
SpMod2Element embed(const SpMod2Element& piece, const std::vector<int>& positions, int g);

/// A = D = P with P[pi[i]][i] = 1, so column i of a characteristic moves to pi[i].
SpMod2Element permutation_element(const std::vector<int>& pi);

/// Genus-1 generators [[0,1],[1,0]] and [[1,1],[0,1]].
SpMod2Element gamma1_s();
SpMod2Element gamma1_t();

enum class GeneratorSet {
  Identity,
  Stab,  // per-coordinate Gamma_1 generators and adjacent transpositions
  Gg,    // Stab plus sigma0 on coordinates 1, 2
};

std::string_view to_string(GeneratorSet set);
/// Accepts "identity", "Stab", "Gg" (case-insensitive).
GeneratorSet parse_generator_set(std::string_view name);
std::vector<SpMod2Element> generators(GeneratorSet set, int g);

/// Breadth-first closure of {m}; returned sorted.
std::vector<Characteristic> orbit(const Characteristic& m,
                                  const std::vector<SpMod2Element>& gens);

struct OrbitReport {
  int g = 0;
  std::size_t even_orbit = 0;
  std::size_t odd_orbit = 0;
  std::size_t expected_even = 0;
  std::size_t expected_odd = 0;
  bool pass = false;
};

/// Orbits of [0..0;0..0] and [10..0;10..0] under the G_g generators.
OrbitReport verify_transitivity(int g);

}  // namespace thetalab
