#include "thetalab/symp.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <deque>
#include <set>

namespace thetalab {

namespace {

std::uint64_t bit(int j) { return std::uint64_t{1} << j; }

std::vector<int> column_bits(std::uint32_t eps, std::uint32_t delta, int g) {
  std::vector<int> v(static_cast<std::size_t>(2 * g));
  for (int i = 0; i < g; ++i) {
    v[static_cast<std::size_t>(i)] = static_cast<int>((eps >> i) & 1U);
    v[static_cast<std::size_t>(g + i)] = static_cast<int>((delta >> i) & 1U);
  }
  return v;
}

}  // namespace

SpMod2Element SpMod2Element::identity(int g) {
  if (g < 1 || g > Characteristic::kMaxGenus) throw SymplecticError("genus out of range");
  std::vector<std::uint64_t> rows(static_cast<std::size_t>(2 * g));
  for (int i = 0; i < 2 * g; ++i) rows[static_cast<std::size_t>(i)] = bit(i);
  return {g, std::move(rows)};
}

SpMod2Element SpMod2Element::from_matrix(const std::vector<std::vector<int>>& m) {
  const int n = static_cast<int>(m.size());
  if (n == 0 || n % 2 != 0 || n > 2 * Characteristic::kMaxGenus) {
    throw SymplecticError("matrix must be 2g x 2g");
  }
  std::vector<std::uint64_t> rows(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(m[static_cast<std::size_t>(i)].size()) != n) {
      throw SymplecticError("matrix must be square");
    }
    for (int j = 0; j < n; ++j) {
      if (m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] & 1) {
        rows[static_cast<std::size_t>(i)] |= bit(j);
      }
    }
  }
  return {n / 2, std::move(rows)};
}

SpMod2Element SpMod2Element::from_blocks(const std::vector<std::vector<int>>& a,
                                         const std::vector<std::vector<int>>& b,
                                         const std::vector<std::vector<int>>& c,
                                         const std::vector<std::vector<int>>& d) {
  const std::size_t g = a.size();
  if (b.size() != g || c.size() != g || d.size() != g) {
    throw SymplecticError("blocks must share one size");
  }
  std::vector<std::vector<int>> m(2 * g, std::vector<int>(2 * g, 0));
  for (std::size_t i = 0; i < g; ++i) {
    for (const auto* row : {&a[i], &b[i], &c[i], &d[i]}) {
      if (row->size() != g) throw SymplecticError("blocks must be square");
    }
    for (std::size_t j = 0; j < g; ++j) {
      m[i][j] = a[i][j];
      m[i][g + j] = b[i][j];
      m[g + i][j] = c[i][j];
      m[g + i][g + j] = d[i][j];
    }
  }
  return from_matrix(m);
}

bool SpMod2Element::is_symplectic() const {
  if (g_ == 0) return false;
  // Row i of M J is row i of M with its two halves swapped.
  const std::uint64_t low = g_ == 32 ? 0xFFFFFFFFULL : (bit(g_) - 1);
  for (int i = 0; i < 2 * g_; ++i) {
    const std::uint64_t r = rows_[static_cast<std::size_t>(i)];
    const std::uint64_t swapped = ((r & low) << g_) | (r >> g_);
    for (int k = 0; k < 2 * g_; ++k) {
      const int form = std::popcount(swapped & rows_[static_cast<std::size_t>(k)]) & 1;
      const int expected = (k == (i < g_ ? i + g_ : i - g_)) ? 1 : 0;
      if (form != expected) return false;
    }
  }
  return true;
}

SpMod2Element SpMod2Element::transpose() const {
  std::vector<std::uint64_t> rows(rows_.size(), 0);
  for (int i = 0; i < 2 * g_; ++i) {
    for (int j = 0; j < 2 * g_; ++j) {
      if (entry(i, j)) rows[static_cast<std::size_t>(j)] |= bit(i);
    }
  }
  return {g_, std::move(rows)};
}

SpMod2Element SpMod2Element::operator*(const SpMod2Element& rhs) const {
  if (rhs.g_ != g_) throw SymplecticError("cannot compose elements of different genus");
  std::vector<std::uint64_t> rows(rows_.size(), 0);
  for (int i = 0; i < 2 * g_; ++i) {
    for (int k = 0; k < 2 * g_; ++k) {
      if (entry(i, k)) rows[static_cast<std::size_t>(i)] ^= rhs.rows_[static_cast<std::size_t>(k)];
    }
  }
  return {g_, std::move(rows)};
}

std::string SpMod2Element::to_string() const {
  std::string out = "[";
  for (int i = 0; i < 2 * g_; ++i) {
    if (i > 0) out += ";";
    for (int j = 0; j < 2 * g_; ++j) out += entry(i, j) ? '1' : '0';
  }
  return out + "]";
}

Characteristic act(const SpMod2Element& sigma, const Characteristic& m) {
  const int g = sigma.genus();
  if (g != m.genus()) throw SymplecticError("genus mismatch in act");
  if (!sigma.is_symplectic()) throw SymplecticError("element is not symplectic mod 2");
  const auto v = column_bits(m.eps(), m.delta(), g);
  std::uint32_t eps = 0;
  std::uint32_t delta = 0;
  for (int i = 0; i < g; ++i) {
    int e = 0;
    int dl = 0;
    int shift_e = 0;
    int shift_d = 0;
    for (int j = 0; j < g; ++j) {
      e += sigma.d(i, j) * v[static_cast<std::size_t>(j)] +
           sigma.c(i, j) * v[static_cast<std::size_t>(g + j)];
      dl += sigma.b(i, j) * v[static_cast<std::size_t>(j)] +
            sigma.a(i, j) * v[static_cast<std::size_t>(g + j)];
      shift_e += sigma.c(i, j) * sigma.d(i, j);
      shift_d += sigma.a(i, j) * sigma.b(i, j);
    }
    if ((e + shift_e) & 1) eps |= 1U << i;
    if ((dl + shift_d) & 1) delta |= 1U << i;
  }
  return {g, eps, delta};
}

SpMod2Element sigma0() {
  // Transpose of [[1,1,1,0],[1,1,0,1],[0,1,1,0],[1,0,0,1]] in the convention of act().
  return SpMod2Element::from_matrix({{1, 1, 0, 1}, {1, 1, 1, 0}, {1, 0, 1, 0}, {0, 1, 0, 1}});
}

SpMod2Element embed(const SpMod2Element& piece, const std::vector<int>& positions, int g) {
  const int h = piece.genus();
  if (static_cast<int>(positions.size()) != h || h > g) {
    throw SymplecticError("embed needs exactly piece.genus() positions, at most g");
  }
  std::set<int> seen;
  for (int p : positions) {
    if (p < 0 || p >= g) throw SymplecticError("embed position out of range");
    if (!seen.insert(p).second) throw SymplecticError("embed positions must be distinct");
  }
  std::vector<std::vector<int>> m(static_cast<std::size_t>(2 * g),
                                  std::vector<int>(static_cast<std::size_t>(2 * g), 0));
  for (int i = 0; i < 2 * g; ++i) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
  auto global = [&](int local) {
    return local < h ? positions[static_cast<std::size_t>(local)]
                     : g + positions[static_cast<std::size_t>(local - h)];
  };
  for (int i = 0; i < 2 * h; ++i) {
    for (int j = 0; j < 2 * h; ++j) {
      m[static_cast<std::size_t>(global(i))][static_cast<std::size_t>(global(j))] =
          piece.entry(i, j);
    }
  }
  return SpMod2Element::from_matrix(m);
}

SpMod2Element permutation_element(const std::vector<int>& pi) {
  const int g = static_cast<int>(pi.size());
  std::vector<int> sorted = pi;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < g; ++i) {
    if (sorted[static_cast<std::size_t>(i)] != i) throw SymplecticError("not a permutation");
  }
  std::vector<std::vector<int>> p(static_cast<std::size_t>(g),
                                  std::vector<int>(static_cast<std::size_t>(g), 0));
  for (int i = 0; i < g; ++i) p[static_cast<std::size_t>(pi[static_cast<std::size_t>(i)])][static_cast<std::size_t>(i)] = 1;
  const std::vector<std::vector<int>> zero(static_cast<std::size_t>(g),
                                           std::vector<int>(static_cast<std::size_t>(g), 0));
  return SpMod2Element::from_blocks(p, zero, zero, p);
}

SpMod2Element gamma1_s() { return SpMod2Element::from_matrix({{0, 1}, {1, 0}}); }
SpMod2Element gamma1_t() { return SpMod2Element::from_matrix({{1, 1}, {0, 1}}); }

std::string_view to_string(GeneratorSet set) {
  switch (set) {
    case GeneratorSet::Identity:
      return "identity";
    case GeneratorSet::Stab:
      return "Stab";
    case GeneratorSet::Gg:
      return "Gg";
  }
  return "?";
}

GeneratorSet parse_generator_set(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (lower == "identity" || lower == "id") return GeneratorSet::Identity;
  if (lower == "stab") return GeneratorSet::Stab;
  if (lower == "gg") return GeneratorSet::Gg;
  throw SymplecticError("unknown generator set \"" + std::string(name) + "\"");
}

std::vector<SpMod2Element> generators(GeneratorSet set, int g) {
  std::vector<SpMod2Element> gens;
  if (set == GeneratorSet::Identity) {
    gens.push_back(SpMod2Element::identity(g));
    return gens;
  }
  for (int a = 0; a < g; ++a) {
    gens.push_back(embed(gamma1_s(), {a}, g));
    gens.push_back(embed(gamma1_t(), {a}, g));
  }
  for (int a = 0; a + 1 < g; ++a) {
    std::vector<int> pi(static_cast<std::size_t>(g));
    for (int i = 0; i < g; ++i) pi[static_cast<std::size_t>(i)] = i;
    std::swap(pi[static_cast<std::size_t>(a)], pi[static_cast<std::size_t>(a + 1)]);
    gens.push_back(permutation_element(pi));
  }
  if (set == GeneratorSet::Gg && g >= 2) gens.push_back(embed(sigma0(), {0, 1}, g));
  return gens;
}

std::vector<Characteristic> orbit(const Characteristic& m,
                                  const std::vector<SpMod2Element>& gens) {
  if (gens.empty()) throw SymplecticError("orbit needs at least one generator");
  for (const auto& s : gens) {
    if (s.genus() != m.genus()) throw SymplecticError("genus mismatch in orbit");
    if (!s.is_symplectic()) throw SymplecticError("generator is not symplectic mod 2");
  }
  std::set<Characteristic> seen{m};
  std::deque<Characteristic> queue{m};
  while (!queue.empty()) {
    const Characteristic cur = queue.front();
    queue.pop_front();
    for (const auto& s : gens) {
      Characteristic next = act(s, cur);
      if (seen.insert(next).second) queue.push_back(next);
    }
  }
  return {seen.begin(), seen.end()};
}

OrbitReport verify_transitivity(int g) {
  if (g < 1 || g > 6) throw SymplecticError("verify_transitivity supports 1 <= g <= 6");
  const auto gens = generators(GeneratorSet::Gg, g);
  OrbitReport r;
  r.g = g;
  const std::size_t half = std::size_t{1} << (g - 1);
  r.expected_even = half * ((std::size_t{1} << g) + 1);
  r.expected_odd = half * ((std::size_t{1} << g) - 1);
  r.even_orbit = orbit(Characteristic::zero(g), gens).size();
  r.odd_orbit = orbit(Characteristic(g, 1U, 1U), gens).size();
  r.pass = r.even_orbit == r.expected_even && r.odd_orbit == r.expected_odd;
  return r;
}

}  // namespace thetalab
