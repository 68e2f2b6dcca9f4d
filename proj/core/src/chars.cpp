#include "thetalab/chars.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <set>

namespace thetalab {

namespace {

void check_genus(int g) {
  if (g < 1 || g > Characteristic::kMaxGenus) {
    throw CharacteristicError("genus must lie in 1.." + std::to_string(Characteristic::kMaxGenus) +
                              ", got " + std::to_string(g));
  }
}

std::uint32_t row_mask(std::string_view row) {
  std::uint32_t mask = 0;
  for (std::size_t a = 0; a < row.size(); ++a) {
    if (row[a] == '1') {
      mask |= 1U << a;
    } else if (row[a] != '0') {
      throw CharacteristicError("characteristic rows may only contain 0 and 1");
    }
  }
  return mask;
}

std::string row_string(std::uint32_t mask, int g) {
  std::string out(static_cast<std::size_t>(g), '0');
  for (int a = 0; a < g; ++a) {
    if ((mask >> a) & 1U) out[static_cast<std::size_t>(a)] = '1';
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Packs a characteristic into one word: eps in the low g bits, delta above.
std::uint64_t pack(const Characteristic& m) {
  return static_cast<std::uint64_t>(m.eps()) |
         (static_cast<std::uint64_t>(m.delta()) << m.genus());
}

}  // namespace

std::string_view to_string(Parity p) { return p == Parity::Even ? "even" : "odd"; }

Characteristic::Characteristic(int g, std::uint32_t eps, std::uint32_t delta)
    : g_(g), eps_(eps), delta_(delta) {
  check_genus(g);
  const std::uint32_t mask = g == 32 ? ~0U : ((1U << g) - 1U);
  if ((eps & ~mask) != 0 || (delta & ~mask) != 0) {
    throw CharacteristicError("characteristic bits exceed genus " + std::to_string(g));
  }
}

Characteristic Characteristic::from_rows(std::string_view eps, std::string_view delta) {
  if (eps.size() != delta.size()) {
    throw CharacteristicError("eps and delta rows must have equal length");
  }
  const int g = static_cast<int>(eps.size());
  check_genus(g);
  return {g, row_mask(eps), row_mask(delta)};
}

Characteristic Characteristic::parse(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '[') {
    if (text.back() != ']') throw CharacteristicError("missing ']' in characteristic");
    const auto body = text.substr(1, text.size() - 2);
    const auto semi = body.find(';');
    if (semi == std::string_view::npos) throw CharacteristicError("missing ';' in characteristic");
    return from_rows(trim(body.substr(0, semi)), trim(body.substr(semi + 1)));
  }
  const auto ep = text.find("eps:");
  const auto dp = text.find("delta:");
  if (ep == std::string_view::npos || dp == std::string_view::npos || dp < ep) {
    throw CharacteristicError("expected \"[eps;delta]\" or \"eps:... delta:...\", got \"" +
                              std::string(text) + "\"");
  }
  return from_rows(trim(text.substr(ep + 4, dp - ep - 4)), trim(text.substr(dp + 6)));
}

Parity Characteristic::parity() const {
  return (std::popcount(eps_ & delta_) & 1) == 0 ? Parity::Even : Parity::Odd;
}

int Characteristic::scalar_class() const { return std::popcount(eps_ & delta_); }

Characteristic Characteristic::operator+(const Characteristic& other) const {
  Characteristic out = *this;
  out += other;
  return out;
}

Characteristic& Characteristic::operator+=(const Characteristic& other) {
  if (other.g_ != g_) throw CharacteristicError("cannot add characteristics of different genus");
  eps_ ^= other.eps_;
  delta_ ^= other.delta_;
  return *this;
}

Characteristic Characteristic::direct_sum(const Characteristic& other) const {
  return {g_ + other.g_, eps_ | (other.eps_ << g_), delta_ | (other.delta_ << g_)};
}

std::string Characteristic::compact() const {
  return "[" + row_string(eps_, g_) + ";" + row_string(delta_, g_) + "]";
}

std::string Characteristic::verbose() const {
  return "eps:" + row_string(eps_, g_) + " delta:" + row_string(delta_, g_);
}

std::strong_ordering operator<=>(const Characteristic& a, const Characteristic& b) {
  if (auto c = a.g_ <=> b.g_; c != 0) return c;
  for (int i = 0; i < a.g_; ++i) {
    if (auto c = a.eps_bit(i) <=> b.eps_bit(i); c != 0) return c;
  }
  for (int i = 0; i < a.g_; ++i) {
    if (auto c = a.delta_bit(i) <=> b.delta_bit(i); c != 0) return c;
  }
  return std::strong_ordering::equal;
}

Parity parity(const Characteristic& m) { return m.parity(); }
int scalar_class(const Characteristic& m) { return m.scalar_class(); }

std::vector<Characteristic> enumerate(int g, ClassFilter filter, int bound) {
  check_genus(g);
  if (g > bound) {
    throw CharacteristicError("enumeration bound exceeded: g=" + std::to_string(g) + " > " +
                              std::to_string(bound));
  }
  std::vector<Characteristic> out;
  const std::uint32_t n = 1U << g;
  for (std::uint32_t e = 0; e < n; ++e) {
    for (std::uint32_t d = 0; d < n; ++d) {
      Characteristic m(g, e, d);
      if (filter.parity && m.parity() != *filter.parity) continue;
      if (filter.l && m.scalar_class() != *filter.l) continue;
      out.push_back(m);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

int parity_sign(const Characteristic& m) { return m.is_even() ? 1 : -1; }

bool is_azygetic_triple(const Characteristic& m1, const Characteristic& m2,
                        const Characteristic& m3) {
  return parity_sign(m1) * parity_sign(m2) * parity_sign(m3) * parity_sign(m1 + m2 + m3) == -1;
}

std::vector<Characteristic> FundamentalSystem::members() const {
  std::vector<Characteristic> out = odds;
  out.insert(out.end(), evens.begin(), evens.end());
  return out;
}

std::vector<Characteristic> FundamentalSystem::basis() const {
  std::vector<Characteristic> out = odds;
  out.insert(out.end(), evens.begin() + 1, evens.end());
  return out;
}

std::string FundamentalSystem::basis_label(int i) const {
  return i < g ? "o" + std::to_string(i + 1) : "e" + std::to_string(i - g + 2);
}

FundamentalSystem special_fundamental_system(int g) {
  check_genus(g);
  FundamentalSystem fs;
  fs.g = g;
  // rows_upto(k): delta with ones in rows 1..k.
  auto rows_upto = [](int k) { return k <= 0 ? 0U : ((k >= 32) ? ~0U : ((1U << k) - 1U)); };
  for (int j = 1; j <= g; ++j) {
    fs.odds.emplace_back(g, 1U << (j - 1), rows_upto(j));
  }
  fs.evens.push_back(Characteristic::zero(g));
  for (int j = 1; j <= g; ++j) {
    fs.evens.emplace_back(g, 1U << (j - 1), rows_upto(j - 1));
  }
  fs.evens.emplace_back(g, 0U, rows_upto(g));
  return fs;
}

Characteristic b_char(const FundamentalSystem& fs) {
  Characteristic b = Characteristic::zero(fs.g);
  for (const auto& o : fs.odds) b += o;
  return b;
}

bool is_essential_basis(const std::vector<Characteristic>& candidates) {
  if (candidates.empty()) return false;
  const int g = candidates.front().genus();
  if (static_cast<int>(candidates.size()) != 2 * g + 1 || g > 10) return false;
  const std::size_t total = std::size_t{1} << (2 * g);
  std::vector<bool> seen(total, false);
  const std::uint64_t subsets = std::uint64_t{1} << candidates.size();
  for (std::uint64_t s = 0; s < subsets; ++s) {
    if ((std::popcount(s) & 1) == 0) continue;
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if ((s >> i) & 1U) sum ^= pack(candidates[i]);
    }
    if (seen[sum]) return false;
    seen[sum] = true;
  }
  return true;
}

int Decomposition::size() const { return std::popcount(members); }

std::vector<int> Decomposition::indices() const {
  std::vector<int> out;
  for (int i = 0; i < 64; ++i) {
    if ((members >> i) & 1U) out.push_back(i);
  }
  return out;
}

Decomposition decompose(const Characteristic& m, const FundamentalSystem& fs) {
  if (m.genus() != fs.g) throw CharacteristicError("genus mismatch in decompose");
  const auto basis = fs.basis();
  const int dim = 2 * fs.g;
  // Echelon rows: (vector, combination of basis members), indexed by pivot bit.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> pivots(static_cast<std::size_t>(dim),
                                                              {0, 0});
  for (int i = 0; i < dim; ++i) {
    std::uint64_t v = pack(basis[static_cast<std::size_t>(i)]);
    std::uint64_t comb = std::uint64_t{1} << i;
    for (int bit = dim - 1; bit >= 0 && v != 0; --bit) {
      if (((v >> bit) & 1U) == 0) continue;
      auto& row = pivots[static_cast<std::size_t>(bit)];
      if (row.first == 0) {
        row = {v, comb};
        v = 0;
        break;
      }
      v ^= row.first;
      comb ^= row.second;
    }
    if (v != 0) throw CharacteristicError("fundamental system is degenerate");
  }
  std::uint64_t target = pack(m);
  std::uint64_t comb = 0;
  for (int bit = dim - 1; bit >= 0; --bit) {
    if (((target >> bit) & 1U) == 0) continue;
    const auto& row = pivots[static_cast<std::size_t>(bit)];
    if (row.first == 0) throw CharacteristicError("basis does not span Z_2^{2g}");
    target ^= row.first;
    comb ^= row.second;
  }
  const std::uint64_t all = (std::uint64_t{1} << (dim + 1)) - 1;
  Decomposition d{comb};
  if (d.size() > fs.g) d.members = all ^ comb;
  return d;
}

namespace {

// Calls visit(mask) for every subset of {0..n-1} with exactly k elements.
template <typename Visit>
void for_each_subset(int n, int k, Visit&& visit) {
  if (k == 0) {
    visit(std::uint64_t{0});
    return;
  }
  std::uint64_t s = (std::uint64_t{1} << k) - 1;
  const std::uint64_t limit = std::uint64_t{1} << n;
  while (s < limit) {
    visit(s);
    const std::uint64_t c = s & (~s + 1);
    const std::uint64_t r = s + c;
    s = (((r ^ s) >> 2) / c) | r;
  }
}

}  // namespace

std::vector<Characteristic> hyperelliptic_vanishing_set(int g, int bound) {
  check_genus(g);
  if (g > bound) throw CharacteristicError("enumeration bound exceeded");
  const auto fs = special_fundamental_system(g);
  const auto basis = fs.basis();
  const auto b = b_char(fs);
  std::set<Characteristic> out;
  for (int k = 0; k < g; ++k) {
    for_each_subset(2 * g + 1, k, [&](std::uint64_t s) {
      Characteristic m = b;
      for (int i = 0; i < 2 * g + 1; ++i) {
        if ((s >> i) & 1U) m += basis[static_cast<std::size_t>(i)];
      }
      if (m.is_even()) out.insert(m);
    });
  }
  return {out.begin(), out.end()};
}

Parity predicted_shift_parity(int k, int g) {
  const int r = ((k - g) % 4 + 4) % 4;
  return (r == 0 || r == 1) ? Parity::Even : Parity::Odd;
}

bool vanish_lemma_check(int g, int bound) {
  check_genus(g);
  if (g > bound) throw CharacteristicError("enumeration bound exceeded");
  const auto fs = special_fundamental_system(g);
  const auto basis = fs.basis();
  const auto b = b_char(fs);
  bool ok = true;
  for (int k = 0; k < g && ok; ++k) {
    for_each_subset(2 * g + 1, k, [&](std::uint64_t s) {
      Characteristic m = b;
      for (int i = 0; i < 2 * g + 1; ++i) {
        if ((s >> i) & 1U) m += basis[static_cast<std::size_t>(i)];
      }
      if (m.is_even() && m.scalar_class() < 2) ok = false;
    });
  }
  return ok;
}

Characteristic triple_characteristic(const FundamentalSystem& fs, int j1, int j2, int j3) {
  if (!(0 <= j1 && j1 < j2 && j2 < j3 && j3 < fs.g)) {
    throw CharacteristicError("triple indices must satisfy 0 <= j1 < j2 < j3 < g");
  }
  return fs.odds[static_cast<std::size_t>(j1)] + fs.odds[static_cast<std::size_t>(j2)] +
         fs.odds[static_cast<std::size_t>(j3)];
}

Characteristic normal_form(int g, int l) {
  check_genus(g);
  if (l < 0 || l > g) throw CharacteristicError("class l must lie in 0..g");
  const std::uint32_t mask = l == 32 ? ~0U : ((1U << l) - 1U);
  return {g, mask, mask};
}

}  // namespace thetalab
