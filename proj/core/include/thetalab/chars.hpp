#pragma once

// Theta characteristics over Z_2: parity, classes, fundamental systems and
// the hyperelliptic vanishing sets.

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace thetalab {

/// Raised for malformed characteristic text and out-of-range genus requests.
class CharacteristicError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Parity { Even, Odd };

std::string_view to_string(Parity p);

/// A characteristic m = [eps; delta] with eps, delta in Z_2^g.
///
/// Column a (0-based) is stored in bit a of each mask. Addition is XOR. The
/// comparison operators order characteristics lexicographically on the text
/// form, i.e. first by the eps row read left to right, then by delta.
class Characteristic {
 public:
  static constexpr int kMaxGenus = 32;

  Characteristic() = default;
  Characteristic(int g, std::uint32_t eps, std::uint32_t delta);

  /// Builds from two equal-length 0/1 strings, column 1 first.
  static Characteristic from_rows(std::string_view eps, std::string_view delta);
  static Characteristic zero(int g) { return {g, 0, 0}; }

  /// Accepts "[110;110]" and "eps:110 delta:110".
  static Characteristic parse(std::string_view text);

  int genus() const { return g_; }
  std::uint32_t eps() const { return eps_; }
  std::uint32_t delta() const { return delta_; }
  int eps_bit(int a) const { return static_cast<int>((eps_ >> a) & 1U); }
  int delta_bit(int a) const { return static_cast<int>((delta_ >> a) & 1U); }

  /// Column a as a genus-1 characteristic.
  Characteristic column(int a) const { return {1, (eps_ >> a) & 1U, (delta_ >> a) & 1U}; }

  Parity parity() const;
  bool is_even() const { return parity() == Parity::Even; }
  /// Number of columns equal to [1;1] (the integer scalar product).
  int scalar_class() const;

  Characteristic operator+(const Characteristic& other) const;
  Characteristic& operator+=(const Characteristic& other);

  /// Concatenation m1 (+) m2 of a genus g1 and a genus g2 characteristic.
  Characteristic direct_sum(const Characteristic& other) const;

  std::string compact() const;  // "[110;110]"
  std::string verbose() const;  // "eps:110 delta:110"

  friend bool operator==(const Characteristic&, const Characteristic&) = default;
  friend std::strong_ordering operator<=>(const Characteristic& a, const Characteristic& b);

 private:
  int g_ = 0;
  std::uint32_t eps_ = 0;
  std::uint32_t delta_ = 0;
};

Parity parity(const Characteristic& m);
int scalar_class(const Characteristic& m);

/// Optional filter for enumerate(): a parity and, optionally, a class l.
struct ClassFilter {
  std::optional<Parity> parity;
  std::optional<int> l;
};

inline constexpr int kDefaultEnumerationBound = 8;

/// All 2^{2g} characteristics matching the filter, in lexicographic order.
std::vector<Characteristic> enumerate(int g, ClassFilter filter = {},
                                      int bound = kDefaultEnumerationBound);

/// Sign e(m) = (-1)^{eps.delta}.
int parity_sign(const Characteristic& m);

/// e(m1) e(m2) e(m3) e(m1+m2+m3) == -1.
bool is_azygetic_triple(const Characteristic& m1, const Characteristic& m2,
                        const Characteristic& m3);

/// A special fundamental system o_1..o_g, e_1..e_{g+2}.
struct FundamentalSystem {
  int g = 0;
  std::vector<Characteristic> odds;
  std::vector<Characteristic> evens;

  /// o_1..o_g, e_1..e_{g+2}.
  std::vector<Characteristic> members() const;
  /// The 2g+1 members o_1..o_g, e_2..e_{g+2} used for decompositions.
  std::vector<Characteristic> basis() const;
  /// Name of basis member i ("o1".."og", "e2".."e{g+2}").
  std::string basis_label(int i) const;
};

/// The standard system: o_j = [u_j; 1 in rows <= j], e_1 = 0,
/// e_{j+1} = [u_j; 1 in rows <= j-1] for j = 1..g, e_{g+2} = [0; 1..1].
FundamentalSystem special_fundamental_system(int g);

/// b^g = o_1 + ... + o_g.
Characteristic b_char(const FundamentalSystem& fs);

/// True iff the odd-cardinality subset sums of `candidates` hit every
/// characteristic exactly once.
bool is_essential_basis(const std::vector<Characteristic>& candidates);

/// Subset of basis() members (bit i = basis member i) summing to m.
struct Decomposition {
  std::uint64_t members = 0;
  int size() const;
  std::vector<int> indices() const;
};

/// The unique representation of m as a sum of at most g basis members.
Decomposition decompose(const Characteristic& m, const FundamentalSystem& fs);

/// { m + b^g : m a sum of k < g basis members, m + b^g even }, sorted.
std::vector<Characteristic> hyperelliptic_vanishing_set(int g,
                                                        int bound = kDefaultEnumerationBound);

/// Parity of m + b^g predicted from the number k of summands in m.
Parity predicted_shift_parity(int k, int g);

/// Every even m + b^g with m a sum of < g basis members lies in E*.
bool vanish_lemma_check(int g, int bound = kDefaultEnumerationBound);

/// o_{j1} + o_{j2} + o_{j3} for 0-based j1 < j2 < j3.
Characteristic triple_characteristic(const FundamentalSystem& fs, int j1, int j2, int j3);

/// [1..1 0..0; 1..1 0..0] with the first l columns equal to [1;1].
Characteristic normal_form(int g, int l);

}  // namespace thetalab
