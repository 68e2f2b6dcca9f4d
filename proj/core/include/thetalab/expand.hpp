#pragma once

// Exact near-diagonal expansions of theta functions.
//
// Near tau = diag(t) + D, with D off-diagonal, the heat equation gives
//   d^b theta(diag t + D) = sum_d (2 pi i)^{-|d|} prod D^d / d! prod_a theta_a^{(b_a + n_a(d))}(t_a),
// summed over symmetric zero-diagonal degree matrices d with row sums n_a(d).
// A bracket [a_1, ..., a_2n] is the part of that sum with prescribed row sums.
//
// Indices in this header are 1-based, matching the bracket notation.

#include <compare>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/rational.hpp>
#include <nlohmann/json_fwd.hpp>

#include "thetalab/theta.hpp"

namespace thetalab {

using Rational = boost::rational<std::int64_t>;

class ExpansionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Position of tau_ab (1 <= a < b <= g) in Monomial::tau.
int pair_index(int a, int b, int g);

/// (2 pi i)^{-inv_twopii} prod phi^phi prod psi^psi prod tau_ab^tau.
struct Monomial {
  int inv_twopii = 0;
  std::vector<int> tau;  // g(g-1)/2 entries, ordered (1,2), (1,3), ..., (g-1,g)
  std::vector<int> phi;  // g entries
  std::vector<int> psi;  // g entries

  int tau_degree() const;
  friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

/// Sparse polynomial in the off-diagonal tau_ab with exact rational
/// coefficients and formal symbols phi_alpha, psi_alpha. Each term tracks its
/// own power of (2 pi i)^{-1}.
class BracketPolynomial {
 public:
  explicit BracketPolynomial(int g);

  static BracketPolynomial constant(int g, Rational c);
  static BracketPolynomial phi(int g, int alpha);
  static BracketPolynomial psi(int g, int alpha);

  int genus() const { return g_; }
  const std::map<Monomial, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Lowest and highest tau-degree; -1 for the zero polynomial.
  int min_degree() const;
  int max_degree() const;
  /// Terms of tau-degree <= max_deg.
  BracketPolynomial truncated(int max_deg) const;
  /// Largest power of (2 pi i)^{-1} over all terms; 0 for the zero polynomial.
  int twopii_power() const;

  Rational coefficient(const Monomial& mono) const;
  void add_term(const Monomial& mono, Rational c);

  BracketPolynomial& operator+=(const BracketPolynomial& rhs);
  BracketPolynomial& operator-=(const BracketPolynomial& rhs);
  BracketPolynomial& operator*=(Rational c);
  friend BracketPolynomial operator+(BracketPolynomial a, const BracketPolynomial& b) { return a += b; }
  friend BracketPolynomial operator-(BracketPolynomial a, const BracketPolynomial& b) { return a -= b; }
  friend BracketPolynomial operator*(BracketPolynomial a, Rational c) { return a *= c; }
  friend BracketPolynomial operator*(Rational c, BracketPolynomial a) { return a *= c; }
  friend BracketPolynomial operator*(const BracketPolynomial& a, const BracketPolynomial& b);
  friend bool operator==(const BracketPolynomial&, const BracketPolynomial&) = default;

  /// "1/(2pii)^2 * t12*t34 + 1/(2pii)^2 * 1/2 * phi3 * t13*t23", terms in
  /// canonical order; "0" when empty.
  std::string to_string() const;
  /// {"g": g, "terms": [{"coeff": "p/q", "inv_twopii": n, "tau": {"12": d}, "phi": {..}, "psi": {..}}]}
  nlohmann::json to_json() const;

 private:
  Monomial unit() const;

  int g_;
  std::map<Monomial, Rational> terms_;
};

inline constexpr int kDefaultBracketCap = 4;

/// [a_1, ..., a_2n]: the sum over degree matrices with the index multiset as
/// row sums of prod tau^d / d!, times (2 pi i)^{-n}. Indices in 1..g.
BracketPolynomial bracket(const std::vector<int>& indices, int g, int max_n = kDefaultBracketCap);

/// Reference form of bracket(): enumerates perfect matchings of the index
/// positions, drops those pairing equal indices, keeps each distinct monomial
/// once and divides by prod d_ab!. Exponential in n; for cross-checks only.
BracketPolynomial bracket_by_matchings(const std::vector<int>& indices, int g);

/// X_l + Y_l = [1..l] + sum_alpha phi_alpha [alpha, alpha, 1..l], l even,
/// 2 <= l <= g. theta_m / prod f = X_l + Y_l + O(eps^{l/2 + 2}) for the
/// normal form m of class l.
BracketPolynomial theta_leading(int l, int g);

/// Leading terms of d_{z_a} theta_m / prod f for odd l, 3 <= l <= g:
///   a <= l:  [1..^a..l] + sum_alpha phi_alpha [alpha, alpha, 1..^a..l]   (+ O(eps^{s+2}))
///   a > l:   phi_a [a, 1..l] + psi_a [a, a, a, 1..l]
///            + phi_a sum_alpha phi_alpha [alpha, alpha, a, 1..l]           (+ O(eps^{s+3}))
/// with s = (l - 1) / 2.
BracketPolynomial grad_leading(int l, int g, int a);

/// Remainder order of grad_leading: s + 2 for a <= l, s + 3 for a > l.
int grad_remainder_order(int l, int a);

/// Entry (a, b) of T / prod f for the class-2 normal form, where
/// T_ab = 2 pi i d theta / d tau_ab (the z-Hessian with its diagonal halved).
/// Exact modulo eps^3:
///   (J, J)   1/2 phi_J (X_2 + Y_2)                         J in {1, 2}
///   (1, 2)   1 + sum_{alpha < beta} phi_alpha phi_beta [alpha, alpha, beta, beta]
///   (J, j)   phi_j ([J', j] + sum_alpha phi_alpha [alpha, alpha, J', j])   {J, J'} = {1, 2}
///   (j, j)   1/2 (phi_j (X_2 + Y_2) + psi_j [j, j, 1, 2])
///   (j, k)   phi_j phi_k [j, k, 1, 2]
BracketPolynomial hessian_entry(int a, int b, int g);
inline constexpr int kHessianRemainderOrder = 3;

/// Matrix of hessian_entry over rows x cols.
std::vector<std::vector<BracketPolynomial>> hessian_minor(const std::vector<int>& rows,
                                                          const std::vector<int>& cols, int g);

/// Every term of d^beta theta_m / prod f up to tau-degree max_degree, for the
/// class-l normal form, straight from the degree-matrix sum. beta is indexed
/// by coordinate (beta[0] is the z_1 order). Used to cross-check the
/// hand-written formulas above.
BracketPolynomial generic_expansion(int l, int g, const std::vector<int>& beta, int max_degree);

/// Numeric values of f, phi, psi at the diagonal t for the class-l normal form:
/// f_a = theta'_a for a <= l, theta_a otherwise; phi = f''/f; psi = f''''/f - phi^2.
/// Vectors are 0-based. Throws ExpansionError when some f_a vanishes.
struct SymbolValues {
  std::vector<cplx> f;
  std::vector<cplx> phi;
  std::vector<cplx> psi;
  cplx f_product() const;
};
SymbolValues bind_symbols(const std::vector<cplx>& t, int l, const ThetaOptions& opts = {});

/// Substitutes tau_ab = offdiag(a-1, b-1) and the bound symbols.
cplx evaluate(const BracketPolynomial& p, const CMatrix& offdiag, const SymbolValues& sym);
cplx evaluate(const BracketPolynomial& p, const std::vector<cplx>& t, const CMatrix& offdiag,
              int l, const ThetaOptions& opts = {});

// ---------------------------------------------------------------------------
// Order-of-vanishing fits

enum class SlopeMode {
  Equal,    // |slope - target| <= tolerance
  AtLeast,  // slope >= target - tolerance
};

struct SlopeReport {
  std::string label;
  std::vector<double> epsilon_ladder;
  std::vector<double> values;  // magnitudes
  double fitted_slope = 0.0;
  double target_order = 0.0;
  double tolerance = 0.0;
  SlopeMode mode = SlopeMode::Equal;
  bool identically_zero = false;  // every value below the zero threshold
  bool pass = false;
  // Optional leading-coefficient comparison; unused when tolerance is 0.
  double coefficient_ratio = 0.0;
  double coefficient_tolerance = 0.0;
  // Optional slope of the residual after subtracting the leading formula;
  // unused when residual_target is 0.
  double residual_slope = 0.0;
  double residual_target = 0.0;

  nlohmann::json to_json() const;
};

inline constexpr double kDefaultSlopeTolerance = 0.15;
inline constexpr double kZeroRayThreshold = 1e-13;

/// eps = 2^-first, ..., 2^-last.
std::vector<double> power_ladder(int first = 3, int last = 9);

/// Least-squares slope of log|v| against log eps.
double fit_slope(const std::vector<double>& ladder, const std::vector<double>& values);

/// Evaluates |f(eps)| on the ladder and fits the slope. A ray whose values all
/// fall below zero_threshold is flagged identically_zero and does not pass.
SlopeReport vanishing_order(const std::function<cplx(double)>& f, const std::vector<double>& ladder,
                            double target_order, SlopeMode mode,
                            double tolerance = kDefaultSlopeTolerance,
                            double zero_threshold = kZeroRayThreshold);

/// Ray form: target evaluated at base + eps * direction.
SlopeReport vanishing_order(const std::function<cplx(const PeriodMatrix&)>& target,
                            const PeriodMatrix& base, const CMatrix& direction,
                            const std::vector<double>& ladder, double target_order,
                            SlopeMode mode, double tolerance = kDefaultSlopeTolerance,
                            double zero_threshold = kZeroRayThreshold);

}  // namespace thetalab
