#include "thetalab/expand.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace thetalab {

namespace {

constexpr double kPi = std::numbers::pi;

std::int64_t factorial(int n) {
  std::int64_t f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// Calls emit(d) for every symmetric zero-diagonal nonnegative matrix d (given
// as its upper-triangle vector in pair_index order) with row sums `rows`.
template <typename Emit>
void for_each_degree_matrix(std::vector<int> rows, Emit&& emit) {
  const int g = static_cast<int>(rows.size());
  std::vector<int> d(static_cast<std::size_t>(g * (g - 1) / 2), 0);
  std::function<void(int, int)> rec = [&](int a, int b) {
    if (a >= g - 1) {
      if (g == 0 || rows[g - 1] == 0) emit(d);
      return;
    }
    if (b == g) {
      if (rows[a] == 0) rec(a + 1, a + 2);
      return;
    }
    const int p = pair_index(a + 1, b + 1, g);
    const int hi = std::min(rows[a], rows[b]);
    // The last partner of row a must absorb the remainder.
    const int lo = (b == g - 1) ? rows[a] : 0;
    for (int v = lo; v <= hi; ++v) {
      d[p] = v;
      rows[a] -= v;
      rows[b] -= v;
      rec(a, b + 1);
      rows[a] += v;
      rows[b] += v;
    }
    d[p] = 0;
  };
  if (g == 1) {
    if (rows[0] == 0) emit(d);
    return;
  }
  rec(0, 1);
}

void check_index(int a, int g) {
  if (a < 1 || a > g) throw ExpansionError("index " + std::to_string(a) + " outside 1.." + std::to_string(g));
}

std::vector<int> range_without(int l, int skip) {
  std::vector<int> out;
  for (int a = 1; a <= l; ++a) {
    if (a != skip) out.push_back(a);
  }
  return out;
}

std::vector<int> concat(std::vector<int> a, const std::vector<int>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

// Brackets inside the expansion formulas may exceed the public cap.
constexpr int kInternalCap = 16;

BracketPolynomial br(const std::vector<int>& idx, int g) { return bracket(idx, g, kInternalCap); }

// sum_alpha phi_alpha [alpha, alpha, rest...]
BracketPolynomial phi_sum(const std::vector<int>& rest, int g) {
  BracketPolynomial out(g);
  for (int alpha = 1; alpha <= g; ++alpha) {
    out += BracketPolynomial::phi(g, alpha) * br(concat({alpha, alpha}, rest), g);
  }
  return out;
}

template <typename T>
T int_power(T base, int e) {
  T out(1);
  for (int k = 0; k < e; ++k) out *= base;
  return out;
}

}  // namespace

int pair_index(int a, int b, int g) {
  if (a > b) std::swap(a, b);
  if (a < 1 || b > g || a == b) throw ExpansionError("pair index needs 1 <= a < b <= g");
  // Pairs before row a: sum_{r<a} (g - r).
  return (a - 1) * g - (a - 1) * a / 2 + (b - a - 1);
}

int Monomial::tau_degree() const {
  int d = 0;
  for (int v : tau) d += v;
  return d;
}

BracketPolynomial::BracketPolynomial(int g) : g_(g) {
  if (g < 1) throw ExpansionError("genus must be positive");
}

Monomial BracketPolynomial::unit() const {
  Monomial m;
  m.tau.assign(static_cast<std::size_t>(g_ * (g_ - 1) / 2), 0);
  m.phi.assign(static_cast<std::size_t>(g_), 0);
  m.psi.assign(static_cast<std::size_t>(g_), 0);
  return m;
}

BracketPolynomial BracketPolynomial::constant(int g, Rational c) {
  BracketPolynomial p(g);
  p.add_term(p.unit(), c);
  return p;
}

BracketPolynomial BracketPolynomial::phi(int g, int alpha) {
  check_index(alpha, g);
  BracketPolynomial p(g);
  Monomial m = p.unit();
  m.phi[static_cast<std::size_t>(alpha - 1)] = 1;
  p.add_term(m, 1);
  return p;
}

BracketPolynomial BracketPolynomial::psi(int g, int alpha) {
  check_index(alpha, g);
  BracketPolynomial p(g);
  Monomial m = p.unit();
  m.psi[static_cast<std::size_t>(alpha - 1)] = 1;
  p.add_term(m, 1);
  return p;
}

int BracketPolynomial::min_degree() const {
  int best = -1;
  for (const auto& [m, c] : terms_) {
    const int d = m.tau_degree();
    if (best < 0 || d < best) best = d;
  }
  return best;
}

int BracketPolynomial::max_degree() const {
  int best = -1;
  for (const auto& [m, c] : terms_) best = std::max(best, m.tau_degree());
  return best;
}

BracketPolynomial BracketPolynomial::truncated(int max_deg) const {
  BracketPolynomial out(g_);
  for (const auto& [m, c] : terms_) {
    if (m.tau_degree() <= max_deg) out.terms_.emplace(m, c);
  }
  return out;
}

int BracketPolynomial::twopii_power() const {
  int n = 0;
  for (const auto& [m, c] : terms_) n = std::max(n, m.inv_twopii);
  return n;
}

Rational BracketPolynomial::coefficient(const Monomial& mono) const {
  const auto it = terms_.find(mono);
  return it == terms_.end() ? Rational(0) : it->second;
}

void BracketPolynomial::add_term(const Monomial& mono, Rational c) {
  if (c.numerator() == 0) return;
  auto [it, inserted] = terms_.emplace(mono, c);
  if (!inserted) {
    it->second += c;
    if (it->second.numerator() == 0) terms_.erase(it);
  }
}

BracketPolynomial& BracketPolynomial::operator+=(const BracketPolynomial& rhs) {
  if (rhs.g_ != g_) throw ExpansionError("genus mismatch");
  for (const auto& [m, c] : rhs.terms_) add_term(m, c);
  return *this;
}

BracketPolynomial& BracketPolynomial::operator-=(const BracketPolynomial& rhs) {
  if (rhs.g_ != g_) throw ExpansionError("genus mismatch");
  for (const auto& [m, c] : rhs.terms_) add_term(m, -c);
  return *this;
}

BracketPolynomial& BracketPolynomial::operator*=(Rational c) {
  if (c.numerator() == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

BracketPolynomial operator*(const BracketPolynomial& a, const BracketPolynomial& b) {
  if (a.g_ != b.g_) throw ExpansionError("genus mismatch");
  BracketPolynomial out(a.g_);
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      Monomial m = ma;
      m.inv_twopii += mb.inv_twopii;
      for (std::size_t i = 0; i < m.tau.size(); ++i) m.tau[i] += mb.tau[i];
      for (std::size_t i = 0; i < m.phi.size(); ++i) m.phi[i] += mb.phi[i];
      for (std::size_t i = 0; i < m.psi.size(); ++i) m.psi[i] += mb.psi[i];
      out.add_term(m, ca * cb);
    }
  }
  return out;
}

std::string BracketPolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    const bool negative = c.numerator() < 0;
    const Rational mag = negative ? -c : c;
    if (first) {
      if (negative) os << "-";
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;
    std::vector<std::string> factors;
    if (m.inv_twopii == 1) factors.emplace_back("1/(2pii)");
    if (m.inv_twopii > 1) factors.push_back("1/(2pii)^" + std::to_string(m.inv_twopii));
    if (mag != Rational(1)) {
      std::ostringstream r;
      r << mag.numerator();
      if (mag.denominator() != 1) r << "/" << mag.denominator();
      factors.push_back(r.str());
    }
    auto symbols = [&](const std::vector<int>& deg, const char* name) {
      for (std::size_t a = 0; a < deg.size(); ++a) {
        if (deg[a] == 0) continue;
        std::string s = name + std::to_string(a + 1);
        if (deg[a] > 1) s += "^" + std::to_string(deg[a]);
        factors.push_back(s);
      }
    };
    symbols(m.phi, "phi");
    symbols(m.psi, "psi");
    std::string taus;
    for (int a = 1; a <= g_; ++a) {
      for (int b = a + 1; b <= g_; ++b) {
        const int d = m.tau[static_cast<std::size_t>(pair_index(a, b, g_))];
        if (d == 0) continue;
        if (!taus.empty()) taus += "*";
        taus += "t" + std::to_string(a) + std::to_string(b);
        if (d > 1) taus += "^" + std::to_string(d);
      }
    }
    if (!taus.empty()) factors.push_back(taus);
    if (factors.empty()) factors.emplace_back("1");
    for (std::size_t i = 0; i < factors.size(); ++i) os << (i ? " * " : "") << factors[i];
  }
  return os.str();
}

nlohmann::json BracketPolynomial::to_json() const {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [m, c] : terms_) {
    nlohmann::json t;
    t["coeff"] = std::to_string(c.numerator()) + "/" + std::to_string(c.denominator());
    t["inv_twopii"] = m.inv_twopii;
    nlohmann::json tau = nlohmann::json::object();
    for (int a = 1; a <= g_; ++a) {
      for (int b = a + 1; b <= g_; ++b) {
        const int d = m.tau[static_cast<std::size_t>(pair_index(a, b, g_))];
        if (d) tau[std::to_string(a) + "," + std::to_string(b)] = d;
      }
    }
    t["tau"] = tau;
    for (const char* name : {"phi", "psi"}) {
      const auto& deg = std::string(name) == "phi" ? m.phi : m.psi;
      nlohmann::json s = nlohmann::json::object();
      for (std::size_t a = 0; a < deg.size(); ++a) {
        if (deg[a]) s[std::to_string(a + 1)] = deg[a];
      }
      t[name] = s;
    }
    terms.push_back(t);
  }
  return {{"g", g_}, {"terms", terms}};
}

BracketPolynomial bracket(const std::vector<int>& indices, int g, int max_n) {
  if (indices.size() % 2 != 0) throw ExpansionError("bracket needs an even number of indices");
  const int n = static_cast<int>(indices.size() / 2);
  if (n > max_n) {
    throw ExpansionError("bracket of " + std::to_string(n) + " pairs exceeds cap " + std::to_string(max_n));
  }
  std::vector<int> rows(static_cast<std::size_t>(g), 0);
  for (int a : indices) {
    check_index(a, g);
    ++rows[static_cast<std::size_t>(a - 1)];
  }
  BracketPolynomial out(g);
  Monomial base = BracketPolynomial::constant(g, 1).terms().begin()->first;
  base.inv_twopii = n;
  for_each_degree_matrix(rows, [&](const std::vector<int>& d) {
    Monomial m = base;
    m.tau = d;
    std::int64_t denom = 1;
    for (int v : d) denom *= factorial(v);
    out.add_term(m, Rational(1, denom));
  });
  return out;
}

BracketPolynomial bracket_by_matchings(const std::vector<int>& indices, int g) {
  if (indices.size() % 2 != 0) throw ExpansionError("bracket needs an even number of indices");
  for (int a : indices) check_index(a, g);
  const int n = static_cast<int>(indices.size() / 2);
  std::set<std::vector<int>> seen;
  std::vector<int> d(static_cast<std::size_t>(g * (g - 1) / 2), 0);
  std::vector<bool> used(indices.size(), false);
  std::function<void()> rec = [&] {
    const auto first = std::find(used.begin(), used.end(), false);
    if (first == used.end()) {
      seen.insert(d);
      return;
    }
    const auto i = static_cast<std::size_t>(first - used.begin());
    used[i] = true;
    for (std::size_t j = i + 1; j < indices.size(); ++j) {
      if (used[j] || indices[i] == indices[j]) continue;
      const int p = pair_index(std::min(indices[i], indices[j]), std::max(indices[i], indices[j]), g);
      used[j] = true;
      ++d[static_cast<std::size_t>(p)];
      rec();
      --d[static_cast<std::size_t>(p)];
      used[j] = false;
    }
    used[i] = false;
  };
  rec();
  BracketPolynomial out(g);
  Monomial base = BracketPolynomial::constant(g, 1).terms().begin()->first;
  base.inv_twopii = n;
  for (const auto& deg : seen) {
    Monomial m = base;
    m.tau = deg;
    std::int64_t denom = 1;
    for (int v : deg) denom *= factorial(v);
    out.add_term(m, Rational(1, denom));
  }
  return out;
}

BracketPolynomial theta_leading(int l, int g) {
  if (l < 2 || l > g || l % 2 != 0) throw ExpansionError("theta_leading needs even l with 2 <= l <= g");
  const auto ones = range_without(l, 0);
  return br(ones, g) + phi_sum(ones, g);
}

BracketPolynomial grad_leading(int l, int g, int a) {
  if (l < 3 || l > g || l % 2 == 0) throw ExpansionError("grad_leading needs odd l with 3 <= l <= g");
  check_index(a, g);
  if (a <= l) {
    const auto rest = range_without(l, a);
    return br(rest, g) + phi_sum(rest, g);
  }
  const auto ones = range_without(l, 0);
  const auto ph = BracketPolynomial::phi(g, a);
  return ph * br(concat({a}, ones), g) + BracketPolynomial::psi(g, a) * br(concat({a, a, a}, ones), g) +
         ph * phi_sum(concat({a}, ones), g);
}

int grad_remainder_order(int l, int a) {
  const int s = (l - 1) / 2;
  return a <= l ? s + 2 : s + 3;
}

BracketPolynomial hessian_entry(int a, int b, int g) {
  if (g < 2) throw ExpansionError("hessian_entry needs g >= 2");
  check_index(a, g);
  check_index(b, g);
  if (a > b) std::swap(a, b);
  const Rational half(1, 2);
  const auto x_plus_y = theta_leading(2, g);
  if (b <= 2) {
    if (a == b) return half * (BracketPolynomial::phi(g, a) * x_plus_y);
    BracketPolynomial out = BracketPolynomial::constant(g, 1);
    for (int al = 1; al <= g; ++al) {
      for (int be = al + 1; be <= g; ++be) {
        out += BracketPolynomial::phi(g, al) * BracketPolynomial::phi(g, be) * br({al, al, be, be}, g);
      }
    }
    return out;
  }
  if (a <= 2) {
    const int other = a == 1 ? 2 : 1;
    return BracketPolynomial::phi(g, b) * (br({other, b}, g) + phi_sum({other, b}, g));
  }
  if (a == b) {
    return half * (BracketPolynomial::phi(g, a) * x_plus_y +
                   BracketPolynomial::psi(g, a) * br({a, a, 1, 2}, g));
  }
  return BracketPolynomial::phi(g, a) * BracketPolynomial::phi(g, b) * br({a, b, 1, 2}, g);
}

std::vector<std::vector<BracketPolynomial>> hessian_minor(const std::vector<int>& rows,
                                                          const std::vector<int>& cols, int g) {
  std::vector<std::vector<BracketPolynomial>> out;
  for (int r : rows) {
    std::vector<BracketPolynomial> row;
    for (int c : cols) row.push_back(hessian_entry(r, c, g));
    out.push_back(std::move(row));
  }
  return out;
}

BracketPolynomial generic_expansion(int l, int g, const std::vector<int>& beta, int max_degree) {
  if (l < 0 || l > g) throw ExpansionError("class l must lie in 0..g");
  if (static_cast<int>(beta.size()) != g) throw ExpansionError("beta must have g entries");
  // theta_a^{(k)} / f_a in terms of phi_a, psi_a.
  auto ratio = [&](int a, int k) {
    const int r = (k - (a < l ? 1 : 0)) / 2;
    switch (r) {
      case 0:
        return BracketPolynomial::constant(g, 1);
      case 1:
        return BracketPolynomial::phi(g, a + 1);
      case 2:
        return BracketPolynomial::psi(g, a + 1) +
               BracketPolynomial::phi(g, a + 1) * BracketPolynomial::phi(g, a + 1);
      default:
        throw ExpansionError("derivative offset " + std::to_string(2 * r) + " not expressible in phi, psi");
    }
  };
  std::vector<int> base(static_cast<std::size_t>(g));
  for (int a = 0; a < g; ++a) {
    // theta_a^{(k)}(t_a) is nonzero only for k odd (a < l) or even (a >= l).
    const int want_odd = a < l ? 1 : 0;
    base[static_cast<std::size_t>(a)] = ((beta[static_cast<std::size_t>(a)] + want_odd) % 2 + 2) % 2;
  }
  BracketPolynomial out(g);
  std::vector<int> rows = base;
  std::function<void(int, int)> rec = [&](int a, int used) {
    if (a == g) {
      if (used % 2 != 0) return;
      BracketPolynomial sym = BracketPolynomial::constant(g, 1);
      for (int b = 0; b < g; ++b) {
        sym = sym * ratio(b, beta[static_cast<std::size_t>(b)] + rows[static_cast<std::size_t>(b)]);
      }
      BracketPolynomial taus(g);
      Monomial unit = BracketPolynomial::constant(g, 1).terms().begin()->first;
      for_each_degree_matrix(rows, [&](const std::vector<int>& d) {
        Monomial m = unit;
        m.tau = d;
        m.inv_twopii = used / 2;
        std::int64_t denom = 1;
        for (int v : d) denom *= factorial(v);
        taus.add_term(m, Rational(1, denom));
      });
      if (!taus.is_zero()) out += sym * taus;
      return;
    }
    for (int n = base[static_cast<std::size_t>(a)]; used + n <= 2 * max_degree; n += 2) {
      rows[static_cast<std::size_t>(a)] = n;
      rec(a + 1, used + n);
    }
    rows[static_cast<std::size_t>(a)] = base[static_cast<std::size_t>(a)];
  };
  rec(0, 0);
  return out;
}

cplx SymbolValues::f_product() const {
  cplx p(1);
  for (const auto& v : f) p *= v;
  return p;
}

SymbolValues bind_symbols(const std::vector<cplx>& t, int l, const ThetaOptions& opts) {
  const int g = static_cast<int>(t.size());
  if (l < 0 || l > g) throw ExpansionError("class l must lie in 0..g");
  SymbolValues s;
  const auto odd = Characteristic(1, 1, 1);
  const auto even = Characteristic::zero(1);
  for (int a = 0; a < g; ++a) {
    const bool is_odd = a < l;
    const auto d = genus1_derivatives(is_odd ? odd : even, t[static_cast<std::size_t>(a)], is_odd ? 5 : 4, opts);
    const int o = is_odd ? 1 : 0;
    const cplx f = d[static_cast<std::size_t>(o)];
    if (std::abs(f) < 1e-12) throw ExpansionError("f vanishes at coordinate " + std::to_string(a + 1));
    const cplx phi = d[static_cast<std::size_t>(o + 2)] / f;
    s.f.push_back(f);
    s.phi.push_back(phi);
    s.psi.push_back(d[static_cast<std::size_t>(o + 4)] / f - phi * phi);
  }
  return s;
}

cplx evaluate(const BracketPolynomial& p, const CMatrix& offdiag, const SymbolValues& sym) {
  const int g = p.genus();
  if (offdiag.rows() != g || offdiag.cols() != g || static_cast<int>(sym.phi.size()) != g) {
    throw ExpansionError("evaluate: size mismatch");
  }
  const cplx inv_twopii = 1.0 / cplx(0, 2 * kPi);
  cplx total(0);
  for (const auto& [m, c] : p.terms()) {
    cplx term = static_cast<double>(c.numerator()) / static_cast<double>(c.denominator());
    term *= int_power(inv_twopii, m.inv_twopii);
    for (int a = 0; a < g; ++a) {
      term *= int_power(sym.phi[static_cast<std::size_t>(a)], m.phi[static_cast<std::size_t>(a)]);
      term *= int_power(sym.psi[static_cast<std::size_t>(a)], m.psi[static_cast<std::size_t>(a)]);
    }
    for (int a = 1; a <= g; ++a) {
      for (int b = a + 1; b <= g; ++b) {
        term *= int_power(offdiag(a - 1, b - 1), m.tau[static_cast<std::size_t>(pair_index(a, b, g))]);
      }
    }
    total += term;
  }
  return total;
}

cplx evaluate(const BracketPolynomial& p, const std::vector<cplx>& t, const CMatrix& offdiag, int l,
              const ThetaOptions& opts) {
  return evaluate(p, offdiag, bind_symbols(t, l, opts));
}

nlohmann::json SlopeReport::to_json() const {
  nlohmann::json j;
  j["label"] = label;
  j["epsilon_ladder"] = epsilon_ladder;
  j["values"] = values;
  j["fitted_slope"] = fitted_slope;
  j["target_order"] = target_order;
  j["tolerance"] = tolerance;
  j["mode"] = mode == SlopeMode::Equal ? "equal" : "at_least";
  j["identically_zero"] = identically_zero;
  if (coefficient_tolerance > 0) {
    j["coefficient_ratio"] = coefficient_ratio;
    j["coefficient_tolerance"] = coefficient_tolerance;
  }
  if (residual_target > 0) {
    j["residual_slope"] = residual_slope;
    j["residual_target"] = residual_target;
  }
  j["pass"] = pass;
  return j;
}

std::vector<double> power_ladder(int first, int last) {
  if (first > last) throw ExpansionError("ladder needs first <= last");
  std::vector<double> out;
  for (int k = first; k <= last; ++k) out.push_back(std::ldexp(1.0, -k));
  return out;
}

double fit_slope(const std::vector<double>& ladder, const std::vector<double>& values) {
  if (ladder.size() != values.size() || ladder.size() < 2) {
    throw ExpansionError("slope fit needs at least two matching points");
  }
  const double n = static_cast<double>(ladder.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    const double x = std::log(ladder[i]);
    const double y = std::log(std::max(values[i], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

SlopeReport vanishing_order(const std::function<cplx(double)>& f, const std::vector<double>& ladder,
                            double target_order, SlopeMode mode, double tolerance,
                            double zero_threshold) {
  for (std::size_t i = 1; i < ladder.size(); ++i) {
    if (!(ladder[i] < ladder[i - 1])) throw ExpansionError("ladder must be strictly decreasing");
  }
  SlopeReport r;
  r.epsilon_ladder = ladder;
  r.target_order = target_order;
  r.tolerance = tolerance;
  r.mode = mode;
  bool all_zero = true;
  for (double eps : ladder) {
    const double v = std::abs(f(eps));
    r.values.push_back(v);
    if (v >= zero_threshold) all_zero = false;
  }
  if (all_zero) {
    r.identically_zero = true;
    r.pass = false;
    return r;
  }
  r.fitted_slope = fit_slope(ladder, r.values);
  r.pass = mode == SlopeMode::Equal ? std::abs(r.fitted_slope - target_order) <= tolerance
                                    : r.fitted_slope >= target_order - tolerance;
  return r;
}

SlopeReport vanishing_order(const std::function<cplx(const PeriodMatrix&)>& target,
                            const PeriodMatrix& base, const CMatrix& direction,
                            const std::vector<double>& ladder, double target_order,
                            SlopeMode mode, double tolerance, double zero_threshold) {
  return vanishing_order([&](double eps) { return target(base.shifted(direction, eps)); }, ladder,
                         target_order, mode, tolerance, zero_threshold);
}

}  // namespace thetalab
