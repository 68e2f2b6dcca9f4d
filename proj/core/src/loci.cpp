#include "thetalab/loci.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <iomanip>
#include <numbers>
#include <set>
#include <sstream>

#include "thetalab/symp.hpp"

namespace thetalab {

namespace {

const cplx kTwoPiI(0, 2 * std::numbers::pi);

ThetaOptions precise() {
  ThetaOptions o;
  o.tol = 1e-15;
  o.precision = Precision::Extended;
  return o;
}

double max_even_constant(const PeriodMatrix& tau) {
  const auto evens = enumerate(tau.genus(), {Parity::Even, std::nullopt}, 8);
  double scale = 0.0;
  for (const auto& v : theta_constants(evens, tau)) scale = std::max(scale, std::abs(v));
  return scale;
}

std::vector<cplx> diagonal_of(const PeriodMatrix& tau) {
  std::vector<cplx> t;
  for (int a = 0; a < tau.genus(); ++a) t.push_back(tau(a, a));
  return t;
}

// Applies the ladder, the leading-coefficient ratio at the smallest eps and
// the optional residual slope to a report built by vanishing_order().
void finish_report(SlopeReport& r, cplx ratio_at_smallest, const std::vector<double>& residuals,
                   double residual_target) {
  if (r.identically_zero) return;
  r.coefficient_tolerance = 0.05;
  r.coefficient_ratio = std::abs(ratio_at_smallest);
  bool ok = r.pass && std::abs(ratio_at_smallest - 1.0) <= r.coefficient_tolerance;
  if (residual_target > 0) {
    r.residual_target = residual_target;
    r.residual_slope = fit_slope(r.epsilon_ladder, residuals);
    ok = ok && r.residual_slope >= residual_target - r.tolerance;
  }
  r.pass = ok;
}

}  // namespace

nlohmann::json LocusVerdict::to_json() const {
  return {{"locus", locus}, {"digest", digest}, {"tol", tol}, {"verdict", verdict}, {"witness", witness}};
}

std::string digest(const PeriodMatrix& tau) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&](double v) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &v, sizeof v);
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 1099511628211ULL;
    }
  };
  for (int a = 0; a < tau.genus(); ++a) {
    for (int b = 0; b < tau.genus(); ++b) {
      mix(tau(a, b).real());
      mix(tau(a, b).imag());
    }
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

LocusVerdict is_diagonal_orbit(const PeriodMatrix& tau, double tol) {
  const int g = tau.genus();
  if (g > 5) throw ThetaError("is_diagonal_orbit supports g <= 5");
  const auto evens = enumerate(g, {Parity::Even, std::nullopt}, 8);
  const auto values = theta_constants(evens, tau);
  double scale = 0.0;
  for (const auto& v : values) scale = std::max(scale, std::abs(v));
  LocusVerdict out{"diagonal_orbit", digest(tau), nlohmann::json::array(), tol, true};
  for (std::size_t i = 0; i < evens.size(); ++i) {
    if (evens[i].scalar_class() == 0) continue;
    const double rel = std::abs(values[i]) / scale;
    const bool vanishes = rel < tol;
    out.verdict = out.verdict && vanishes;
    out.witness.push_back({{"m", evens[i].compact()}, {"relative", rel}, {"vanishes", vanishes}});
  }
  return out;
}

LocusVerdict is_product_orbit(const PeriodMatrix& tau, int g1, double tol) {
  const int g = tau.genus();
  if (g > 5 || g1 <= 0 || g1 >= g) throw ThetaError("is_product_orbit needs 0 < g1 < g <= 5");
  std::vector<Characteristic> ms;
  for (const auto& m1 : enumerate(g1, {Parity::Odd, std::nullopt}, 8)) {
    for (const auto& m2 : enumerate(g - g1, {Parity::Odd, std::nullopt}, 8)) ms.push_back(m1.direct_sum(m2));
  }
  const auto values = theta_constants(ms, tau);
  const double scale = max_even_constant(tau);
  LocusVerdict out{"product_orbit_g1=" + std::to_string(g1), digest(tau), nlohmann::json::array(), tol, true};
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const double rel = std::abs(values[i]) / scale;
    const bool vanishes = rel < tol;
    out.verdict = out.verdict && vanishes;
    out.witness.push_back({{"m", ms[i].compact()}, {"relative", rel}, {"vanishes", vanishes}});
  }
  return out;
}

NullRank thetanull_rank_class(const PeriodMatrix& tau, const Characteristic& m, double tol,
                              double rank_tol) {
  if (!m.is_even()) throw ThetaError("thetanull_rank_class needs an even characteristic");
  if (tau.genus() > 5) throw ThetaError("thetanull_rank_class supports g <= 5");
  NullRank r;
  r.relative_value = std::abs(theta_constant(m, tau)) / max_even_constant(tau);
  r.is_null = r.relative_value < tol;
  r.rank = numerical_rank(hessian(m, tau), rank_tol);
  return r;
}

LocusVerdict hyperelliptic_vanishing_test(const PeriodMatrix& tau, double tol) {
  const int g = tau.genus();
  if (g > 5) throw ThetaError("hyperelliptic_vanishing_test supports g <= 5");
  const auto required = hyperelliptic_vanishing_set(g);
  const auto fs = special_fundamental_system(g);
  const auto basis = fs.basis();
  const auto b = b_char(fs);
  // Even m + b^g with m a sum of exactly g basis members.
  std::set<Characteristic> exact;
  const std::uint64_t n = basis.size();
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
    if (std::popcount(s) != g) continue;
    Characteristic m = b;
    for (std::uint64_t i = 0; i < n; ++i) {
      if ((s >> i) & 1U) m += basis[i];
    }
    if (m.is_even()) exact.insert(m);
  }
  std::vector<Characteristic> all(required.begin(), required.end());
  all.insert(all.end(), exact.begin(), exact.end());
  const auto values = theta_constants(all, tau);
  const double scale = max_even_constant(tau);
  LocusVerdict out{"hyperelliptic_vanishing", digest(tau), nlohmann::json::object(), tol, true};
  out.witness["required"] = nlohmann::json::array();
  out.witness["exactly_g"] = nlohmann::json::array();
  for (std::size_t i = 0; i < all.size(); ++i) {
    const double rel = std::abs(values[i]) / scale;
    const bool vanishes = rel < tol;
    if (i < required.size()) {
      out.verdict = out.verdict && vanishes;
      out.witness["required"].push_back({{"m", all[i].compact()}, {"relative", rel}, {"vanishes", vanishes}});
    } else {
      out.witness["exactly_g"].push_back({{"m", all[i].compact()}, {"relative", rel}, {"nonzero", !vanishes}});
    }
  }
  return out;
}

LocusVerdict tridiagonal_tangent_check(const std::vector<cplx>& t, double tol, const std::vector<int>& pi_in) {
  const int g = static_cast<int>(t.size());
  if (g < 3 || g > 5) throw ThetaError("tridiagonal_tangent_check supports 3 <= g <= 5");
  std::vector<int> pi = pi_in;
  if (pi.empty()) {
    for (int i = 0; i < g; ++i) pi.push_back(i);
  }
  const auto perm = permutation_element(pi);
  const auto fs = special_fundamental_system(g);
  const auto tau = PeriodMatrix::diagonal(t);
  const int dim = g * (g + 1) / 2;
  std::vector<std::vector<cplx>> forms;
  LocusVerdict out{"tridiagonal_tangent", digest(tau), nlohmann::json::object(), tol, true};
  out.witness["triples"] = nlohmann::json::array();
  std::set<std::pair<int, int>> equations;
  for (int j1 = 0; j1 < g; ++j1) {
    for (int j2 = j1 + 1; j2 < g; ++j2) {
      for (int j3 = j2 + 1; j3 < g; ++j3) {
        const auto m = act(perm, triple_characteristic(fs, j1, j2, j3));
        const CMatrix grad = tau_gradient(m, tau, precise());
        const double scale = grad.cwiseAbs().maxCoeff();
        const auto expected = std::minmax(pi[static_cast<std::size_t>(j1)], pi[static_cast<std::size_t>(j3)]);
        nlohmann::json support = nlohmann::json::array();
        bool only_expected = scale > 0;
        std::vector<cplx> row;
        for (int a = 0; a < g; ++a) {
          for (int b = a; b < g; ++b) {
            row.push_back(grad(a, b) / scale);
            if (std::abs(grad(a, b)) > tol * scale) {
              support.push_back({a + 1, b + 1});
              if (std::make_pair(a, b) != std::make_pair(expected.first, expected.second)) only_expected = false;
            }
          }
        }
        forms.push_back(row);
        equations.insert(expected);
        out.verdict = out.verdict && only_expected;
        out.witness["triples"].push_back({{"triple", {j1 + 1, j2 + 1, j3 + 1}},
                                          {"m", m.compact()},
                                          {"support", support},
                                          {"expected", {expected.first + 1, expected.second + 1}},
                                          {"ok", only_expected}});
      }
    }
  }
  CMatrix stacked(static_cast<Eigen::Index>(forms.size()), dim);
  for (std::size_t r = 0; r < forms.size(); ++r) {
    for (int c = 0; c < dim; ++c) stacked(static_cast<Eigen::Index>(r), c) = forms[r][static_cast<std::size_t>(c)];
  }
  const int kernel = dim - numerical_rank(stacked, tol);
  // The kernel must be cut out by tau_{pi(i) pi(j)} = 0 for |i - j| > 1.
  std::set<std::pair<int, int>> wanted;
  for (int i = 0; i < g; ++i) {
    for (int j = i + 2; j < g; ++j) {
      wanted.insert(std::minmax(pi[static_cast<std::size_t>(i)], pi[static_cast<std::size_t>(j)]));
    }
  }
  const bool tridiagonal = equations == wanted;
  out.witness["kernel_dimension"] = kernel;
  out.witness["expected_kernel_dimension"] = 2 * g - 1;
  out.witness["kernel_is_permuted_tridiagonal"] = tridiagonal;
  out.verdict = out.verdict && kernel == 2 * g - 1 && tridiagonal;
  return out;
}

CMatrix slice_y_direction(int g, Rng& rng) {
  if (g < 4) throw ThetaError("slice Y needs g >= 4");
  CMatrix b = CMatrix::Zero(g, g);
  auto set = [&](int a, int c, cplx v) {
    b(a, c) = v;
    b(c, a) = v;
  };
  set(0, 1, rng.unit_box());
  set(0, 2, rng.unit_box());
  set(1, 2, rng.unit_box());
  for (int j = 3; j < g; ++j) {
    const cplx v = rng.unit_box();
    for (int a = 0; a < 3; ++a) set(a, j, v);
  }
  return b / b.cwiseAbs().maxCoeff();
}

SlopeReport gradient_slice_residual(const std::vector<cplx>& t, const CMatrix& dir,
                                    const std::vector<double>& ladder) {
  const int g = static_cast<int>(t.size());
  const auto opts = precise();
  const auto sym = bind_symbols(t, 3, opts);
  const auto base = PeriodMatrix::diagonal(t);
  const auto m0 = normal_form(g, 3);
  MultiIndex d1(static_cast<std::size_t>(g), 0);
  d1[0] = 1;
  auto r = vanishing_order(
      [&](double eps) {
        const auto tau = base.shifted(dir, eps);
        const cplx grad = eval_many(m0, tau, CVector::Zero(g), {d1}, opts).front() / sym.f_product();
        auto x = [&](int a, int b) { return tau(a, b) / kTwoPiI; };
        cplx model = x(1, 2) + sym.phi[0] * x(0, 1) * x(0, 2);
        for (int j = 3; j < g; ++j) model += sym.phi[static_cast<std::size_t>(j)] * x(0, j) * x(0, j);
        return grad - model;
      },
      ladder, 3.0, SlopeMode::AtLeast);
  r.label = "grad_slice_residual";
  return r;
}

SlopeReport gradient_combination(const std::vector<cplx>& t, const CMatrix& dir, int j,
                                 const std::vector<double>& ladder) {
  const int g = static_cast<int>(t.size());
  if (j < 4 || j > g) throw ThetaError("gradient_combination needs 4 <= j <= g");
  const auto opts = precise();
  const auto sym = bind_symbols(t, 3, opts);
  const auto base = PeriodMatrix::diagonal(t);
  const auto m0 = normal_form(g, 3);
  const auto ja = static_cast<std::size_t>(j - 1);
  std::vector<MultiIndex> ds;
  for (int a : {0, 1, 2, j - 1}) {
    MultiIndex d(static_cast<std::size_t>(g), 0);
    d[static_cast<std::size_t>(a)] = 1;
    ds.push_back(d);
  }
  const cplx coeff = sym.psi[ja] - 2.0 * sym.phi[ja] * sym.phi[ja];
  std::vector<cplx> predicted;
  auto r = vanishing_order(
      [&](double eps) {
        const auto tau = base.shifted(dir, eps);
        const auto v = eval_many(m0, tau, CVector::Zero(g), ds, opts);
        const cplx x1j = tau(0, j - 1) / kTwoPiI;
        const cplx c = (v[3] - sym.phi[ja] * x1j * (v[0] + v[1] + v[2])) / sym.f_product();
        predicted.push_back(coeff * x1j * x1j * x1j);
        return c;
      },
      ladder, 3.0, SlopeMode::Equal);
  r.label = "grad_combination_j=" + std::to_string(j);
  if (!r.identically_zero) {
    // Recompute the complex value at the smallest eps for the ratio.
    const auto tau = base.shifted(dir, ladder.back());
    const auto v = eval_many(m0, tau, CVector::Zero(g), ds, opts);
    const cplx x1j = tau(0, j - 1) / kTwoPiI;
    const cplx c = (v[3] - sym.phi[ja] * x1j * (v[0] + v[1] + v[2])) / sym.f_product();
    finish_report(r, c / predicted.back(), {}, 0.0);
  }
  return r;
}

std::vector<SlopeReport> gradient_locus_check(const std::vector<cplx>& t, const CMatrix& dir,
                                              const std::vector<double>& ladder) {
  const int g = static_cast<int>(t.size());
  if (g < 4 || g > 5) throw ThetaError("gradient_locus_check supports 4 <= g <= 5");
  std::vector<SlopeReport> out{gradient_slice_residual(t, dir, ladder)};
  for (int j = 4; j <= g; ++j) out.push_back(gradient_combination(t, dir, j, ladder));
  return out;
}

std::string_view to_string(MinorKind kind) {
  switch (kind) {
    case MinorKind::D12j:
      return "D12j";
    case MinorKind::D12jj:
      return "D12jj";
    case MinorKind::D12jk:
      return "D12jk";
  }
  return "?";
}

MinorKind parse_minor_kind(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  // "D123" is accepted as a name for the 3x3 minor on rows 1, 2, j.
  if (lower == "d12j" || lower == "d123") return MinorKind::D12j;
  if (lower == "d12jj") return MinorKind::D12jj;
  if (lower == "d12jk") return MinorKind::D12jk;
  throw ExpansionError("unknown minor \"" + std::string(name) + "\" (D12j, D12jj, D12jk)");
}

PeriodMatrix solve_thetanull_tau12(const PeriodMatrix& tau, const ThetaOptions& opts) {
  const int g = tau.genus();
  const auto m0 = normal_form(g, 2);
  const auto sym = bind_symbols(diagonal_of(tau), 2, opts);
  cplx x12(0);
  for (int a = 2; a < g; ++a) {
    x12 -= sym.phi[static_cast<std::size_t>(a)] * (tau(0, a) / kTwoPiI) * (tau(1, a) / kTwoPiI);
  }
  PeriodMatrix cur = tau.with_entry(0, 1, kTwoPiI * x12);
  for (int iter = 0; iter < 30; ++iter) {
    const cplx value = theta_constant(m0, cur, opts);
    const cplx slope = tau_derivative(m0, cur, 0, 1, opts);
    const cplx step = value / slope;
    cur = cur.with_entry(0, 1, cur(0, 1) - step);
    if (std::abs(step) <= 1e-17 * std::max(1.0, std::abs(cur(0, 1)))) break;
  }
  return cur;
}

cplx hessian_minor_det(const PeriodMatrix& tau, const std::vector<int>& rows, const std::vector<int>& cols,
                       const ThetaOptions& opts) {
  if (rows.size() != cols.size() || rows.empty()) throw ThetaError("minor needs matching nonempty index lists");
  const int g = tau.genus();
  const auto sym = bind_symbols(diagonal_of(tau), 2, opts);
  const CMatrix t = tau_gradient(normal_form(g, 2), tau, opts) * (kTwoPiI / sym.f_product());
  const auto n = static_cast<Eigen::Index>(rows.size());
  CMatrix sub(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) sub(r, c) = t(rows[static_cast<std::size_t>(r)] - 1, cols[static_cast<std::size_t>(c)] - 1);
  }
  return sub.determinant();
}

CMatrix slice_z_direction(int g, Rng& rng, MinorKind kind) {
  if (g < 3) throw ThetaError("slice Z needs g >= 3");
  CMatrix b = CMatrix::Zero(g, g);
  auto set = [&](int a, int c, cplx v) {
    b(a, c) = v;
    b(c, a) = v;
  };
  for (int a = 2; a < g; ++a) {
    const cplx v = rng.unit_box();
    set(0, a, v);
    set(1, a, v);
  }
  if (kind != MinorKind::D12j) {
    for (int a = 2; a < g; ++a) {
      for (int c = a + 1; c < g; ++c) set(a, c, rng.unit_box());
    }
  }
  return b / b.cwiseAbs().maxCoeff();
}

namespace {

// Point on the ray for a minor check; tau_12 is left at 0 for the solver.
PeriodMatrix minor_ray_point(const PeriodMatrix& base, const CMatrix& dir, MinorKind kind, int j, int k,
                             double eps) {
  CMatrix m = base.entries();
  const int g = base.genus();
  for (int a = 0; a < g; ++a) {
    for (int b = 0; b < g; ++b) {
      if (a == b || (std::min(a, b) == 0 && std::max(a, b) == 1)) continue;
      double s = eps;
      if (kind == MinorKind::D12jk) {
        const int lo = std::min(a, b);
        const int hi = std::max(a, b);
        if (lo <= 1 && (hi == j - 1 || hi == k - 1)) s = eps * eps;
      }
      m(a, b) += s * dir(a, b);
    }
  }
  return PeriodMatrix(m);
}

}  // namespace

SlopeReport minor_identity_check(const std::vector<cplx>& t, const CMatrix& dir, MinorKind kind, int j, int k,
                                 const std::vector<double>& ladder) {
  const int g = static_cast<int>(t.size());
  const auto opts = precise();
  const auto sym = bind_symbols(t, 2, opts);
  const auto base = PeriodMatrix::diagonal(t);
  const auto ph = [&](int a) { return sym.phi[static_cast<std::size_t>(a - 1)]; };
  const auto ps = [&](int a) { return sym.psi[static_cast<std::size_t>(a - 1)]; };
  double order = 0;
  switch (kind) {
    case MinorKind::D12j:
      if (j < 3 || j > g) throw ThetaError("D12j needs 3 <= j <= g");
      order = 2;
      break;
    case MinorKind::D12jj:
      if (g < 4 || j < 4 || j > g) throw ThetaError("D12jj needs 4 <= j <= g");
      order = 4;
      break;
    case MinorKind::D12jk:
      if (g < 5 || j < 4 || k <= j || k > g) throw ThetaError("D12jk needs 4 <= j < k <= g");
      order = 4;
      break;
  }
  // measured and predicted values per ladder point
  std::vector<cplx> measured;
  std::vector<cplx> predicted;
  for (double eps : ladder) {
    const auto tau = solve_thetanull_tau12(minor_ray_point(base, dir, kind, j, k, eps), opts);
    const auto x = [&](int a, int b) { return tau(a - 1, b - 1) / kTwoPiI; };
    switch (kind) {
      case MinorKind::D12j:
        measured.push_back(hessian_minor_det(tau, {1, 2, j}, {1, 2, j}, opts));
        predicted.push_back((2.0 * ph(j) * ph(j) - ps(j) / 2.0) * x(1, j) * x(2, j));
        break;
      case MinorKind::D12jj:
        measured.push_back(hessian_minor_det(tau, {1, 2, 3, j}, {1, 2, 3, j}, opts));
        predicted.push_back(-x(1, 3) * x(1, 3) * x(1, j) * x(1, j) * (4.0 * ph(3) * ph(3) - ps(3)) *
                            (4.0 * ph(j) * ph(j) - ps(j)) / 4.0);
        break;
      case MinorKind::D12jk: {
        const double h = 1e-3 * eps;
        const cplx tjk = tau(j - 1, k - 1);
        const cplx up = hessian_minor_det(tau.with_entry(j - 1, k - 1, tjk + h), {1, 2, 3, j}, {1, 2, 3, k}, opts);
        const cplx dn = hessian_minor_det(tau.with_entry(j - 1, k - 1, tjk - h), {1, 2, 3, j}, {1, 2, 3, k}, opts);
        measured.push_back((up - dn) / (2.0 * h));
        const cplx d123 = hessian_minor_det(tau, {1, 2, 3}, {1, 2, 3}, opts);
        predicted.push_back(-ph(3) * ph(j) * ph(k) * x(1, 3) * x(1, 3) * d123 / kTwoPiI);
        break;
      }
    }
  }
  std::size_t idx = 0;
  auto r = vanishing_order([&](double) { return measured[idx++]; }, ladder, order, SlopeMode::Equal);
  r.label = std::string(to_string(kind)) + "_j=" + std::to_string(j) + (kind == MinorKind::D12jk ? "_k=" + std::to_string(k) : "");
  std::vector<double> residuals;
  for (std::size_t i = 0; i < measured.size(); ++i) residuals.push_back(std::abs(measured[i] - predicted[i]));
  finish_report(r, measured.back() / predicted.back(), residuals, kind == MinorKind::D12jk ? 0.0 : order + 1);
  return r;
}

}  // namespace thetalab
