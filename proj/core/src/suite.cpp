#include "thetalab/suite.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "thetalab/chars.hpp"
#include "thetalab/sampling.hpp"
#include "thetalab/symp.hpp"
#include "thetalab/theta.hpp"

namespace thetalab {

namespace {

std::string sci(double v) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(2) << v;
  return os.str();
}

std::string count(int ok, int total) { return std::to_string(ok) + "/" + std::to_string(total); }

// Independent stream per check so that adding samples to one check does not
// shift the draws of another.
Rng rng_for(const SuiteOptions& opts, int id) {
  return Rng(opts.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(id));
}

std::vector<int> genera_within(std::vector<int> gs, int cap) {
  std::erase_if(gs, [cap](int g) { return g > cap; });
  return gs;
}

CheckResult skipped(int id, std::string name, int cap) {
  CheckResult r{id, std::move(name), false, true, "no genus of this check is <= " + std::to_string(cap), {}};
  return r;
}

ThetaOptions precise() {
  ThetaOptions o;
  o.tol = 1e-15;
  o.precision = Precision::Extended;
  return o;
}

CVector random_z(int g, Rng& rng) {
  CVector z(g);
  for (int a = 0; a < g; ++a) z(a) = 0.5 * rng.unit_box();
  return z;
}

PeriodMatrix block_sum(const PeriodMatrix& t1, const PeriodMatrix& t2) {
  const int g1 = t1.genus();
  const int g2 = t2.genus();
  CMatrix m = CMatrix::Zero(g1 + g2, g1 + g2);
  m.topLeftCorner(g1, g1) = t1.entries();
  m.bottomRightCorner(g2, g2) = t2.entries();
  return PeriodMatrix(m);
}

}  // namespace

nlohmann::json report_row(const SlopeReport& r, int g) {
  nlohmann::json j = {{"g", g},
                      {"label", r.label},
                      {"slope", r.fitted_slope},
                      {"target", r.target_order},
                      {"values", r.values},
                      {"pass", r.pass}};
  // Slope between the two smallest eps; diagnostic only, not part of the verdict.
  const auto n = r.values.size();
  if (n >= 2 && r.values[n - 1] > 0 && r.values[n - 2] > 0) {
    j["tail_slope"] = std::log(r.values[n - 1] / r.values[n - 2]) /
                      std::log(r.epsilon_ladder[n - 1] / r.epsilon_ladder[n - 2]);
  }
  if (r.coefficient_tolerance > 0) j["coefficient_ratio"] = r.coefficient_ratio;
  if (r.residual_target > 0) j["residual_slope"] = r.residual_slope;
  if (r.identically_zero) j["identically_zero"] = true;
  return j;
}

nlohmann::json CheckResult::to_json() const {
  nlohmann::json j = {{"id", id}, {"name", name}, {"pass", pass}, {"summary", summary}, {"details", details}};
  if (skipped) j["skipped"] = true;
  return j;
}

CheckResult check_counting() {
  CheckResult r{1, "counting", true, false, "", nlohmann::json::array()};
  for (int g = 1; g <= 8; ++g) {
    const auto all = enumerate(g);
    const auto evens = std::count_if(all.begin(), all.end(), [](const auto& m) { return m.is_even(); });
    const auto odds = static_cast<long>(all.size()) - evens;
    const long expected_even = (1L << (g - 1)) * ((1L << g) + 1);
    const long expected_odd = (1L << (g - 1)) * ((1L << g) - 1);
    const bool ok = evens == expected_even && odds == expected_odd;
    r.pass = r.pass && ok;
    r.details.push_back({{"g", g}, {"even", evens}, {"odd", odds}, {"pass", ok}});
  }
  const auto even3 = enumerate(3, {Parity::Even, std::nullopt}).size();
  r.pass = r.pass && even3 == 36;
  r.summary = "g=1..8 counts match; g=3 even count " + std::to_string(even3);
  if (!r.pass) r.summary = "count mismatch";
  return r;
}

CheckResult check_transitivity() {
  CheckResult r{2, "transitivity", true, false, "", nlohmann::json::array()};
  for (int g = 2; g <= 6; ++g) {
    const auto gens = generators(GeneratorSet::Gg, g);
    const auto even_orbit = orbit(Characteristic::zero(g), gens);
    const auto odd_orbit = orbit(Characteristic(g, 1U, 1U), gens);
    const bool ok = even_orbit == enumerate(g, {Parity::Even, std::nullopt}) &&
                    odd_orbit == enumerate(g, {Parity::Odd, std::nullopt});
    r.pass = r.pass && ok;
    r.details.push_back({{"g", g},
                         {"even_orbit", even_orbit.size()},
                         {"odd_orbit", odd_orbit.size()},
                         {"pass", ok}});
  }
  r.summary = r.pass ? "orbits equal E and O for g=2..6" : "an orbit differs from E or O";
  return r;
}

CheckResult check_fundamental_system() {
  CheckResult r{3, "fundamental_system", true, false, "", nlohmann::json::array()};
  for (int g = 2; g <= 6; ++g) {
    const auto fs = special_fundamental_system(g);
    const auto members = fs.members();
    const int n = static_cast<int>(members.size());
    int triples = 0;
    int azygetic = 0;
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        for (int c = b + 1; c < n; ++c) {
          ++triples;
          azygetic += is_azygetic_triple(members[a], members[b], members[c]) ? 1 : 0;
        }
      }
    }
    int essential = 0;
    for (int drop = 0; drop < n; ++drop) {
      auto rest = members;
      rest.erase(rest.begin() + drop);
      essential += is_essential_basis(rest) ? 1 : 0;
    }
    Characteristic total = Characteristic::zero(g);
    for (const auto& m : members) total += m;
    const bool ok = azygetic == triples && essential == n && total == Characteristic::zero(g);
    r.pass = r.pass && ok;
    r.details.push_back({{"g", g},
                         {"azygetic_triples", count(azygetic, triples)},
                         {"essential_after_drop", count(essential, n)},
                         {"sum_is_zero", total == Characteristic::zero(g)},
                         {"pass", ok}});
  }
  const auto b3 = b_char(special_fundamental_system(3));
  const bool b3_ok = b3 == Characteristic::parse("[111;101]");
  r.pass = r.pass && b3_ok;
  r.details.push_back({{"b3", b3.compact()}, {"pass", b3_ok}});
  r.summary = r.pass ? "all triples azygetic, every drop essential, b3=" + b3.compact()
                     : "fundamental system property violated";
  return r;
}

CheckResult check_hyperelliptic_sets() {
  CheckResult r{4, "hyperelliptic_sets", true, false, "", nlohmann::json::object()};
  const auto set2 = hyperelliptic_vanishing_set(2);
  const auto set3 = hyperelliptic_vanishing_set(3);
  const auto b3 = b_char(special_fundamental_system(3));
  const bool set2_ok = set2.empty();
  const bool set3_ok = set3 == std::vector<Characteristic>{b3} && b3.is_even() && b3.scalar_class() >= 2;
  r.details["set2_size"] = set2.size();
  r.details["set3"] = nlohmann::json::array();
  for (const auto& m : set3) r.details["set3"].push_back(m.compact());
  r.details["lemma"] = nlohmann::json::array();
  bool lemma_ok = true;
  for (int g = 2; g <= 6; ++g) {
    const bool ok = vanish_lemma_check(g);
    lemma_ok = lemma_ok && ok;
    r.details["lemma"].push_back({{"g", g}, {"pass", ok}});
  }
  r.pass = set2_ok && set3_ok && lemma_ok;
  r.summary = r.pass ? "set(2) empty, set(3) = {b3} in E*, lemma holds for g=2..6"
                     : "vanishing set mismatch";
  return r;
}

CheckResult check_theta_numerics(const SuiteOptions& opts) {
  if (opts.max_genus < 1) return skipped(5, "theta_numerics", opts.max_genus);
  CheckResult r{5, "theta_numerics", true, false, "", nlohmann::json::object()};
  Rng rng = rng_for(opts, 5);
  const int gmax = std::min(4, opts.max_genus);
  const auto draw_g = [&](int lo) { return lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(gmax - lo + 1))); };

  // Parity: theta_m(-z) = e(m) theta_m(z); odd constants and even gradients vanish.
  double parity_res = 0.0;
  for (int s = 0; s < kNumericsSamples; ++s) {
    const int g = draw_g(1);
    const auto m = random_characteristic(g, rng);
    const auto tau = random_period_matrix(g, rng);
    const CVector z = random_z(g, rng);
    const MultiIndex none(static_cast<std::size_t>(g), 0);
    const cplx plus = eval(m, tau, z, none).value;
    const cplx minus = eval(m, tau, -z, none).value;
    parity_res = std::max(parity_res, std::abs(minus - static_cast<double>(parity_sign(m)) * plus));
    if (m.is_even()) {
      parity_res = std::max(parity_res, gradient(m, tau).cwiseAbs().maxCoeff());
    } else {
      parity_res = std::max(parity_res, std::abs(theta_constant(m, tau)));
    }
  }

  // Factorization over a block-diagonal period matrix.
  double factor_res = 0.0;
  int factor_samples = 0;
  for (int s = 0; gmax >= 2 && s < kNumericsSamples; ++s, ++factor_samples) {
    const int g = draw_g(2);
    const int g1 = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(g - 1)));
    const auto t1 = random_period_matrix(g1, rng);
    const auto t2 = random_period_matrix(g - g1, rng);
    const auto m1 = random_characteristic(g1, rng);
    const auto m2 = random_characteristic(g - g1, rng);
    const CVector z1 = random_z(g1, rng);
    const CVector z2 = random_z(g - g1, rng);
    CVector z(g);
    z << z1, z2;
    const cplx whole = eval(m1.direct_sum(m2), block_sum(t1, t2), z, MultiIndex(static_cast<std::size_t>(g), 0)).value;
    const cplx parts = eval(m1, t1, z1, MultiIndex(static_cast<std::size_t>(g1), 0)).value *
                       eval(m2, t2, z2, MultiIndex(static_cast<std::size_t>(g - g1), 0)).value;
    factor_res = std::max(factor_res, std::abs(whole - parts));
  }

  // Diagonal product formula.
  double product_res = 0.0;
  for (int s = 0; s < kNumericsSamples; ++s) {
    const int g = draw_g(1);
    const auto t = random_diagonal(g, rng);
    const auto m = random_characteristic(g, rng);
    cplx prod = 1.0;
    for (int a = 0; a < g; ++a) prod *= theta_constant(m.column(a), PeriodMatrix::diagonal({t[static_cast<std::size_t>(a)]}));
    product_res = std::max(product_res, std::abs(theta_constant(m, PeriodMatrix::diagonal(t)) - prod));
  }

  // Heat equation against a central difference in tau_jk. Odd constants are
  // identically zero in tau, so the samples use even characteristics.
  double heat_rel = 0.0;
  for (int s = 0; s < kNumericsSamples; ++s) {
    const int g = draw_g(1);
    Characteristic m = random_characteristic(g, rng);
    while (!m.is_even()) m = random_characteristic(g, rng);
    const auto tau = random_period_matrix(g, rng);
    const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(g)));
    const int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(g)));
    const cplx analytic = tau_derivative(m, tau, j, k);
    const double h = kFiniteDifferenceStep;
    const cplx up = theta_constant(m, tau.with_entry(j, k, tau(j, k) + h));
    const cplx dn = theta_constant(m, tau.with_entry(j, k, tau(j, k) - h));
    const cplx fd = (up - dn) / (2 * h);
    heat_rel = std::max(heat_rel, std::abs(fd - analytic) / std::abs(analytic));
  }

  r.details = {{"samples", kNumericsSamples},
               {"max_genus", gmax},
               {"parity_max_residual", parity_res},
               {"factorization_max_residual", factor_res},
               {"factorization_samples", factor_samples},
               {"diagonal_product_max_residual", product_res},
               {"heat_equation_max_relative", heat_rel}};
  r.pass = parity_res < kNumericsAbsTol && (gmax < 2 || factor_res < kNumericsAbsTol) &&
           product_res < kNumericsAbsTol && heat_rel < kFiniteDifferenceRelTol;
  r.summary = "parity " + sci(parity_res) + ", factorization " + sci(factor_res) + ", product " +
              sci(product_res) + ", heat (rel) " + sci(heat_rel);
  return r;
}

CheckResult check_bracket_calculus() {
  CheckResult r{6, "bracket_calculus", true, false, "", nlohmann::json::object()};
  const int g = 4;
  auto term = [g](std::vector<std::pair<std::pair<int, int>, int>> tau, int n, Rational c) {
    Monomial m = BracketPolynomial::constant(g, 1).terms().begin()->first;
    m.inv_twopii = n;
    for (const auto& [ab, d] : tau) m.tau[static_cast<std::size_t>(pair_index(ab.first, ab.second, g))] = d;
    BracketPolynomial p(g);
    p.add_term(m, c);
    return p;
  };
  const BracketPolynomial ex2 = term({{{1, 2}, 1}, {{3, 4}, 1}}, 2, 1) + term({{{1, 3}, 1}, {{2, 4}, 1}}, 2, 1) +
                                term({{{1, 4}, 1}, {{2, 3}, 1}}, 2, 1);
  const BracketPolynomial ex3 = term({{{1, 2}, 2}, {{3, 4}, 1}}, 3, Rational(1, 2)) +
                                term({{{1, 2}, 1}, {{1, 3}, 1}, {{2, 4}, 1}}, 3, 1) +
                                term({{{1, 2}, 1}, {{1, 4}, 1}, {{2, 3}, 1}}, 3, 1);
  const bool e1 = bracket({1, 1}, g).is_zero();
  const bool e2 = bracket({1, 2, 3, 4}, g) == ex2;
  const bool e3 = bracket({1, 1, 2, 2, 3, 4}, g) == ex3;

  int checked = 0;
  int agree = 0;
  nlohmann::json mismatches = nlohmann::json::array();
  for (int gg = 1; gg <= 5; ++gg) {
    for (int n = 1; n <= 3; ++n) {
      // every nondecreasing index list of length 2n
      std::vector<int> idx(static_cast<std::size_t>(2 * n), 1);
      while (true) {
        ++checked;
        if (bracket(idx, gg) == bracket_by_matchings(idx, gg)) {
          ++agree;
        } else if (mismatches.size() < 10) {
          mismatches.push_back({{"g", gg}, {"indices", idx}});
        }
        int p = 2 * n - 1;
        while (p >= 0 && idx[static_cast<std::size_t>(p)] == gg) --p;
        if (p < 0) break;
        const int v = ++idx[static_cast<std::size_t>(p)];
        for (std::size_t q = static_cast<std::size_t>(p) + 1; q < idx.size(); ++q) idx[q] = v;
      }
    }
  }
  r.details = {{"example_1_1", e1},
               {"example_1_2_3_4", e2},
               {"example_1_1_2_2_3_4", e3},
               {"oracle_multisets", checked},
               {"oracle_agree", agree},
               {"mismatches", mismatches}};
  r.pass = e1 && e2 && e3 && agree == checked;
  r.summary = "worked examples " + std::string(e1 && e2 && e3 ? "exact" : "differ") + ", oracle agreement " +
              count(agree, checked);
  return r;
}

std::vector<SlopeReport> expansion_order_reports(int g, Rng& rng, const std::vector<double>& ladder,
                                                 int directions) {
  const auto po = precise();
  std::vector<SlopeReport> out;
  for (int l : {2, 4}) {
    if (l > g) continue;
    for (int i = 0; i < directions; ++i) {
      const auto t = generic_diagonal(g, l, rng);
      const CMatrix dir = random_offdiagonal_direction(g, rng);
      const auto base = PeriodMatrix::diagonal(t);
      const auto m = normal_form(g, l);
      const auto sym = bind_symbols(t, l, po);
      const auto lead = theta_leading(l, g);
      auto rep = vanishing_order(
          [&](const PeriodMatrix& tau) {
            return theta_constant(m, tau, po) - evaluate(lead, tau.entries() - base.entries(), sym) * sym.f_product();
          },
          base, dir, ladder, l / 2 + 2, SlopeMode::AtLeast);
      rep.label = "theta_l=" + std::to_string(l) + "_dir=" + std::to_string(i);
      out.push_back(std::move(rep));
    }
  }
  const int l = 3;
  for (int i = 0; g >= l && i < directions; ++i) {
    const auto t = generic_diagonal(g, l, rng);
    const CMatrix dir = random_offdiagonal_direction(g, rng);
    const auto base = PeriodMatrix::diagonal(t);
    const auto m = normal_form(g, l);
    const auto sym = bind_symbols(t, l, po);
    for (int a = 1; a <= g; ++a) {
      const auto lead = grad_leading(l, g, a);
      MultiIndex d(static_cast<std::size_t>(g), 0);
      d[static_cast<std::size_t>(a - 1)] = 1;
      auto rep = vanishing_order(
          [&](const PeriodMatrix& tau) {
            return eval(m, tau, CVector::Zero(g), d, po).value -
                   evaluate(lead, tau.entries() - base.entries(), sym) * sym.f_product();
          },
          base, dir, ladder, grad_remainder_order(l, a), SlopeMode::AtLeast);
      rep.label = "grad_l=3_a=" + std::to_string(a) + "_dir=" + std::to_string(i);
      out.push_back(std::move(rep));
    }
  }
  return out;
}

CheckResult check_expansion_orders(const SuiteOptions& opts) {
  const auto gs = genera_within({4, 5}, opts.max_genus);
  if (gs.empty()) return skipped(7, "expansion_orders", opts.max_genus);
  CheckResult r{7, "expansion_orders", true, false, "", nlohmann::json::array()};
  Rng rng = rng_for(opts, 7);
  int passed = 0;
  int total = 0;
  double worst_margin = 1e300;
  for (int g : gs) {
    for (const auto& rep : expansion_order_reports(g, rng, opts.ladder, 10)) {
      ++total;
      passed += rep.pass ? 1 : 0;
      worst_margin = std::min(worst_margin, rep.fitted_slope - rep.target_order);
      r.details.push_back(report_row(rep, g));
    }
  }
  r.pass = passed == total;
  r.summary = count(passed, total) + " remainder slopes at or above target (-0.15); worst margin " +
              sci(worst_margin);
  return r;
}

CheckResult check_tridiagonal_tangent(const SuiteOptions& opts) {
  const auto gs = genera_within({3, 4, 5}, opts.max_genus);
  if (gs.empty()) return skipped(8, "tridiagonal_tangent", opts.max_genus);
  CheckResult r{8, "tridiagonal_tangent", true, false, "", nlohmann::json::array()};
  Rng rng = rng_for(opts, 8);
  int passed = 0;
  int total = 0;
  for (int g : gs) {
    for (int i = 0; i < 5; ++i) {
      const auto t = generic_diagonal(g, 0, rng);
      const auto v = tridiagonal_tangent_check(t, opts.locus_tol);
      ++total;
      passed += v.verdict ? 1 : 0;
      r.details.push_back({{"g", g},
                           {"digest", v.digest},
                           {"kernel_dimension", v.witness["kernel_dimension"]},
                           {"pass", v.verdict}});
    }
  }
  r.pass = passed == total;
  r.summary = count(passed, total) + " points with single-entry support and kernel dimension 2g-1";
  return r;
}

CheckResult check_gradient_slice(const SuiteOptions& opts) {
  const auto gs = genera_within({4, 5}, opts.max_genus);
  if (gs.empty()) return skipped(9, "gradient_slice", opts.max_genus);
  CheckResult r{9, "gradient_slice", true, false, "", nlohmann::json::array()};
  Rng rng = rng_for(opts, 9);
  int passed = 0;
  int total = 0;
  for (int g : gs) {
    for (int i = 0; i < 5; ++i) {
      const auto t = generic_diagonal(g, 3, rng);
      const CMatrix dir = slice_y_direction(g, rng);
      for (const auto& rep : gradient_locus_check(t, dir, opts.ladder)) {
        ++total;
        passed += rep.pass ? 1 : 0;
        r.details.push_back(report_row(rep, g));
      }
    }
  }
  r.pass = passed == total;
  r.summary = count(passed, total) + " slice reports pass (residual slope >= 3, coefficient within 5%)";
  return r;
}

CheckResult check_hessian_rank_loci(const SuiteOptions& opts) {
  const auto gs = genera_within({4, 5}, opts.max_genus);
  if (gs.empty()) return skipped(10, "hessian_rank_loci", opts.max_genus);
  CheckResult r{10, "hessian_rank_loci", true, false, "", nlohmann::json::object()};
  Rng rng = rng_for(opts, 10);
  r.details["product_points"] = nlohmann::json::array();
  r.details["minors"] = nlohmann::json::array();
  int product_ok = 0;
  int product_total = 0;
  for (int g : gs) {
    const auto m0 = normal_form(g, 2);
    for (int i = 0; i < 20; ++i) {
      const auto t1 = PeriodMatrix::diagonal(random_diagonal(1, rng));
      const auto tau = block_sum(t1, random_period_matrix(g - 1, rng));
      const auto nr = thetanull_rank_class(tau, m0, opts.locus_tol, kDefaultRankTol);
      const bool ok = nr.is_null && nr.rank <= 2;
      ++product_total;
      product_ok += ok ? 1 : 0;
      r.details["product_points"].push_back({{"g", g},
                                             {"digest", digest(tau)},
                                             {"relative_value", nr.relative_value},
                                             {"rank", nr.rank},
                                             {"pass", ok}});
    }
  }
  int ok_by_kind[3] = {0, 0, 0};
  int total_by_kind[3] = {0, 0, 0};
  for (int g : gs) {
    for (int i = 0; i < 5; ++i) {
      const auto t = generic_diagonal(g, 2, rng);
      for (MinorKind kind : {MinorKind::D12j, MinorKind::D12jj, MinorKind::D12jk}) {
        const CMatrix dir = slice_z_direction(g, rng, kind);
        const int lo = kind == MinorKind::D12j ? 3 : 4;
        for (int j = lo; j <= g; ++j) {
          for (int k = (kind == MinorKind::D12jk ? j + 1 : j); k <= (kind == MinorKind::D12jk ? g : j); ++k) {
            const auto rep = minor_identity_check(t, dir, kind, j, k, opts.ladder);
            const auto idx = static_cast<std::size_t>(kind);
            ++total_by_kind[idx];
            ok_by_kind[idx] += rep.pass ? 1 : 0;
            r.details["minors"].push_back(report_row(rep, g));
          }
        }
      }
    }
  }
  r.pass = product_ok == product_total && ok_by_kind[0] == total_by_kind[0] &&
           ok_by_kind[1] == total_by_kind[1] && ok_by_kind[2] == total_by_kind[2];
  r.summary = "product points " + count(product_ok, product_total) + ", D12j " +
              count(ok_by_kind[0], total_by_kind[0]) + ", D12jj " + count(ok_by_kind[1], total_by_kind[1]) +
              ", D12jk " + count(ok_by_kind[2], total_by_kind[2]);
  if (total_by_kind[2] == 0) {
    r.summary += " (D12jk needs g >= 5)";
    r.pass = false;
  }
  return r;
}

std::vector<CheckResult> run_suite(const SuiteOptions& opts) {
  return {check_counting(),
          check_transitivity(),
          check_fundamental_system(),
          check_hyperelliptic_sets(),
          check_theta_numerics(opts),
          check_bracket_calculus(),
          check_expansion_orders(opts),
          check_tridiagonal_tangent(opts),
          check_gradient_slice(opts),
          check_hessian_rank_loci(opts)};
}

}  // namespace thetalab
