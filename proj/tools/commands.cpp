#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>

#include "thetalab/chars.hpp"
#include "thetalab/expand.hpp"
#include "thetalab/loci.hpp"
#include "thetalab/sampling.hpp"
#include "thetalab/suite.hpp"
#include "thetalab/symp.hpp"
#include "thetalab/theta.hpp"

namespace thetalab::cli {

namespace {

std::vector<double> ladder_of(const JobConfig& cfg) { return cfg.ladder.empty() ? power_ladder() : cfg.ladder; }

int genus_in(const JobConfig& cfg, int lo, int hi, int fallback) {
  const int g = cfg.g.value_or(fallback);
  if (g < lo || g > hi) {
    throw InputError(cfg.command + " needs " + std::to_string(lo) + " <= g <= " + std::to_string(hi));
  }
  return g;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw InputError("");
    } catch (const std::exception&) {
      throw InputError("expected a comma-separated integer list, got \"" + text + "\"");
    }
  }
  return out;
}

PeriodMatrix load_tau(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
  return PeriodMatrix::from_json(j);
}

// --tau when given, otherwise a seeded random point (diagonal on request).
PeriodMatrix tau_for(const JobConfig& cfg, Rng& rng, int fallback_g) {
  if (!cfg.tau_path.empty()) {
    auto tau = load_tau(cfg.tau_path);
    if (cfg.g && *cfg.g != tau.genus()) throw InputError("--g disagrees with the genus of --tau");
    return tau;
  }
  const int g = genus_in(cfg, 1, 5, fallback_g);
  return cfg.diagonal ? PeriodMatrix::diagonal(random_diagonal(g, rng)) : random_period_matrix(g, rng);
}

nlohmann::json cplx_json(cplx v) { return nlohmann::json::array({v.real(), v.imag()}); }

std::string class_name(const Characteristic& m) {
  return std::string(m.is_even() ? "E_" : "O_") + std::to_string(m.scalar_class());
}

bool is_diagonal(const PeriodMatrix& tau) {
  for (int a = 0; a < tau.genus(); ++a) {
    for (int b = 0; b < tau.genus(); ++b) {
      if (a != b && tau(a, b) != cplx(0)) return false;
    }
  }
  return true;
}

Report slope_rows(const std::vector<std::pair<SlopeReport, int>>& reports) {
  Report r;
  int passed = 0;
  for (const auto& [rep, g] : reports) {
    r.rows.push_back(report_row(rep, g));
    passed += rep.pass ? 1 : 0;
  }
  r.pass = passed == static_cast<int>(reports.size());
  r.body["passed"] = passed;
  r.body["total"] = reports.size();
  r.rows_in_json = true;
  r.uses_ladder = true;
  return r;
}

std::string csv_field(const nlohmann::json& v) {
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

}  // namespace

std::vector<double> parse_ladder(const std::string& text) {
  static const std::regex range(R"(\s*2\^-(\d+)\s*\.\.\s*2\^-(\d+)\s*)");
  std::smatch m;
  std::vector<double> out;
  if (std::regex_match(text, m, range)) {
    const int first = std::stoi(m[1]);
    const int last = std::stoi(m[2]);
    if (first > last || last > 60) throw InputError("ladder exponents must satisfy first <= last <= 60");
    out = power_ladder(first, last);
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        out.push_back(std::stod(item, &used));
        if (used != item.size()) throw InputError("");
      } catch (const std::exception&) {
        throw InputError("cannot parse ladder \"" + text + "\"");
      }
    }
  }
  if (out.size() < 2) throw InputError("a ladder needs at least two points");
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!(out[i] > 0) || (i > 0 && !(out[i] < out[i - 1]))) {
      throw InputError("ladder must be positive and strictly decreasing");
    }
  }
  return out;
}

Report run_char(const JobConfig& cfg) {
  const auto m = Characteristic::parse(cfg.text);
  Report r;
  r.body["characteristic"] = m.compact();
  r.body["verbose"] = m.verbose();
  r.body["parity"] = m.is_even() ? "even" : "odd";
  r.body["l"] = m.scalar_class();
  r.body["class"] = class_name(m);
  if (cfg.action == "decompose") {
    const auto fs = special_fundamental_system(m.genus());
    const auto d = decompose(m, fs);
    nlohmann::json members = nlohmann::json::array();
    for (int i : d.indices()) members.push_back(fs.basis_label(i));
    r.body["members"] = members;
    r.body["size"] = d.size();
  } else if (cfg.action != "classify") {
    throw InputError("char action must be classify or decompose");
  }
  nlohmann::json row = r.body;
  if (row.contains("members")) row["members"] = row["members"].dump();
  r.rows.push_back(row);
  return r;
}

Report run_orbit(const JobConfig& cfg) {
  const auto set = parse_generator_set(cfg.group);
  Characteristic m;
  if (!cfg.seed_char.empty()) {
    m = Characteristic::parse(cfg.seed_char);
    if (cfg.g && *cfg.g != m.genus()) throw InputError("--g disagrees with the genus of --seed-char");
  } else {
    m = Characteristic::zero(genus_in(cfg, 1, 6, 3));
  }
  const int g = m.genus();
  if (g > 6) throw InputError("orbit supports g <= 6");
  const auto orb = orbit(m, generators(set, g));
  std::vector<Characteristic> expected;
  switch (set) {
    case GeneratorSet::Identity:
      expected = {m};
      break;
    case GeneratorSet::Stab:
      expected = enumerate(g, {m.parity(), m.scalar_class()});
      break;
    case GeneratorSet::Gg:
      expected = enumerate(g, {m.parity(), std::nullopt});
      break;
  }
  Report r;
  r.pass = orb == expected;
  r.body["seed_characteristic"] = m.compact();
  r.body["generator_set"] = std::string(to_string(set));
  r.body["orbit_size"] = orb.size();
  r.body["expected"] = expected.size();
  if (cfg.list) {
    r.body["orbit"] = nlohmann::json::array();
    for (const auto& c : orb) r.body["orbit"].push_back(c.compact());
  }
  r.rows.push_back({{"seed_characteristic", m.compact()},
                    {"generator_set", std::string(to_string(set))},
                    {"orbit_size", orb.size()},
                    {"expected", expected.size()},
                    {"pass", r.pass}});
  return r;
}

Report run_theta_eval(const JobConfig& cfg) {
  Rng rng(cfg.seed);
  const auto tau = tau_for(cfg, rng, 2);
  const int g = tau.genus();
  const auto m = cfg.characteristic.empty() ? Characteristic::zero(g) : Characteristic::parse(cfg.characteristic);
  if (m.genus() != g) throw InputError("characteristic genus differs from the period matrix");
  MultiIndex d(static_cast<std::size_t>(g), 0);
  if (!cfg.deriv.empty()) {
    d = parse_int_list(cfg.deriv);
    if (static_cast<int>(d.size()) != g) throw InputError("--deriv needs g entries");
    if (std::any_of(d.begin(), d.end(), [](int v) { return v < 0; })) throw InputError("--deriv entries must be >= 0");
  }
  ThetaOptions opts;
  if (cfg.tol) opts.tol = *cfg.tol;
  if (cfg.extended) opts.precision = Precision::Extended;
  const auto res = eval(m, tau, CVector::Zero(g), d, opts);
  Report r;
  r.body["characteristic"] = m.compact();
  r.body["derivative"] = d;
  r.body["tau"] = tau.to_json();
  r.body["digest"] = digest(tau);
  r.body["value"] = cplx_json(res.value);
  r.body["tol"] = res.tol;
  r.body["radius"] = res.radius;
  r.rows.push_back({{"characteristic", m.compact()},
                    {"digest", digest(tau)},
                    {"re", res.value.real()},
                    {"im", res.value.imag()},
                    {"tol", res.tol},
                    {"radius", res.radius}});
  return r;
}

Report run_expand_verify(const JobConfig& cfg) {
  if (!cfg.bracket.empty()) {
    const auto idx = parse_int_list(cfg.bracket);
    const int g = cfg.g.value_or(idx.empty() ? 1 : *std::max_element(idx.begin(), idx.end()));
    const auto p = bracket(idx, g);
    Report r;
    r.pass = p == bracket_by_matchings(idx, g);
    r.body["indices"] = idx;
    r.body["text"] = p.to_string();
    r.body["polynomial"] = p.to_json();
    r.body["oracle_agrees"] = r.pass;
    r.rows.push_back({{"indices", cfg.bracket}, {"text", p.to_string()}, {"oracle_agrees", r.pass}});
    return r;
  }
  const int g = genus_in(cfg, 2, 5, 4);
  Rng rng(cfg.seed);
  std::vector<std::pair<SlopeReport, int>> reps;
  for (auto& rep : expansion_order_reports(g, rng, ladder_of(cfg), cfg.directions)) reps.emplace_back(rep, g);
  return slope_rows(reps);
}

Report run_grad_verify(const JobConfig& cfg) {
  const int g = genus_in(cfg, 4, 5, 4);
  Rng rng(cfg.seed);
  std::vector<std::pair<SlopeReport, int>> reps;
  for (int i = 0; i < cfg.points; ++i) {
    const auto t = generic_diagonal(g, 3, rng);
    const CMatrix dir = slice_y_direction(g, rng);
    for (auto& rep : gradient_locus_check(t, dir, ladder_of(cfg))) reps.emplace_back(rep, g);
  }
  return slope_rows(reps);
}

Report run_hess_minor(const JobConfig& cfg) {
  const auto kind = parse_minor_kind(cfg.which);
  const int g = genus_in(cfg, kind == MinorKind::D12jk ? 5 : (kind == MinorKind::D12jj ? 4 : 3), 5, 5);
  const int j = cfg.j > 0 ? cfg.j : (kind == MinorKind::D12j ? 3 : 4);
  const int k = cfg.k > 0 ? cfg.k : (kind == MinorKind::D12jk ? j + 1 : j);
  Rng rng(cfg.seed);
  std::vector<std::pair<SlopeReport, int>> reps;
  for (int i = 0; i < cfg.points; ++i) {
    const auto t = generic_diagonal(g, 2, rng);
    const CMatrix dir = slice_z_direction(g, rng, kind);
    reps.emplace_back(minor_identity_check(t, dir, kind, j, k, ladder_of(cfg)), g);
  }
  auto r = slope_rows(reps);
  r.body["minor"] = std::string(to_string(kind));
  r.body["j"] = j;
  if (kind == MinorKind::D12jk) r.body["k"] = k;
  return r;
}

Report run_loci_test(const JobConfig& cfg) {
  Rng rng(cfg.seed);
  const auto tau = tau_for(cfg, rng, 3);
  const int g = tau.genus();
  if (g > 5) throw InputError("loci-test supports g <= 5");
  const double tol = cfg.tol.value_or(kDefaultLocusTol);
  std::vector<LocusVerdict> verdicts;
  verdicts.push_back(is_diagonal_orbit(tau, tol));
  for (int g1 = 1; g1 < g; ++g1) verdicts.push_back(is_product_orbit(tau, g1, tol));
  verdicts.push_back(hyperelliptic_vanishing_test(tau, tol));
  Report r;
  r.body["tau"] = tau.to_json();
  r.body["digest"] = digest(tau);
  if (g >= 2) {
    const auto m0 = normal_form(g, 2);
    const auto nr = thetanull_rank_class(tau, m0, tol);
    r.body["thetanull_m0"] = {{"characteristic", m0.compact()},
                              {"is_null", nr.is_null},
                              {"rank", nr.rank},
                              {"relative_value", nr.relative_value}};
  }
  // The tangent statement is a theorem about diagonal points, so it counts
  // towards the exit code; the membership verdicts above do not.
  if (is_diagonal(tau) && g >= 3) {
    std::vector<cplx> t;
    for (int a = 0; a < g; ++a) t.push_back(tau(a, a));
    verdicts.push_back(tridiagonal_tangent_check(t, tol));
    r.pass = verdicts.back().verdict;
  }
  r.body["verdicts"] = nlohmann::json::array();
  for (const auto& v : verdicts) {
    r.body["verdicts"].push_back(v.to_json());
    r.rows.push_back({{"locus", v.locus}, {"digest", v.digest}, {"tol", v.tol}, {"verdict", v.verdict}});
  }
  return r;
}

Report run_report_all(const JobConfig& cfg) {
  SuiteOptions opts;
  opts.seed = cfg.seed;
  opts.max_genus = genus_in(cfg, 1, 5, 5);
  opts.ladder = ladder_of(cfg);
  if (cfg.tol) opts.locus_tol = *cfg.tol;
  Report r;
  r.uses_ladder = true;
  r.body["checks"] = nlohmann::json::array();
  for (const auto& c : run_suite(opts)) {
    r.pass = r.pass && c.pass;
    r.body["checks"].push_back(c.to_json());
    r.rows.push_back({{"id", c.id}, {"name", c.name}, {"pass", c.pass}, {"summary", c.summary}});
  }
  return r;
}

nlohmann::json envelope(const JobConfig& cfg, const Report& report, const std::string& timestamp) {
  nlohmann::json j = report.body;
  j["schema"] = 1;
  j["command"] = cfg.command;
  j["seed"] = cfg.seed;
  if (cfg.g) j["g"] = *cfg.g;
  if (cfg.tol) j["tol"] = *cfg.tol;
  if (report.uses_ladder) j["ladder"] = ladder_of(cfg);
  j["timestamp"] = timestamp;
  j["pass"] = report.pass;
  if (report.rows_in_json) j["rows"] = report.rows;
  return j;
}

std::string to_csv(const nlohmann::json& rows) {
  std::vector<std::string> header;
  for (const auto& row : rows) {
    for (const auto& [key, value] : row.items()) {
      if (std::find(header.begin(), header.end(), key) == header.end()) header.push_back(key);
    }
  }
  std::ostringstream os;
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) os << ",";
      if (row.contains(header[i])) os << csv_field(row[header[i]]);
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace thetalab::cli
