// thetalab: batch verification jobs with JSON or CSV reports.
//
// Exit codes: 0 when every check of the job passes, 1 when some check fails,
// 2 for malformed input.

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "thetalab/chars.hpp"
#include "thetalab/expand.hpp"
#include "thetalab/theta.hpp"

namespace {

using thetalab::cli::JobConfig;
using thetalab::cli::Report;

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void add_common(CLI::App* sub, JobConfig& cfg, std::string& ladder) {
  sub->add_option("--g", cfg.g, "Genus");
  sub->add_option("--seed", cfg.seed, "Seed for all random draws")->capture_default_str();
  sub->add_option("--tol", cfg.tol, "Tolerance override");
  sub->add_option("--ladder", ladder, "Epsilon ladder, e.g. 2^-3..2^-9 or 0.1,0.05,0.01");
  sub->add_option("--out", cfg.out, "Write the report here instead of stdout");
  sub->add_option("--format", cfg.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  sub->add_option("--tau", cfg.tau_path, "Period matrix JSON file");
}

int write_report(const JobConfig& cfg, const Report& report) {
  const auto doc = thetalab::cli::envelope(cfg, report, utc_timestamp());
  const std::string text = cfg.format == "csv" ? thetalab::cli::to_csv(report.rows) : doc.dump(2) + "\n";
  if (cfg.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(cfg.out);
    if (!out) {
      std::cerr << "thetalab: cannot write " << cfg.out << "\n";
      return 2;
    }
    out << text;
  }
  return report.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Theta characteristics, theta numerics and near-diagonal expansion checks"};
  app.require_subcommand(1);
  JobConfig cfg;
  std::string ladder;

  auto* ch = app.add_subcommand("char", "Classify or decompose a characteristic");
  ch->add_option("action", cfg.action, "classify or decompose")->required();
  ch->add_option("characteristic", cfg.text, "\"[110;110]\" or \"eps:110 delta:110\"")->required();

  auto* orb = app.add_subcommand("orbit", "Orbit of a characteristic under a generator set");
  orb->add_option("--group", cfg.group, "identity, Stab or Gg")->capture_default_str();
  orb->add_option("--seed-char", cfg.seed_char, "Starting characteristic (default zero)");
  orb->add_flag("--list", cfg.list, "Include the orbit members");

  auto* te = app.add_subcommand("theta-eval", "Evaluate a theta constant or z-derivative at z = 0");
  te->add_option("--char", cfg.characteristic, "Characteristic (default zero)");
  te->add_option("--deriv", cfg.deriv, "Derivative orders per coordinate, e.g. 1,0,1");
  te->add_flag("--extended", cfg.extended, "Accumulate in long double");
  te->add_flag("--diagonal", cfg.diagonal, "Draw a diagonal period matrix when --tau is absent");

  auto* ev = app.add_subcommand("expand-verify", "Print a bracket or fit the expansion remainders");
  ev->add_option("--bracket", cfg.bracket, "Index list, e.g. 1,1,2,2,3,4");
  ev->add_option("--directions", cfg.directions, "Random directions per expansion")->capture_default_str();

  auto* gv = app.add_subcommand("grad-verify", "Gradient expansions on the slice tau_1j = tau_2j = tau_3j");
  gv->add_option("--points", cfg.points, "Generic diagonal points")->capture_default_str();

  auto* hm = app.add_subcommand("hess-minor", "Hessian minor identities on theta_null");
  hm->add_option("--which", cfg.which, "D12j (alias D123), D12jj or D12jk")->capture_default_str();
  hm->add_option("--j", cfg.j, "Index j (1-based)");
  hm->add_option("--k", cfg.k, "Index k for D12jk (1-based)");
  hm->add_option("--points", cfg.points, "Generic diagonal points")->capture_default_str();

  auto* lt = app.add_subcommand("loci-test", "Locus membership verdicts for one period matrix");
  lt->add_flag("--diagonal", cfg.diagonal, "Draw a diagonal period matrix when --tau is absent");

  auto* ra = app.add_subcommand("report-all", "Run every acceptance check");

  for (auto* sub : {ch, orb, te, ev, gv, hm, lt, ra}) add_common(sub, cfg, ladder);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    cfg.command = app.get_subcommands().front()->get_name();
    if (!ladder.empty()) cfg.ladder = thetalab::cli::parse_ladder(ladder);
    if (cfg.tol && !(*cfg.tol > 0)) throw thetalab::cli::InputError("--tol must be positive");
    Report report;
    if (cfg.command == "char") report = thetalab::cli::run_char(cfg);
    if (cfg.command == "orbit") report = thetalab::cli::run_orbit(cfg);
    if (cfg.command == "theta-eval") report = thetalab::cli::run_theta_eval(cfg);
    if (cfg.command == "expand-verify") report = thetalab::cli::run_expand_verify(cfg);
    if (cfg.command == "grad-verify") report = thetalab::cli::run_grad_verify(cfg);
    if (cfg.command == "hess-minor") report = thetalab::cli::run_hess_minor(cfg);
    if (cfg.command == "loci-test") report = thetalab::cli::run_loci_test(cfg);
    if (cfg.command == "report-all") report = thetalab::cli::run_report_all(cfg);
    return write_report(cfg, report);
  } catch (const std::invalid_argument& e) {
    // InputError, CharacteristicError, PeriodMatrixError, ExpansionError
    std::cerr << "thetalab: " << e.what() << "\n";
    return 2;
  } catch (const thetalab::ThetaError& e) {
    std::cerr << "thetalab: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "thetalab: " << e.what() << "\n";
    return 2;
  }
}
