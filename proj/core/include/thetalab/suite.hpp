#pragma once

// The acceptance checks as library calls, shared by the acceptance binary and
// the `report-all` command. Every check is deterministic given the options.

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "thetalab/expand.hpp"
#include "thetalab/loci.hpp"

namespace thetalab {

struct SuiteOptions {
  std::uint64_t seed = 7;
  /// Numerical checks run only for genera <= max_genus. The exact checks
  /// (criteria 1-4, 6) always use their full ranges.
  int max_genus = 5;
  std::vector<double> ladder = power_ladder();
  double locus_tol = kDefaultLocusTol;
};

struct CheckResult {
  int id = 0;
  std::string name;
  bool pass = false;
  bool skipped = false;  // no genus of the check lies within max_genus
  std::string summary;
  nlohmann::json details;

  nlohmann::json to_json() const;
};

/// Tolerances of the numerical checks, pinned here.
inline constexpr double kNumericsAbsTol = 1e-8;
inline constexpr double kFiniteDifferenceRelTol = 1e-6;
inline constexpr double kFiniteDifferenceStep = 1e-5;
inline constexpr int kNumericsSamples = 100;

CheckResult check_counting();
CheckResult check_transitivity();
CheckResult check_fundamental_system();
CheckResult check_hyperelliptic_sets();
CheckResult check_theta_numerics(const SuiteOptions& opts);
CheckResult check_bracket_calculus();
CheckResult check_expansion_orders(const SuiteOptions& opts);
CheckResult check_tridiagonal_tangent(const SuiteOptions& opts);
CheckResult check_gradient_slice(const SuiteOptions& opts);
CheckResult check_hessian_rank_loci(const SuiteOptions& opts);

/// Remainder fits for the class-2 and class-4 theta expansions and the
/// class-3 gradient expansion in every direction a, one fresh generic point
/// and random direction per draw. Classes above g are skipped.
std::vector<SlopeReport> expansion_order_reports(int g, Rng& rng, const std::vector<double>& ladder,
                                                 int directions);

/// Flat JSON row for a slope report, with a diagnostic tail slope.
nlohmann::json report_row(const SlopeReport& r, int g);

/// Criteria 1-10 in order.
std::vector<CheckResult> run_suite(const SuiteOptions& opts);

}  // namespace thetalab
