#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace thetalab::cli {

/// Raised for inputs the command cannot interpret; maps to exit code 2.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct JobConfig {
  std::string command;
  std::optional<int> g;
  std::uint64_t seed = 7;
  std::optional<double> tol;
  std::vector<double> ladder;  // empty means the default 2^-3..2^-9
  std::string out;             // empty means stdout
  std::string format = "json";
  std::string tau_path;

  // command-specific
  std::string action;        // char
  std::string text;          // char
  std::string group = "Gg";  // orbit
  std::string seed_char;     // orbit
  bool list = false;         // orbit
  std::string characteristic;  // theta-eval
  std::string deriv;           // theta-eval
  bool extended = false;       // theta-eval
  std::string bracket;         // expand-verify
  int directions = 10;         // expand-verify
  int points = 5;              // grad-verify, hess-minor
  std::string which = "D12j";  // hess-minor
  int j = 0;                   // hess-minor
  int k = 0;                   // hess-minor
  bool diagonal = false;       // loci-test
};

/// Command output before the common envelope fields are added. `rows` holds
/// the flat records used for CSV output.
struct Report {
  bool pass = true;
  nlohmann::json body = nlohmann::json::object();
  nlohmann::json rows = nlohmann::json::array();
  bool rows_in_json = false;  // tabular commands repeat the rows in JSON output
  bool uses_ladder = false;
};

/// "2^-3..2^-9" or a comma-separated list of decreasing positive numbers.
std::vector<double> parse_ladder(const std::string& text);

Report run_char(const JobConfig& cfg);
Report run_orbit(const JobConfig& cfg);
Report run_theta_eval(const JobConfig& cfg);
Report run_expand_verify(const JobConfig& cfg);
Report run_grad_verify(const JobConfig& cfg);
Report run_hess_minor(const JobConfig& cfg);
Report run_loci_test(const JobConfig& cfg);
Report run_report_all(const JobConfig& cfg);

/// Adds schema, command, seed, g, timestamp and pass to the body.
nlohmann::json envelope(const JobConfig& cfg, const Report& report, const std::string& timestamp);

/// Header from the union of row keys in first-seen order; one line per row.
std::string to_csv(const nlohmann::json& rows);

}  // namespace thetalab::cli
