#pragma once

#include "qcrb/povmopt.hpp"
#include "qcrb/report.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace qcrb::cli {

/// Inclusive linspace written `lo:hi:steps`.
struct Range {
  double lo = 0.0;
  double hi = 0.0;
  int steps = 0;

  static Range parse(const std::string& text);
  std::vector<double> values() const;
};

struct RunConfig {
  std::string command;  // fisher | bounds | frontier | povm | sweep
  std::string family;
  std::string theta;    // comma-separated reals
  std::string g;        // row-major d x d, or g1,g2,g3 for d = 2; empty = identity
  std::string output;   // empty or "-" for stdout
  std::string format = "json";

  // povm / sweep
  SearchOptions search;
  bool search_requested = false;

  // frontier
  std::string frontier_kind = "single";  // single | asymptotic | w
  std::string y = "-2:2:41";
  std::string z = "-2:2:41";

  // sweep
  std::string sweep_param;  // r0 | n_copies
  std::string sweep_range;
};

/// Parses argv with the CLI grammar. Throws Error(Usage) on bad syntax; help
/// requests set `help_text` and return nullopt.
std::optional<RunConfig> parse_args(const std::vector<std::string>& args, std::string& help_text);

/// Computes the command's result object (the envelope's "result" member).
json compute_result(const RunConfig& config);

/// Echo of the configuration stored in the envelope.
json config_to_json(const RunConfig& config);

/// Writes one report. Returns the process exit status:
/// 0 ok, 1 usage, 2 domain/parameter, 3 numeric/search failure.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// argv entry point used by the executable and the Python module.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qcrb::cli
