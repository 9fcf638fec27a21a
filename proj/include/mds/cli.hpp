// Run configuration and the `mds` command-line front end.
#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "mds/common.hpp"

namespace mds {

enum ExitCode : int { kExitPass = 0, kExitCheckFailure = 1, kExitUsage = 2, kExitNumeric = 3 };

struct RunConfig {
  std::string subcommand;  // region | moment | polymoment | check | recipe-eval
  std::string suite;       // check: gauss | fe | identities | recipe
  int k = 1;
  std::vector<cplx> S;
  std::vector<double> x_list;
  double eta = 1.5;      // polymoment: N = n_scale * X^eta
  double n_scale = 1.0;
  std::string f_id = "bump";
  std::string w_id = "bump";
  int max_swap = -1;
  int workers = 1;
  u64 seed = 1;
  std::map<std::string, double> tolerance;  // overrides by field name
  std::string golden;
  std::string out;
  bool dry_run = false;
  bool inject_sign_error = false;  // check fe: wrong gamma factor (negative control)
};

/// Canonical key=value text; parse(to_config_text(c)) reproduces it byte for byte.
std::string to_config_text(const RunConfig& c);
/// Throws DomainError on unknown keys or malformed values.
RunConfig parse_config_text(const std::string& text);

/// `re[,im]` entries separated by ';'.
std::vector<cplx> parse_point_list(const std::string& s);
std::string format_point_list(const std::vector<cplx>& S);
/// Comma or ';' separated reals.
std::vector<double> parse_real_list(const std::string& s);

/// Shortest text that reads back to the same double.
std::string format_double(double x);

/// Applies overrides to the process-wide tolerance record; DomainError on
/// unknown names.
void apply_tolerances(const std::map<std::string, double>& overrides);
/// "name=value" lines for every tolerance field.
std::string describe_tolerances();

/// Full command line (argv[0] included). Output and diagnostics go to the
/// given streams; the return value is one of ExitCode.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mds
