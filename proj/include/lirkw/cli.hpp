#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lirkw/tableau.hpp"

namespace lirkw::cli {

/// Exit codes shared by all subcommands.
inline constexpr int kOk = 0;
inline constexpr int kCheckFailed = 1;  // residual/slope/tolerance miss
inline constexpr int kUsage = 2;        // bad arguments or unparseable input
inline constexpr int kNonfinite = 3;    // integration blew up

/// Runs the command-line tool on the given arguments (without argv[0]).
/// All human-readable output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Tableau registry used by the subcommands: "table1", "table2" (with the
/// three family parameters), and "table1-broken" (output weights scaled by
/// 1.1, a deliberate defect for exercising failure paths). Any other name is
/// treated as a path to a tableau file. Throws ParseError / UnknownProblem.
Tableau tableau_by_name(const std::string& name, double gam = 0.25, double gam54 = -0.5,
                        double a43 = 0.3);

}  // namespace lirkw::cli
