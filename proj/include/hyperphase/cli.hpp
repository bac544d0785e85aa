#pragma once

// Command-line front end. Exit codes: 0 success, 2 parse or precondition
// failure, 3 solver or profile failure, 4 verification failure.

#include <ostream>
#include <string>
#include <vector>

#include "hyperphase/config.hpp"
#include "hyperphase/grid.hpp"
#include "hyperphase/profile1d.hpp"

namespace hyperphase {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode { kExitOk = 0, kExitParse = 2, kExitSolver = 3, kExitVerify = 4 };

/// "# hyperphase <version> config=<hash> command=<command>"
std::string csv_header_line(const RunConfig& cfg);

/// Rows (i, j, x, y, u...) for every grid node, 17 significant digits.
void write_field_csv(std::ostream& os, const RunConfig& cfg, const std::vector<std::string>& names,
                     const std::vector<const Field*>& fields);

void write_profile_csv(std::ostream& os, const RunConfig& cfg, const ProfileSolution& p);

/// Dispatches cfg.command; summaries go to `log`.
int run(const RunConfig& cfg, std::ostream& log);

/// Value of HYPERPHASE_THREADS; null means 1. Computation is serial, so
/// the count is validated and echoed but not used.
int parse_thread_count(const char* value);

int cli_main(int argc, char** argv);

}  // namespace hyperphase
