#pragma once

#include <iosfwd>

namespace chs {

/// Command-line entry point:
///   simulate <config>   run a scenario, write records.csv and CHSNAP snapshots
///   converge <config>   temporal convergence table as CSV
///   kernels <config>    DOC/DCC kernels and identity residuals as CSV
///   check <config>      run the invariant suite (or audit --records FILE)
/// Returns 0 on success, 1 on usage/validation failure, 2 on runtime error.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace chs
