#pragma once

#include "aquifer/config.hpp"
#include "aquifer/output.hpp"
#include "aquifer/verify.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace aquifer {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitOther = 1,
  kExitConfig = 2,
  kExitSolver = 3,
  kExitVerify = 4,
  kExitIo = 5,
};

struct PhaseTiming {
  std::string phase;
  double seconds = 0.0;
};

struct RunReport {
  std::vector<LedgerRow> rows;  // one per time step
  RunSummary summary;
  double tau = 0.0;
  double threshold = 0.0;
  int negative_steps = 0;  // steps with some c < 0
  std::vector<PhaseTiming> timings;
  std::vector<std::string> written;  // output files, in write order
};

/// Solves Darcy, runs transport and writes c_/flux_/fields_ files at the
/// cadence (and the last step), then ledger.csv and report.txt. Solver
/// failures are rethrown as SolverError naming the step.
RunReport cmd_run(const ScenarioConfig& config);

/// Manufactured Darcy study on the configured meshes; writes
/// convergence.csv into the output directory and returns the table.
DarcyStudy cmd_darcy_study(const ScenarioConfig& config);

/// Runs the property suites, printing one line per suite; true if all pass.
bool cmd_verify(std::uint64_t seed, const std::string& filter, std::ostream& out);

/// Text of report.txt.
std::string format_report(const ScenarioConfig& config, const RunReport& report);

}  // namespace aquifer
