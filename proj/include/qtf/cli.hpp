#ifndef QTF_CLI_HPP
#define QTF_CLI_HPP

#include <cstdint>
#include <string>

#include "qtf/config.hpp"

namespace qtf {
namespace cli {

// Exit codes: 0 clean, 1 config/artifact errors, 2 instability abort,
// 3 I/O errors, 4 relaxation not converged, 5 analyze not converged.

// Executes a coupled run; writes energy.csv, snapshots + snapshots.csv,
// and report.json under cfg.out.
int cmd_run(const RunConfig& cfg);

// Same with the flow solve disabled (pure gradient flow); exits 0 only
// if the final critical-point residual meets the threshold.
int cmd_relax(const RunConfig& cfg);

// Cross-module identity suites; prints a pass/fail table.
int cmd_verify(uint64_t seed);

// Reads a run directory, writes equilibrium.json and decay.csv.
int cmd_analyze(const std::string& run_dir);

}  // namespace cli
}  // namespace qtf

#endif
