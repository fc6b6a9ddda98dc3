#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"
#include "xychain/report.hpp"

namespace xychain::app {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitRegime = 3,
  kExitCheck = 4,
};

std::string tool_version();

int cmd_spectrum(const RunConfig& cfg, std::ostream& out);
int cmd_chain_coeffs(const RunConfig& cfg, std::ostream& out);
int cmd_manybody(const RunConfig& cfg, std::ostream& out);
int cmd_scan(const RunConfig& cfg, std::ostream& out, std::ostream& log);
/// CSV to `out`; the same records as JSON to `json_out` when given.
int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream* json_out = nullptr);

/// Every check `verify` runs for this configuration, in report order.
std::vector<CheckReport> verify_checks(const RunConfig& cfg);

/// Runs a command by name and maps library exceptions to exit codes,
/// printing the message to `err`.
int run(const std::string& command, const RunConfig& cfg, std::ostream& out, std::ostream& err,
        std::ostream* json_out = nullptr);

}  // namespace xychain::app
