#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"
#include "records.hpp"

namespace leocrlb::app {

enum class Command { Bound, Identifiability, Sweep };

Command command_from_string(const std::string& s);
const char* to_string(Command c);

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNotIdentifiable = 3;
inline constexpr int kExitNumerical = 4;

struct RunResult {
    int exit_code{kExitOk};
    std::vector<ResultRecord> records;
    std::string diagnostics;
};

/// Evaluates a command. Throws ConfigError for unusable settings and
/// NumericalError for non-finite results.
RunResult run_command(const RunConfig& cfg, Command command);

/// CSV or JSON document for the configured format.
std::string render_output(const RunConfig& cfg, Command command, const RunResult& result);

/// Full command-line entry point. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace leocrlb::app
