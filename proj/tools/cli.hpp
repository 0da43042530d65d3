#pragma once

// qctl command-line front end. The commands are exposed as a library so the
// test suites can drive them in-process.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace qctl::cli {

enum ExitCode : int { kSuccess = 0, kGoalNotReached = 1, kInvalidInput = 2 };

struct Invocation {
  std::string command;  ///< synth | controllability | ft-analyze | simulate | pulse
  std::filesystem::path config;
  std::filesystem::path out = ".";
  std::optional<std::uint64_t> seed;  ///< overrides every seed in the config
};

/// Runs one job; diagnostics go to `log`. Never throws.
int run(const Invocation& inv, std::ostream& out, std::ostream& log);

/// argv front end (CLI11).
int main_entry(int argc, char** argv);

}  // namespace qctl::cli
