#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

#include "config.hpp"

namespace cnls::cli {

enum ExitCode : int { kSuccess = 0, kError = 1, kNonAttainment = 2, kNegative = 3 };

struct CommandOptions {
  std::filesystem::path out_dir = ".";
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  /// Profile CSV for `rearrange`.
  std::filesystem::path input;
};

/// Each command writes its artifacts under options.out_dir and returns the
/// exit code. Library and I/O failures propagate as exceptions.
int cmd_solve(RunConfig config, const CommandOptions& options, std::ostream& log);
int cmd_certify(const RunConfig& config, const CommandOptions& options, std::ostream& log);
int cmd_check(RunConfig config, const CommandOptions& options, std::ostream& log);
int cmd_rearrange(const RunConfig& config, const CommandOptions& options, std::ostream& log);

}  // namespace cnls::cli
