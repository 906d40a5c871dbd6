#pragma once

// Subcommands of the chernflow tool. Each returns the process exit code and
// writes human-readable output to `out` and diagnostics to `err`.
//
// Exit codes: 0 success, 1 configuration/usage error, 2 check or
// construction failure, 3 flow did not converge.

#include <filesystem>
#include <iosfwd>
#include <string_view>

namespace chernflow {

struct CommandOptions {
  std::filesystem::path config;
  std::filesystem::path out_dir;  // empty: "<config stem>.out" next to the config
  bool strict = false;
  bool canonical = false;
  unsigned jobs = 0;  // sweep workers; 0: hardware concurrency
};

int cmd_run(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_verify(std::string_view level, std::ostream& out, std::ostream& err);
int cmd_supersolution(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_sweep(const CommandOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace chernflow
