#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "rif/config.hpp"

namespace rif {

inline constexpr const char* kToolVersion = "0.3.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;
inline constexpr int kExitFail = 3;  // inconclusive regime or failed verdict

struct CliOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::string> out_dir;
  bool dump_tree = false;
};

int cmd_solve(RunConfig cfg, const CliOverrides& ov = {});
int cmd_limits(RunConfig cfg, const CliOverrides& ov = {});
int cmd_simulate(RunConfig cfg, const CliOverrides& ov = {});
int cmd_compare(RunConfig cfg, const CliOverrides& ov = {});
int cmd_phase(RunConfig cfg, const CliOverrides& ov = {});

// Loads the config, checks the experiment tag, dispatches, and maps errors to
// exit codes (1 usage, 2 runtime, 3 fail/inconclusive).
int run_cli(const std::string& subcommand, const std::string& config_path,
            const CliOverrides& ov);

}  // namespace rif
