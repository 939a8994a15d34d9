#pragma once

// The four CLI subcommands, callable in-process. Each returns an exit code
// and never throws.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "gcl/config.hpp"

namespace gcl::cli {

enum ExitCode : int { kPass = 0, kVerificationFailure = 1, kConfigurationError = 2, kRuntimeAbort = 3 };

struct CommandOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  unsigned jobs = 1;
};

/// Parallelism from GCL_JOBS, 1 when unset or invalid.
unsigned jobs_from_env();

int cmd_sample(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_verify(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_dynamics(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_diagnose(const CommandOptions& opts, std::ostream& out, std::ostream& err);

/// Runs one verification task against loaded ensembles.
IdentityReport run_task(const VerifyTask& task, const RunConfig& config,
                        const std::vector<GroundConfiguration>& centers,
                        const std::vector<MarkedConfiguration>& marked, Rng& rng);

}  // namespace gcl::cli
