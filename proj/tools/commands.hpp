#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "config.hpp"
#include "slm/errors.hpp"

namespace slm::cli {

std::string version_string();

/// Process exit status for an error category; 0 is reserved for success.
int exit_code(ErrorKind kind);

/// Prefixes relative output directories with $SLM_OUT_ROOT when it is set.
std::filesystem::path resolve_out_dir(const std::filesystem::path& dir);

struct SimulateOverrides {
  std::optional<std::size_t> runs;
  std::optional<std::uint64_t> seed;
  bool events = false;
};

void simulate(const RunConfig& config, const SimulateOverrides& overrides, const std::filesystem::path& out,
              unsigned jobs);
void kinetic(const RunConfig& config, const std::filesystem::path& out);
void hierarchy(const RunConfig& config, std::optional<ClosureRule> closure, std::optional<double> epsilon,
               const std::filesystem::path& out);
void stats(const std::filesystem::path& snapshots, const std::filesystem::path& out, unsigned jobs);
void scaling(const RunConfig& config, std::optional<ScalingMode> mode, const std::filesystem::path& out,
             unsigned jobs);
/// Prints the theory table to stdout; writes CSV and manifest only when `out` is given.
void analyze(const RunConfig& config, const std::optional<std::filesystem::path>& out);

/// Full command-line entry point; returns the exit status.
int run(int argc, char** argv);

}  // namespace slm::cli
