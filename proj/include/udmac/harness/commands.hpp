#pragma once

// Harness subcommands. Each one validates the whole configuration first,
// computes its tables (row order fixed by the sweep, never by scheduling) and
// leaves writing to write_outputs.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "udmac/harness/config.hpp"
#include "udmac/harness/csv.hpp"
#include "udmac/simd/red_kernel.hpp"

namespace udmac::harness {

struct RunOptions {
  int jobs = 1;
  simd::KernelPreference kernel = simd::KernelPreference::Auto;
};

struct CommandOutput {
  std::string command;
  std::vector<Table> tables;
  std::vector<std::string> summary;  // human-readable lines for stdout
};

CommandOutput validate_prob(const ExperimentConfig& cfg, const RunOptions& opts = {});
CommandOutput throughput(const ExperimentConfig& cfg, const RunOptions& opts = {});
CommandOutput freeze_tradeoff(const ExperimentConfig& cfg, const RunOptions& opts = {});
CommandOutput simulate(const ExperimentConfig& cfg, const RunOptions& opts = {});
CommandOutput compare(const ExperimentConfig& cfg, const RunOptions& opts = {});

std::vector<std::string> command_names();
CommandOutput run_command(std::string_view name, const ExperimentConfig& cfg, const RunOptions& opts = {});

// Resolved config, seeds and tool version; no timestamps, so reruns match.
std::string manifest_text(const CommandOutput& out, const ExperimentConfig& cfg, const RunOptions& opts);

// Creates `dir`, writes every table as CSV plus `<command>.manifest.ini`.
std::vector<std::filesystem::path> write_outputs(const CommandOutput& out, const ExperimentConfig& cfg,
                                                 const RunOptions& opts, const std::filesystem::path& dir);

// --out wins, then $UDMAC_OUT_DIR, then ./results.
std::filesystem::path resolve_out_dir(const std::optional<std::string>& flag);

}  // namespace udmac::harness
