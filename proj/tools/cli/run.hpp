#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cli/config.hpp"

namespace atmq::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitOther = 1,
    kExitConfig = 2,
    kExitNumerical = 3,
    kExitEmptySelection = 4,
};

struct Artifact {
    std::string file;
    std::size_t rows = 0;
};

struct RunOutcome {
    std::vector<Artifact> artifacts;
    /// True when every sweep point was dropped by an empty selection.
    bool all_selections_empty = false;
};

/// Computes the scenario and writes its artifacts (CSV or JSON plus
/// manifest.json) into cfg.out_dir.
RunOutcome run(const RunConfig& cfg);

/// Full command-line flow: load, apply overrides, run, report errors as a
/// one-line JSON object on `err`. Returns the process exit code.
int run_command(const std::filesystem::path& config_path, const std::optional<std::filesystem::path>& out_dir,
                const std::optional<std::uint64_t>& seed_override, std::ostream& err);

}  // namespace atmq::cli
