#pragma once

#include "config.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace anosov::lab {

std::string tool_version();

/// The fixed set of experiment subcommands.
const std::vector<std::string>& subcommands();

struct RunRequest {
    std::string subcommand;
    std::filesystem::path config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::optional<std::filesystem::path> out;
};

enum class Verdict { none, pass, fail };

struct RunOutcome {
    Verdict verdict = Verdict::none;
    std::string detail;
    std::filesystem::path out_dir;
};

/// Parses the configuration, runs one experiment and writes config.txt,
/// summary.json and the experiment's CSV files into the output directory.
/// Throws ConfigError for configuration problems and anosov::Error for
/// failed preconditions.
RunOutcome run(const RunRequest& request, std::ostream& log);

/// Same, from configuration text already in memory.
RunOutcome run_text(const RunRequest& request, const std::string& config_text, std::ostream& log);

/// 0 for pass or no verdict, 1 for fail.
int exit_code(const RunOutcome& outcome) noexcept;

}  // namespace anosov::lab
