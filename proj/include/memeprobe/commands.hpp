#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "memeprobe/config.hpp"
#include "memeprobe/perception.hpp"

namespace memeprobe {

enum class InputFormat { Records, Matrix };

struct Invocation {
    std::string command;
    std::vector<std::filesystem::path> inputs;
    std::filesystem::path out_dir = ".";
    InputFormat format = InputFormat::Records;
    IngestPolicy policy = IngestPolicy::Strict;
    RunConfig config;

    // leaderboard, route
    std::optional<std::filesystem::path> scores;
    // topk, heatmap
    std::string property = "difficulty";
    std::size_t k = 10;
    bool lowest = false;
    // route
    double window_points = 0.5;
    std::size_t route_seeds = 10;
};

/// Names of the supported commands, in help order.
const std::vector<std::string>& command_names();

/// Runs one command. Files are written into `out_dir` atomically, each
/// starting with a `# memeprobe ...` provenance line. The resolved config is
/// echoed to `log`, and so is a diagnostic naming the failing module.
/// Returns the process exit code.
int run(const Invocation& invocation, std::ostream& log);

/// Loads one input according to `format`. Matrix files take their dataset id
/// from the file stem.
PerceptionMatrix load_matrix(const std::filesystem::path& path, InputFormat format, IngestPolicy policy);

}  // namespace memeprobe
