#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "memeprobe/clustering.hpp"
#include "memeprobe/memescore.hpp"
#include "memeprobe/stats.hpp"

namespace memeprobe {

inline constexpr const char* kVersion = "1.0.0";

struct RunConfig {
    double tau = kDefaultTau;
    std::size_t kde_grid = kDefaultKdeGrid;
    std::vector<std::size_t> stability_sizes{5, 10, 20, 30, 40, 50};
    std::size_t stability_repeats = 10;
    std::uint64_t seed = 0;
    std::vector<MemeSpec> score_specs;  // appended to the built-in catalog
};

/// Values given on the command line; each one replaces the config file's.
struct ConfigOverrides {
    std::optional<double> tau;
    std::optional<std::size_t> kde_grid;
    std::optional<std::vector<std::size_t>> stability_sizes;
    std::optional<std::size_t> stability_repeats;
    std::optional<std::uint64_t> seed;
    std::vector<MemeSpec> score_specs;
};

/// JSON object with any of the RunConfig keys. Score specs are written as
/// {"name": "...", "factors": ["typicality", "1-difficulty"]}. Unknown keys
/// are rejected.
RunConfig parse_config(std::string_view json_text);
RunConfig load_config(const std::filesystem::path& path);

void apply_overrides(RunConfig& config, const ConfigOverrides& overrides);

/// Throws InvalidArgument for out-of-range values.
void validate(const RunConfig& config);

/// "NAME=f1,f2,...", e.g. "Careful=typicality,1-risk".
MemeSpec parse_spec_argument(std::string_view text);

/// One line, stable across runs, listing every resolved field.
std::string describe(const RunConfig& config);

}  // namespace memeprobe
