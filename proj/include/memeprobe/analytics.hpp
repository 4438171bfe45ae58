#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "memeprobe/clustering.hpp"
#include "memeprobe/memescore.hpp"
#include "memeprobe/perception.hpp"
#include "memeprobe/properties.hpp"
#include "memeprobe/stats.hpp"

namespace memeprobe {

// ---------------------------------------------------------------------------
// Leaderboards

/// 1-based ranks by descending value; ties go to the smaller id.
std::vector<std::size_t> rank_descending(std::span<const double> values, std::span<const std::string> ids);

struct LeaderboardRow {
    std::string model_id;
    double accuracy = 0.0;
    std::size_t accuracy_rank = 0;
    std::vector<double> scores;
    std::vector<std::size_t> score_ranks;
    std::vector<long> deltas;  // accuracy rank - score rank; positive = moves up
};

struct Leaderboard {
    std::vector<std::string> score_names;
    std::vector<LeaderboardRow> rows;  // by accuracy rank
};

Leaderboard leaderboard(const MemeScoreTable& table);

// ---------------------------------------------------------------------------
// Dataset-level summaries and probe queries

struct LandscapeRow {
    std::string dataset;
    std::size_t n_probes = 0;
    std::array<double, 6> means{};  // indexed like kAllProperties
};

std::vector<LandscapeRow> dataset_landscape(const std::map<std::string, PropertySet>& property_sets);

enum class Direction { Highest, Lowest };

/// The k probe ids with the highest (or lowest) values, ties by probe id.
std::vector<std::string> top_k(std::span<const std::string> probe_ids, std::span<const double> values,
                               std::size_t k, Direction direction);

struct Heatmap {
    std::vector<std::string> labels;
    std::vector<std::size_t> order;  // row a shows original probe order[a]
    std::vector<double> values;      // row-major, labels.size() squared
};

/// Similarity reordered by descending `ordering` (ties by probe id).
Heatmap heatmap_export(const SimilarityMatrix& similarity, std::span<const std::string> probe_ids,
                       std::span<const double> ordering);

// ---------------------------------------------------------------------------
// Subsampling stability

struct StabilityOptions {
    std::vector<std::size_t> sizes{5, 10, 20, 30, 40, 50};
    std::size_t repeats = 10;
    std::uint64_t seed = 0;
    double tau = kDefaultTau;
    std::size_t kde_grid = kDefaultKdeGrid;
};

enum class StabilityMetric { Js, Spearman };

struct StabilityEntry {
    std::size_t size = 0;
    StabilityMetric metric = StabilityMetric::Js;
    std::string name;             // property name for js, score name for spearman
    std::optional<double> value;  // mean over valid pairs; empty when none
    std::size_t pairs = 0;
};

struct StabilityReport {
    std::vector<std::size_t> sizes;
    std::size_t repeats = 0;
    std::uint64_t seed = 0;
    std::vector<StabilityEntry> entries;

    [[nodiscard]] const StabilityEntry* find(std::size_t size, StabilityMetric metric, std::string_view name) const;
};

/// Ascending model columns of the subsample for (seed, size, repeat). Columns
/// are the `size` smallest keyed hashes; `attempt` reseeds the draw.
std::vector<std::size_t> draw_model_subset(std::span<const std::string> model_ids, std::size_t size,
                                           std::uint64_t seed, std::size_t repeat, std::size_t attempt = 0);

/// Reruns the probe pipeline on random model subsets and compares repeats
/// pairwise: JS divergence per property, Spearman per score over all parent
/// models. Bridge-derived entries skip repeats whose bridge vector is
/// constant; scores skip repeats whose weights degenerate.
StabilityReport subsample_stability(const PerceptionMatrix& matrix, const StabilityOptions& options,
                                    std::span<const MemeSpec> extra_specs = {});

}  // namespace memeprobe
