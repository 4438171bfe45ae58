#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "memeprobe/perception.hpp"
#include "memeprobe/properties.hpp"

namespace memeprobe {

struct MemeFactor {
    Property property;
    bool complemented = false;  // use 1 - value before normalization
};

struct MemeSpec {
    std::string name;
    std::vector<MemeFactor> factors;
};

/// Parses "difficulty", "1-difficulty", ... into a factor.
MemeFactor parse_factor(std::string_view text);
std::string format_factor(const MemeFactor& factor);

/// The ten scores: six single-property scores, Mastery, Ingenuity,
/// Robustness and Caution.
const std::vector<MemeSpec>& builtin_catalog();

/// z-score with population sigma, shifted so the minimum is 0. A constant
/// vector maps to all ones.
std::vector<double> normalize_property(std::span<const double> values);

/// Product of normalized factors, rescaled to sum to 1. Throws
/// DegenerateWeights if every product is zero.
std::vector<double> probe_weights(const PropertySet& properties, const MemeSpec& spec);

/// sum_i w_i * P_ij for every model j.
std::vector<double> meme_score(const PerceptionMatrix& matrix, std::span<const double> weights);

struct MemeScoreTable {
    std::vector<std::string> model_ids;
    std::vector<double> accuracy;
    std::vector<std::string> score_names;
    std::vector<std::vector<double>> scores;  // [score][model]

    [[nodiscard]] std::size_t n_models() const noexcept { return model_ids.size(); }
    /// Throws InvalidArgument for an unknown name.
    [[nodiscard]] const std::vector<double>& column(std::string_view name) const;
};

/// Built-in catalog followed by `extra` specs.
MemeScoreTable score_catalog(const PerceptionMatrix& matrix, const PropertySet& properties,
                             std::span<const MemeSpec> extra = {});

/// Per (model, score) unweighted mean across tables, restricted to models
/// present in every table. Score columns must match.
MemeScoreTable average_tables(std::span<const MemeScoreTable> tables);

}  // namespace memeprobe
