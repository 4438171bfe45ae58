#include "memeprobe/analytics.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "memeprobe/analysis.hpp"
#include "memeprobe/error.hpp"
#include "memeprobe/hashing.hpp"

namespace memeprobe {

namespace {

constexpr const char* kModule = "analytics";

bool is_constant(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

// saturating C(n, k)
std::size_t choose(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::size_t result = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        const std::size_t num = n - k + i;
        if (result > std::numeric_limits<std::size_t>::max() / num) return std::numeric_limits<std::size_t>::max();
        result = result * num / i;
    }
    return result;
}

bool uses_bridge(const MemeSpec& spec) {
    return std::any_of(spec.factors.begin(), spec.factors.end(),
                       [](const MemeFactor& f) { return f.property == Property::Bridge; });
}

struct RepeatResult {
    PropertySet properties;
    bool bridge_degenerate = false;
    std::vector<std::optional<std::vector<double>>> scores;  // per spec, over parent models
};

}  // namespace

std::vector<std::size_t> rank_descending(std::span<const double> values, std::span<const std::string> ids) {
    if (values.size() != ids.size()) {
        throw Error(ErrorCode::DimensionMismatch, kModule, "values and ids differ in length");
    }
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (values[a] != values[b]) return values[a] > values[b];
        return ids[a] < ids[b];
    });
    std::vector<std::size_t> ranks(values.size());
    for (std::size_t r = 0; r < order.size(); ++r) ranks[order[r]] = r + 1;
    return ranks;
}

Leaderboard leaderboard(const MemeScoreTable& table) {
    if (table.model_ids.empty()) {
        throw Error(ErrorCode::EmptyInput, kModule, "score table has no models");
    }
    const std::size_t m = table.n_models();
    const auto acc_ranks = rank_descending(table.accuracy, table.model_ids);
    std::vector<std::vector<std::size_t>> score_ranks;
    for (const auto& column : table.scores) score_ranks.push_back(rank_descending(column, table.model_ids));

    Leaderboard out;
    out.score_names = table.score_names;
    out.rows.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        LeaderboardRow& row = out.rows[acc_ranks[j] - 1];
        row.model_id = table.model_ids[j];
        row.accuracy = table.accuracy[j];
        row.accuracy_rank = acc_ranks[j];
        for (std::size_t s = 0; s < table.scores.size(); ++s) {
            row.scores.push_back(table.scores[s][j]);
            row.score_ranks.push_back(score_ranks[s][j]);
            row.deltas.push_back(static_cast<long>(acc_ranks[j]) - static_cast<long>(score_ranks[s][j]));
        }
    }
    return out;
}

std::vector<LandscapeRow> dataset_landscape(const std::map<std::string, PropertySet>& property_sets) {
    std::vector<LandscapeRow> out;
    for (const auto& [dataset, set] : property_sets) {
        LandscapeRow row;
        row.dataset = dataset;
        row.n_probes = set.probe_ids.size();
        for (std::size_t p = 0; p < kAllProperties.size(); ++p) {
            const auto& values = set[kAllProperties[p]];
            if (values.size() != row.n_probes || values.empty()) {
                throw Error(ErrorCode::DimensionMismatch, kModule,
                            "dataset '" + dataset + "' lacks property " +
                                std::string(property_name(kAllProperties[p])));
            }
            row.means[p] = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
        }
        out.push_back(std::move(row));
    }
    return out;
}

std::vector<std::string> top_k(std::span<const std::string> probe_ids, std::span<const double> values,
                               std::size_t k, Direction direction) {
    if (probe_ids.size() != values.size()) {
        throw Error(ErrorCode::DimensionMismatch, kModule, "values and probe ids differ in length");
    }
    if (k < 1 || k > values.size()) {
        throw Error(ErrorCode::KOutOfRange, kModule,
                    "k = " + std::to_string(k) + " outside 1.." + std::to_string(values.size()));
    }
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (values[a] != values[b]) {
            return direction == Direction::Highest ? values[a] > values[b] : values[a] < values[b];
        }
        return probe_ids[a] < probe_ids[b];
    });
    std::vector<std::string> out;
    for (std::size_t r = 0; r < k; ++r) out.push_back(probe_ids[order[r]]);
    return out;
}

Heatmap heatmap_export(const SimilarityMatrix& similarity, std::span<const std::string> probe_ids,
                       std::span<const double> ordering) {
    const std::size_t n = similarity.size();
    if (probe_ids.size() != n || ordering.size() != n) {
        throw Error(ErrorCode::DimensionMismatch, kModule, "ordering does not match the similarity matrix");
    }
    Heatmap out;
    out.order.resize(n);
    std::iota(out.order.begin(), out.order.end(), 0);
    std::sort(out.order.begin(), out.order.end(), [&](std::size_t a, std::size_t b) {
        if (ordering[a] != ordering[b]) return ordering[a] > ordering[b];
        return probe_ids[a] < probe_ids[b];
    });
    out.values.resize(n * n);
    for (std::size_t a = 0; a < n; ++a) {
        out.labels.push_back(probe_ids[out.order[a]]);
        for (std::size_t b = 0; b < n; ++b) out.values[a * n + b] = similarity(out.order[a], out.order[b]);
    }
    return out;
}

const StabilityEntry* StabilityReport::find(std::size_t size, StabilityMetric metric, std::string_view name) const {
    for (const auto& e : entries) {
        if (e.size == size && e.metric == metric && e.name == name) return &e;
    }
    return nullptr;
}

std::vector<std::size_t> draw_model_subset(std::span<const std::string> model_ids, std::size_t size,
                                           std::uint64_t seed, std::size_t repeat, std::size_t attempt) {
    if (size == 0 || size > model_ids.size()) {
        throw Error(ErrorCode::SizeExceedsModels, kModule,
                    "subsample size " + std::to_string(size) + " outside 1.." + std::to_string(model_ids.size()));
    }
    std::vector<std::pair<std::uint64_t, std::size_t>> keyed;
    keyed.reserve(model_ids.size());
    for (std::size_t j = 0; j < model_ids.size(); ++j) {
        keyed.emplace_back(keyed_hash({seed, size, repeat, attempt, fnv1a64(model_ids[j])}), j);
    }
    std::sort(keyed.begin(), keyed.end());
    std::vector<std::size_t> columns;
    for (std::size_t r = 0; r < size; ++r) columns.push_back(keyed[r].second);
    std::sort(columns.begin(), columns.end());
    return columns;
}

StabilityReport subsample_stability(const PerceptionMatrix& matrix, const StabilityOptions& options,
                                    std::span<const MemeSpec> extra_specs) {
    if (options.repeats < 2) {
        throw Error(ErrorCode::InvalidArgument, kModule, "stability needs at least two repeats");
    }
    if (matrix.n_models() < 2) {
        throw Error(ErrorCode::InvalidArgument, kModule, "stability needs at least two models");
    }
    if (options.sizes.empty()) {
        throw Error(ErrorCode::InvalidArgument, kModule, "no subsample sizes given");
    }
    for (std::size_t size : options.sizes) {
        if (size == 0 || size > matrix.n_models()) {
            throw Error(ErrorCode::SizeExceedsModels, kModule,
                        "subsample size " + std::to_string(size) + " exceeds " +
                            std::to_string(matrix.n_models()) + " models");
        }
    }

    std::vector<MemeSpec> specs = builtin_catalog();
    specs.insert(specs.end(), extra_specs.begin(), extra_specs.end());

    StabilityReport report;
    report.sizes = options.sizes;
    report.repeats = options.repeats;
    report.seed = options.seed;

    for (std::size_t size : options.sizes) {
        const std::size_t distinct = choose(matrix.n_models(), size);
        std::vector<std::vector<std::size_t>> drawn;
        std::vector<RepeatResult> results;
        for (std::size_t repeat = 0; repeat < options.repeats; ++repeat) {
            std::vector<std::size_t> columns;
            for (std::size_t attempt = 0;; ++attempt) {
                columns = draw_model_subset(matrix.model_ids(), size, options.seed, repeat, attempt);
                const bool seen = std::find(drawn.begin(), drawn.end(), columns) != drawn.end();
                if (!seen || drawn.size() >= distinct) break;
            }
            drawn.push_back(columns);

            const PerceptionMatrix sub = subsample_columns(matrix, columns);
            RepeatResult result;
            result.properties = compute_properties(sub, options.tau);
            result.bridge_degenerate = is_constant(result.properties[Property::Bridge]);
            for (const auto& spec : specs) {
                if (result.bridge_degenerate && uses_bridge(spec)) {
                    result.scores.emplace_back();
                    continue;
                }
                try {
                    result.scores.emplace_back(meme_score(matrix, probe_weights(result.properties, spec)));
                } catch (const Error& e) {
                    if (e.code() != ErrorCode::DegenerateWeights) throw;
                    result.scores.emplace_back();
                }
            }
            results.push_back(std::move(result));
        }

        for (Property p : kAllProperties) {
            StabilityEntry entry{size, StabilityMetric::Js, std::string(property_name(p)), std::nullopt, 0};
            double sum = 0.0;
            for (std::size_t r1 = 0; r1 < results.size(); ++r1) {
                for (std::size_t r2 = r1 + 1; r2 < results.size(); ++r2) {
                    if (p == Property::Bridge && (results[r1].bridge_degenerate || results[r2].bridge_degenerate)) {
                        continue;
                    }
                    sum += js_divergence(results[r1].properties[p], results[r2].properties[p], options.kde_grid);
                    ++entry.pairs;
                }
            }
            if (entry.pairs > 0) entry.value = sum / static_cast<double>(entry.pairs);
            report.entries.push_back(std::move(entry));
        }
        for (std::size_t s = 0; s < specs.size(); ++s) {
            StabilityEntry entry{size, StabilityMetric::Spearman, specs[s].name, std::nullopt, 0};
            double sum = 0.0;
            for (std::size_t r1 = 0; r1 < results.size(); ++r1) {
                for (std::size_t r2 = r1 + 1; r2 < results.size(); ++r2) {
                    const auto& a = results[r1].scores[s];
                    const auto& b = results[r2].scores[s];
                    if (!a || !b) continue;
                    const auto rho = spearman(*a, *b);
                    if (!rho) continue;
                    sum += *rho;
                    ++entry.pairs;
                }
            }
            if (entry.pairs > 0) entry.value = sum / static_cast<double>(entry.pairs);
            report.entries.push_back(std::move(entry));
        }
    }
    return report;
}

}  // namespace memeprobe
