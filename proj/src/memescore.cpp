#include "memeprobe/memescore.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "memeprobe/error.hpp"

namespace memeprobe {

namespace {

constexpr const char* kModule = "memescore";

MemeFactor plain(Property p) { return {p, false}; }

void validate_spec(const MemeSpec& spec) {
    if (spec.factors.empty()) {
        throw Error(ErrorCode::InvalidArgument, kModule, "meme spec '" + spec.name + "' has no factors");
    }
    std::set<Property> seen;
    for (const auto& f : spec.factors) {
        if (!seen.insert(f.property).second) {
            throw Error(ErrorCode::InvalidArgument, kModule,
                        "meme spec '" + spec.name + "' repeats property " + std::string(property_name(f.property)));
        }
    }
}

}  // namespace

MemeFactor parse_factor(std::string_view text) {
    bool complemented = false;
    std::string_view name = text;
    if (name.starts_with("1-")) {
        complemented = true;
        name.remove_prefix(2);
    }
    const auto p = parse_property(name);
    if (!p) {
        throw Error(ErrorCode::InvalidArgument, kModule, "unknown property '" + std::string(text) + "'");
    }
    return {*p, complemented};
}

std::string format_factor(const MemeFactor& factor) {
    return (factor.complemented ? "1-" : "") + std::string(property_name(factor.property));
}

const std::vector<MemeSpec>& builtin_catalog() {
    using P = Property;
    static const std::vector<MemeSpec> catalog = {
        {"Difficulty", {plain(P::Difficulty)}},
        {"Uniqueness", {plain(P::Uniqueness)}},
        {"Risk", {plain(P::Risk)}},
        {"Surprise", {plain(P::Surprise)}},
        {"Typicality", {plain(P::Typicality)}},
        {"Bridge", {plain(P::Bridge)}},
        {"Mastery", {plain(P::Typicality), plain(P::Difficulty)}},
        {"Ingenuity", {plain(P::Uniqueness), plain(P::Surprise)}},
        {"Robustness", {plain(P::Bridge), plain(P::Risk)}},
        {"Caution", {plain(P::Typicality), {P::Difficulty, true}, plain(P::Risk)}},
    };
    return catalog;
}

std::vector<double> normalize_property(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n == 0) {
        throw Error(ErrorCode::InvalidArgument, kModule, "cannot normalize an empty property");
    }
    const bool constant = std::all_of(values.begin(), values.end(), [&](double v) { return v == values[0]; });
    if (constant) return std::vector<double>(n, 1.0);

    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    const double sigma = std::sqrt(var / static_cast<double>(n));
    if (sigma == 0.0) return std::vector<double>(n, 1.0);

    std::vector<double> z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = (values[i] - mean) / sigma;
    const double lowest = *std::min_element(z.begin(), z.end());
    for (double& v : z) v -= lowest;
    return z;
}

std::vector<double> probe_weights(const PropertySet& properties, const MemeSpec& spec) {
    validate_spec(spec);
    const std::size_t n = properties.probe_ids.size();
    std::vector<double> phi(n, 1.0);
    for (const auto& factor : spec.factors) {
        const auto& raw = properties[factor.property];
        if (raw.size() != n) {
            throw Error(ErrorCode::DimensionMismatch, kModule,
                        "property " + std::string(property_name(factor.property)) + " is missing or misaligned");
        }
        std::vector<double> input = raw;
        if (factor.complemented) {
            for (double& v : input) v = 1.0 - v;
        }
        const auto normalized = normalize_property(input);
        for (std::size_t i = 0; i < n; ++i) phi[i] *= normalized[i];
    }
    double total = 0.0;
    for (double v : phi) total += v;
    if (!(total > 0.0)) {
        throw Error(ErrorCode::DegenerateWeights, kModule, "all probe weights vanish for '" + spec.name + "'");
    }
    for (double& v : phi) v /= total;
    return phi;
}

std::vector<double> meme_score(const PerceptionMatrix& matrix, std::span<const double> weights) {
    const std::size_t n = matrix.n_probes();
    const std::size_t m = matrix.n_models();
    if (weights.size() != n) {
        throw Error(ErrorCode::DimensionMismatch, kModule,
                    "expected " + std::to_string(n) + " weights, got " + std::to_string(weights.size()));
    }
    double total = 0.0;
    for (double w : weights) total += w;
    if (std::abs(total - 1.0) > 1e-9) {
        throw Error(ErrorCode::InvalidArgument, kModule, "weights must sum to 1");
    }

    std::vector<double> out(m, 0.0);
    const bool uniform = std::all_of(weights.begin(), weights.end(), [&](double w) { return w == weights[0]; });
    if (uniform) {
        for (std::size_t j = 0; j < m; ++j) {
            out[j] = static_cast<double>(matrix.column_ones(j)) / static_cast<double>(n);
        }
        return out;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = matrix.row(i);
        for (std::size_t j = 0; j < m; ++j) {
            if ((row[j / 64] >> (j % 64)) & 1U) out[j] += weights[i];
        }
    }
    // dividing by the same-order total makes an all-correct column exactly 1
    for (double& v : out) v = std::min(v / total, 1.0);
    return out;
}

const std::vector<double>& MemeScoreTable::column(std::string_view name) const {
    if (name == "accuracy") return accuracy;
    for (std::size_t s = 0; s < score_names.size(); ++s) {
        if (score_names[s] == name) return scores[s];
    }
    throw Error(ErrorCode::InvalidArgument, kModule, "no score column '" + std::string(name) + "'");
}

MemeScoreTable score_catalog(const PerceptionMatrix& matrix, const PropertySet& properties,
                             std::span<const MemeSpec> extra) {
    if (properties.probe_ids != matrix.probe_ids()) {
        throw Error(ErrorCode::DimensionMismatch, kModule, "property set does not match the matrix probes");
    }
    MemeScoreTable table;
    table.model_ids = matrix.model_ids();
    for (const auto& a : accuracy(matrix)) table.accuracy.push_back(a.accuracy);

    std::vector<MemeSpec> specs = builtin_catalog();
    specs.insert(specs.end(), extra.begin(), extra.end());
    for (const auto& spec : specs) {
        if (std::find(table.score_names.begin(), table.score_names.end(), spec.name) != table.score_names.end()) {
            throw Error(ErrorCode::InvalidArgument, kModule, "duplicate score name '" + spec.name + "'");
        }
        table.score_names.push_back(spec.name);
        table.scores.push_back(meme_score(matrix, probe_weights(properties, spec)));
    }
    return table;
}

MemeScoreTable average_tables(std::span<const MemeScoreTable> tables) {
    if (tables.empty()) {
        throw Error(ErrorCode::EmptyInput, kModule, "no score tables to average");
    }
    const auto& names = tables.front().score_names;
    std::map<std::string, std::size_t> presence;
    for (const auto& t : tables) {
        if (t.score_names != names) {
            throw Error(ErrorCode::DimensionMismatch, kModule, "score tables have different columns");
        }
        for (const auto& id : t.model_ids) ++presence[id];
    }

    MemeScoreTable out;
    out.score_names = names;
    out.scores.assign(names.size(), {});
    for (const auto& [id, count] : presence) {
        if (count != tables.size()) continue;
        out.model_ids.push_back(id);
        double acc = 0.0;
        std::vector<double> sums(names.size(), 0.0);
        for (const auto& t : tables) {
            const auto j = static_cast<std::size_t>(
                std::find(t.model_ids.begin(), t.model_ids.end(), id) - t.model_ids.begin());
            acc += t.accuracy[j];
            for (std::size_t s = 0; s < names.size(); ++s) sums[s] += t.scores[s][j];
        }
        const auto k = static_cast<double>(tables.size());
        out.accuracy.push_back(acc / k);
        for (std::size_t s = 0; s < names.size(); ++s) out.scores[s].push_back(sums[s] / k);
    }
    if (out.model_ids.empty()) {
        throw Error(ErrorCode::EmptyAfterFiltering, kModule, "no model appears in every table");
    }
    return out;
}

}  // namespace memeprobe
