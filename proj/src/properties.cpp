#include "memeprobe/properties.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "memeprobe/error.hpp"

namespace memeprobe {

namespace {

constexpr const char* kModule = "properties";

constexpr std::array<std::string_view, 6> kNames = {
    "difficulty", "risk", "surprise", "uniqueness", "typicality", "bridge",
};

void check_index(const PerceptionMatrix& matrix, std::size_t i) {
    if (i >= matrix.n_probes()) {
        throw Error(ErrorCode::IndexOutOfRange, kModule,
                    "probe index " + std::to_string(i) + " out of range");
    }
}

/// Packed failure rows: bit j set iff model j fails the probe.
std::vector<std::uint64_t> failure_words(const PerceptionMatrix& matrix) {
    const std::size_t w = matrix.words_per_row();
    std::vector<std::uint64_t> out(matrix.n_probes() * w);
    for (std::size_t i = 0; i < matrix.n_probes(); ++i) {
        const auto row = matrix.row(i);
        for (std::size_t q = 0; q < w; ++q) {
            out[i * w + q] = ~row[q];
        }
        out[i * w + w - 1] &= matrix.tail_mask();
    }
    return out;
}

std::size_t and_count(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) noexcept {
    std::size_t c = 0;
    for (std::size_t q = 0; q < words; ++q) c += static_cast<std::size_t>(std::popcount(a[q] & b[q]));
    return c;
}

// CF from integer counts: cowrong = |F_i ∩ F_k|, fi = |F_i|, fk = |F_k|.
double certainty_from_counts(std::size_t cowrong, std::size_t fi, std::size_t fk, std::size_t m) noexcept {
    const double dk = static_cast<double>(fk) / static_cast<double>(m);
    if (fi == 0) {
        // conditional rate is 0 by convention
        return fk == 0 ? 0.0 : -1.0;
    }
    const double p = static_cast<double>(cowrong) / static_cast<double>(fi);
    // branch on cowrong/fi vs fk/m in exact integer arithmetic
    const std::uint64_t lhs = static_cast<std::uint64_t>(cowrong) * m;
    const std::uint64_t rhs = static_cast<std::uint64_t>(fk) * fi;
    if (lhs == rhs) return 0.0;
    if (lhs > rhs) return (p - dk) / (1.0 - dk);
    return (p - dk) / dk;
}

std::size_t cowrong_count(const PerceptionMatrix& matrix, std::size_t i, std::size_t k) noexcept {
    const auto ri = matrix.row(i);
    const auto rk = matrix.row(k);
    const std::size_t w = matrix.words_per_row();
    std::size_t both = 0;
    for (std::size_t q = 0; q < w; ++q) {
        std::uint64_t bits = ~ri[q] & ~rk[q];
        if (q + 1 == w) bits &= matrix.tail_mask();
        both += static_cast<std::size_t>(std::popcount(bits));
    }
    return both;
}

}  // namespace

std::string_view property_name(Property p) noexcept { return kNames[static_cast<std::size_t>(p)]; }

std::optional<Property> parse_property(std::string_view name) noexcept {
    for (std::size_t i = 0; i < kNames.size(); ++i) {
        if (kNames[i] == name) return kAllProperties[i];
    }
    return std::nullopt;
}

SimilarityMatrix::SimilarityMatrix(std::size_t n, std::size_t models, std::vector<std::uint32_t> agreements)
    : n_(n), models_(models), agreements_(std::move(agreements)) {
    if (agreements_.size() != n_ * n_) {
        throw Error(ErrorCode::DimensionMismatch, kModule, "similarity buffer is not n x n");
    }
    if (models_ == 0) {
        throw Error(ErrorCode::InvalidArgument, kModule, "similarity over zero models");
    }
}

std::uint32_t SimilarityMatrix::threshold_count(double tau) const noexcept {
    for (std::uint32_t c = 0; c <= models_; ++c) {
        if (static_cast<double>(c) / static_cast<double>(models_) >= tau) return c;
    }
    return static_cast<std::uint32_t>(models_ + 1);
}

PropertyVector difficulty(const PerceptionMatrix& matrix) {
    const std::size_t m = matrix.n_models();
    PropertyVector out{Property::Difficulty, std::vector<double>(matrix.n_probes())};
    for (std::size_t i = 0; i < matrix.n_probes(); ++i) {
        out.values[i] = static_cast<double>(m - matrix.row_ones(i)) / static_cast<double>(m);
    }
    return out;
}

double conditional_cowrong(const PerceptionMatrix& matrix, std::size_t i, std::size_t k) {
    check_index(matrix, i);
    check_index(matrix, k);
    const std::size_t fi = matrix.n_models() - matrix.row_ones(i);
    if (fi == 0) return 0.0;
    return static_cast<double>(cowrong_count(matrix, i, k)) / static_cast<double>(fi);
}

double certainty_factor(const PerceptionMatrix& matrix, std::size_t i, std::size_t k) {
    check_index(matrix, i);
    check_index(matrix, k);
    if (i == k) return 0.0;
    const std::size_t m = matrix.n_models();
    const std::size_t fi = m - matrix.row_ones(i);
    const std::size_t fk = m - matrix.row_ones(k);
    return certainty_from_counts(cowrong_count(matrix, i, k), fi, fk, m);
}

double coverage_factor(const PerceptionMatrix& matrix, std::size_t i) {
    check_index(matrix, i);
    const std::size_t m = matrix.n_models();
    const std::size_t fi = m - matrix.row_ones(i);
    return std::log(1.0 + static_cast<double>(fi)) / std::log(1.0 + static_cast<double>(m));
}

PropertyVector risk(const PerceptionMatrix& matrix) {
    const std::size_t n = matrix.n_probes();
    const std::size_t m = matrix.n_models();
    if (n < 2) {
        throw Error(ErrorCode::SingleProbeMatrix, kModule, "risk needs at least two probes");
    }
    const std::size_t w = matrix.words_per_row();
    const auto fails = failure_words(matrix);
    std::vector<std::size_t> fail_count(n);
    for (std::size_t i = 0; i < n; ++i) fail_count[i] = m - matrix.row_ones(i);

    const double log_norm = std::log(1.0 + static_cast<double>(m));
    PropertyVector out{Property::Risk, std::vector<double>(n, 0.0)};
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t fi = fail_count[i];
        if (fi == 0) continue;  // coverage factor log(1) = 0
        const std::uint64_t* fi_words = fails.data() + i * w;
        double sum = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            if (k == i) continue;
            const std::size_t both = and_count(fi_words, fails.data() + k * w, w);
            sum += certainty_from_counts(both, fi, fail_count[k], m);
        }
        const double scale = std::log(1.0 + static_cast<double>(fi)) / log_norm;
        out.values[i] = scale * (sum / static_cast<double>(n - 1));
    }
    return out;
}

ResidualWeights residual_weights(const PerceptionMatrix& matrix) {
    // residuals from integer counts so equal accuracies give exact zeros
    const std::size_t m = matrix.n_models();
    std::vector<std::uint64_t> ones(m);
    std::uint64_t total = 0;
    for (std::size_t j = 0; j < m; ++j) {
        ones[j] = matrix.column_ones(j);
        total += ones[j];
    }
    const double cells = static_cast<double>(matrix.n_probes()) * static_cast<double>(m);
    ResidualWeights out;
    out.mean_accuracy = static_cast<double>(total) / cells;
    out.strong.resize(m);
    out.weak.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double res = (static_cast<double>(ones[j] * m) - static_cast<double>(total)) / cells;
        out.strong[j] = std::max(res, 0.0);
        out.weak[j] = std::max(-res, 0.0);
    }
    return out;
}

SurpriseComponents surprise(const PerceptionMatrix& matrix) {
    const std::size_t n = matrix.n_probes();
    const std::size_t m = matrix.n_models();
    const ResidualWeights weights = residual_weights(matrix);

    SurpriseComponents out{{Property::Surprise, std::vector<double>(n, 0.0)},
                           std::vector<double>(n, 0.0),
                           std::vector<double>(n, 0.0)};
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = matrix.row(i);
        double fail_sum = 0.0;
        double pass_sum = 0.0;
        std::size_t passes = 0;
        for (std::size_t j = 0; j < m; ++j) {
            if ((row[j / 64] >> (j % 64)) & 1U) {
                pass_sum += weights.weak[j];
                ++passes;
            } else {
                fail_sum += weights.strong[j];
            }
        }
        const std::size_t fails = m - passes;
        const double d = static_cast<double>(fails) / static_cast<double>(m);
        if (fails > 0) {
            out.easy[i] = (0.0 - std::log(d)) * (fail_sum / static_cast<double>(fails));
        }
        if (passes > 0) {
            out.hard[i] = (0.0 - std::log(1.0 - d)) * (pass_sum / static_cast<double>(passes));
        }
        out.surprise.values[i] = 0.5 * (out.easy[i] + out.hard[i]);
    }
    return out;
}

SimilarityMatrix hamming_similarity(const PerceptionMatrix& matrix) {
    const std::size_t n = matrix.n_probes();
    const std::size_t m = matrix.n_models();
    const std::size_t w = matrix.words_per_row();
    std::vector<std::uint32_t> agree(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        agree[i * n + i] = static_cast<std::uint32_t>(m);
        const std::uint64_t* a = matrix.row(i).data();
        for (std::size_t k = i + 1; k < n; ++k) {
            const std::uint64_t* b = matrix.row(k).data();
            std::size_t diff = 0;
            for (std::size_t q = 0; q < w; ++q) diff += static_cast<std::size_t>(std::popcount(a[q] ^ b[q]));
            const auto c = static_cast<std::uint32_t>(m - diff);
            agree[i * n + k] = c;
            agree[k * n + i] = c;
        }
    }
    return SimilarityMatrix(n, m, std::move(agree));
}

PropertyVector uniqueness(const SimilarityMatrix& similarity) {
    const std::size_t n = similarity.size();
    if (n < 2) {
        throw Error(ErrorCode::SingleProbeMatrix, kModule, "uniqueness needs at least two probes");
    }
    const double denom = static_cast<double>(similarity.n_models()) * static_cast<double>(n - 1);
    PropertyVector out{Property::Uniqueness, std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t total = 0;
        for (std::size_t k = 0; k < n; ++k) {
            if (k != i) total += similarity.agreements(i, k);
        }
        out.values[i] = 1.0 - static_cast<double>(total) / denom;
    }
    return out;
}

}  // namespace memeprobe
