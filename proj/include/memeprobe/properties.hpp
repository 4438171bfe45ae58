#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "memeprobe/perception.hpp"

namespace memeprobe {

enum class Property { Difficulty, Risk, Surprise, Uniqueness, Typicality, Bridge };

inline constexpr std::array<Property, 6> kAllProperties = {
    Property::Difficulty, Property::Risk,       Property::Surprise,
    Property::Uniqueness, Property::Typicality, Property::Bridge,
};

/// Lowercase name used in files and on the command line ("difficulty", ...).
std::string_view property_name(Property p) noexcept;
std::optional<Property> parse_property(std::string_view name) noexcept;

struct PropertyVector {
    Property name;
    std::vector<double> values;  // aligned with the matrix's probe_ids
};

/// All six per-probe properties of one matrix.
struct PropertySet {
    std::vector<std::string> probe_ids;
    std::array<std::vector<double>, 6> values;

    [[nodiscard]] const std::vector<double>& operator[](Property p) const {
        return values[static_cast<std::size_t>(p)];
    }
    [[nodiscard]] std::vector<double>& operator[](Property p) {
        return values[static_cast<std::size_t>(p)];
    }
    [[nodiscard]] bool has(Property p) const { return !(*this)[p].empty(); }
};

/// Pairwise Hamming similarity between perception spans, stored as exact
/// agreement counts; S(i,k) = agreements(i,k) / m.
class SimilarityMatrix {
public:
    SimilarityMatrix(std::size_t n, std::size_t models, std::vector<std::uint32_t> agreements);

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] std::size_t n_models() const noexcept { return models_; }

    [[nodiscard]] std::uint32_t agreements(std::size_t i, std::size_t k) const noexcept {
        return agreements_[i * n_ + k];
    }
    [[nodiscard]] double operator()(std::size_t i, std::size_t k) const noexcept {
        return static_cast<double>(agreements_[i * n_ + k]) / static_cast<double>(models_);
    }

    /// Smallest agreement count c with c/m >= tau, or m+1 when none is.
    [[nodiscard]] std::uint32_t threshold_count(double tau) const noexcept;

private:
    std::size_t n_;
    std::size_t models_;
    std::vector<std::uint32_t> agreements_;
};

struct ResidualWeights {
    std::vector<double> strong;  // a_j = max(acc_j - mean, 0)
    std::vector<double> weak;    // e_j = max(mean - acc_j, 0)
    double mean_accuracy = 0.0;
};

struct SurpriseComponents {
    PropertyVector surprise;
    std::vector<double> easy;  // elite models failing an easy probe
    std::vector<double> hard;  // weak models solving a hard probe
};

PropertyVector difficulty(const PerceptionMatrix& matrix);

/// |F_i ∩ F_k| / |F_i|, or 0 when probe i is never failed.
double conditional_cowrong(const PerceptionMatrix& matrix, std::size_t i, std::size_t k);

/// Two-sided certainty factor of failing k given a failure on i, in [-1, 1].
/// Zero on the diagonal and whenever the conditional rate equals d_k.
double certainty_factor(const PerceptionMatrix& matrix, std::size_t i, std::size_t k);

/// log(1 + |F_i|) / log(1 + m).
double coverage_factor(const PerceptionMatrix& matrix, std::size_t i);

/// Requires at least two probes.
PropertyVector risk(const PerceptionMatrix& matrix);

ResidualWeights residual_weights(const PerceptionMatrix& matrix);

SurpriseComponents surprise(const PerceptionMatrix& matrix);

SimilarityMatrix hamming_similarity(const PerceptionMatrix& matrix);

/// Requires at least two probes.
PropertyVector uniqueness(const SimilarityMatrix& similarity);

}  // namespace memeprobe
