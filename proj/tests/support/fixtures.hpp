#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "memeprobe/perception.hpp"

namespace fixtures {

using Dense = std::vector<std::vector<int>>;  // [probe][model]

inline std::vector<std::string> numbered(const char* prefix, std::size_t count) {
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < count; ++i) ids.push_back(fmt::format("{}{:04}", prefix, i));
    return ids;
}

inline memeprobe::PerceptionMatrix make_matrix(const Dense& rows, std::vector<std::string> probes,
                                               std::vector<std::string> models) {
    std::vector<std::uint8_t> bits;
    for (const auto& r : rows) {
        for (int b : r) bits.push_back(static_cast<std::uint8_t>(b));
    }
    return memeprobe::PerceptionMatrix(std::move(probes), std::move(models), bits, "fixture");
}

inline memeprobe::PerceptionMatrix make_matrix(const Dense& rows) {
    return make_matrix(rows, numbered("p", rows.size()), numbered("m", rows.empty() ? 0 : rows[0].size()));
}

/// The 4x5 matrix T: p1 = 11111, p2 = 00000, p3 = 10101, p4 = 11000.
inline Dense canonical_rows() { return {{1, 1, 1, 1, 1}, {0, 0, 0, 0, 0}, {1, 0, 1, 0, 1}, {1, 1, 0, 0, 0}}; }

inline memeprobe::PerceptionMatrix canonical() {
    return make_matrix(canonical_rows(), {"p1", "p2", "p3", "p4"}, {"m1", "m2", "m3", "m4", "m5"});
}

inline Dense random_rows(std::mt19937_64& rng, std::size_t n, std::size_t m, double density) {
    std::bernoulli_distribution bit(density);
    Dense rows(n, std::vector<int>(m));
    for (auto& r : rows) {
        for (auto& b : r) b = bit(rng) ? 1 : 0;
    }
    return rows;
}

/// Random dense matrix where some rows are copies of earlier ones.
inline Dense random_rows_with_duplicates(std::mt19937_64& rng, std::size_t n, std::size_t m, double density) {
    Dense rows = random_rows(rng, n, m, density);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t i = 1; i < n; ++i) {
        if (pick(rng) % 3 == 0) rows[i] = rows[pick(rng) % i];
    }
    return rows;
}

/// Two-factor logistic population: a strong ability factor and a weak
/// secondary skill that only some probes load on.
inline Dense planted_population(std::size_t n, std::size_t m, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> ability(m);
    std::vector<double> skill(m);
    for (std::size_t j = 0; j < m; ++j) {
        ability[j] = 1.2 * normal(rng);
        skill[j] = normal(rng);
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Dense rows(n, std::vector<int>(m));
    for (std::size_t i = 0; i < n; ++i) {
        const double hardness = 1.5 * normal(rng);
        const double loading = unit(rng) < 0.3 ? 0.6 : 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double logit = ability[j] - hardness + loading * skill[j];
            rows[i][j] = unit(rng) < 1.0 / (1.0 + std::exp(-logit)) ? 1 : 0;
        }
    }
    return rows;
}

inline Dense dense_of(const memeprobe::PerceptionMatrix& matrix) {
    Dense rows(matrix.n_probes(), std::vector<int>(matrix.n_models()));
    for (std::size_t i = 0; i < matrix.n_probes(); ++i) {
        for (std::size_t j = 0; j < matrix.n_models(); ++j) rows[i][j] = matrix.at(i, j) ? 1 : 0;
    }
    return rows;
}

}  // namespace fixtures
