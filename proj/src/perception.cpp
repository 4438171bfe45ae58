#include "memeprobe/perception.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "memeprobe/error.hpp"

namespace memeprobe {

namespace {

constexpr const char* kModule = "perception";

void require_unique(const std::vector<std::string>& ids, const char* what) {
    std::unordered_set<std::string_view> seen;
    for (const auto& id : ids) {
        if (!seen.insert(id).second) {
            throw Error(ErrorCode::InvalidArgument, kModule,
                        std::string("duplicate ") + what + " id '" + id + "'");
        }
    }
}

}  // namespace

PerceptionMatrix::PerceptionMatrix(std::vector<std::string> probe_ids,
                                   std::vector<std::string> model_ids,
                                   std::span<const std::uint8_t> bits,
                                   std::string dataset_id)
    : dataset_id_(std::move(dataset_id)),
      probe_ids_(std::move(probe_ids)),
      model_ids_(std::move(model_ids)) {
    const std::size_t n = probe_ids_.size();
    const std::size_t m = model_ids_.size();
    if (n == 0 || m == 0) {
        throw Error(ErrorCode::EmptyInput, kModule, "matrix needs at least one probe and one model");
    }
    if (bits.size() != n * m) {
        throw Error(ErrorCode::DimensionMismatch, kModule,
                    "expected " + std::to_string(n * m) + " cells, got " + std::to_string(bits.size()));
    }
    require_unique(probe_ids_, "probe");
    require_unique(model_ids_, "model");

    words_per_row_ = (m + 63) / 64;
    const std::size_t tail = m % 64;
    tail_mask_ = tail == 0 ? ~std::uint64_t{0} : ((std::uint64_t{1} << tail) - 1);
    words_.assign(n * words_per_row_, 0);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t* row = words_.data() + i * words_per_row_;
        for (std::size_t j = 0; j < m; ++j) {
            if (bits[i * m + j] != 0) {
                row[j / 64] |= std::uint64_t{1} << (j % 64);
            }
        }
    }
}

bool PerceptionMatrix::at(std::size_t probe, std::size_t model) const {
    if (probe >= n_probes() || model >= n_models()) {
        throw Error(ErrorCode::IndexOutOfRange, kModule, "cell index out of range");
    }
    return (words_[probe * words_per_row_ + model / 64] >> (model % 64)) & 1U;
}

std::size_t PerceptionMatrix::row_ones(std::size_t probe) const noexcept {
    std::size_t count = 0;
    for (std::uint64_t w : row(probe)) {
        count += static_cast<std::size_t>(std::popcount(w));
    }
    return count;
}

std::size_t PerceptionMatrix::column_ones(std::size_t model) const noexcept {
    const std::size_t word = model / 64;
    const unsigned shift = model % 64;
    std::size_t count = 0;
    for (std::size_t i = 0; i < n_probes(); ++i) {
        count += (words_[i * words_per_row_ + word] >> shift) & 1U;
    }
    return count;
}

std::vector<std::uint8_t> PerceptionMatrix::dense_bits() const {
    const std::size_t n = n_probes();
    const std::size_t m = n_models();
    std::vector<std::uint8_t> bits(n * m);
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = row(i);
        for (std::size_t j = 0; j < m; ++j) {
            bits[i * m + j] = static_cast<std::uint8_t>((r[j / 64] >> (j % 64)) & 1U);
        }
    }
    return bits;
}

PerceptionMatrix ingest_records(std::span<const EvaluationRecord> records, IngestPolicy policy) {
    if (records.empty()) {
        throw Error(ErrorCode::EmptyInput, kModule, "no evaluation records");
    }
    const std::string& dataset = records.front().dataset_id;
    for (const auto& r : records) {
        if (r.dataset_id != dataset) {
            throw Error(ErrorCode::MixedDatasets, kModule,
                        "records mix datasets '" + dataset + "' and '" + r.dataset_id + "'");
        }
    }

    std::set<std::string> probe_set;
    std::set<std::string> model_set;
    for (const auto& r : records) {
        probe_set.insert(r.probe_id);
        model_set.insert(r.model_id);
    }
    std::vector<std::string> probes(probe_set.begin(), probe_set.end());
    std::vector<std::string> models(model_set.begin(), model_set.end());

    std::unordered_map<std::string_view, std::size_t> probe_index;
    std::unordered_map<std::string_view, std::size_t> model_index;
    for (std::size_t i = 0; i < probes.size(); ++i) probe_index.emplace(probes[i], i);
    for (std::size_t j = 0; j < models.size(); ++j) model_index.emplace(models[j], j);

    // 0 = missing, 1 = incorrect, 2 = correct
    std::vector<std::uint8_t> cells(probes.size() * models.size(), 0);
    for (const auto& r : records) {
        const std::size_t i = probe_index.at(r.probe_id);
        const std::size_t j = model_index.at(r.model_id);
        auto& cell = cells[i * models.size() + j];
        const std::uint8_t value = r.correct ? 2 : 1;
        if (cell != 0 && cell != value) {
            throw Error(ErrorCode::DuplicateRecord, kModule,
                        "conflicting records for (" + r.dataset_id + ", " + r.model_id + ", " +
                            r.probe_id + ")");
        }
        cell = value;
    }

    std::vector<bool> keep_probe(probes.size(), true);
    std::vector<bool> keep_model(models.size(), true);
    auto model_complete = [&](std::size_t j) {
        for (std::size_t i = 0; i < probes.size(); ++i) {
            if (keep_probe[i] && cells[i * models.size() + j] == 0) return false;
        }
        return true;
    };
    auto probe_complete = [&](std::size_t i) {
        for (std::size_t j = 0; j < models.size(); ++j) {
            if (keep_model[j] && cells[i * models.size() + j] == 0) return false;
        }
        return true;
    };

    bool any_missing = std::find(cells.begin(), cells.end(), std::uint8_t{0}) != cells.end();
    if (any_missing && policy == IngestPolicy::Strict) {
        throw Error(ErrorCode::IncompleteGrid, kModule,
                    "probe x model grid is incomplete for dataset '" + dataset + "'");
    }
    if (any_missing) {
        std::vector<bool> complete(models.size());
        bool any_complete = false;
        for (std::size_t j = 0; j < models.size(); ++j) {
            complete[j] = model_complete(j);
            any_complete = any_complete || complete[j];
        }
        if (any_complete) {
            keep_model = complete;
        } else {
            for (std::size_t i = 0; i < probes.size(); ++i) keep_probe[i] = probe_complete(i);
        }
    }

    std::vector<std::string> kept_probes;
    std::vector<std::string> kept_models;
    std::vector<std::size_t> model_cols;
    for (std::size_t j = 0; j < models.size(); ++j) {
        if (keep_model[j]) {
            kept_models.push_back(models[j]);
            model_cols.push_back(j);
        }
    }
    std::vector<std::uint8_t> bits;
    for (std::size_t i = 0; i < probes.size(); ++i) {
        if (!keep_probe[i]) continue;
        kept_probes.push_back(probes[i]);
        for (std::size_t j : model_cols) {
            bits.push_back(cells[i * models.size() + j] == 2 ? 1 : 0);
        }
    }
    if (kept_probes.empty() || kept_models.empty()) {
        throw Error(ErrorCode::EmptyAfterFiltering, kModule,
                    "no complete probe x model grid remains for dataset '" + dataset + "'");
    }
    return PerceptionMatrix(std::move(kept_probes), std::move(kept_models), bits, dataset);
}

std::vector<EvaluationRecord> to_records(const PerceptionMatrix& matrix) {
    std::vector<EvaluationRecord> out;
    out.reserve(matrix.n_probes() * matrix.n_models());
    for (std::size_t i = 0; i < matrix.n_probes(); ++i) {
        for (std::size_t j = 0; j < matrix.n_models(); ++j) {
            out.push_back({matrix.dataset_id(), matrix.model_ids()[j], matrix.probe_ids()[i],
                           matrix.at(i, j)});
        }
    }
    return out;
}

std::vector<ModelAccuracy> accuracy(const PerceptionMatrix& matrix) {
    std::vector<ModelAccuracy> out;
    out.reserve(matrix.n_models());
    const auto n = static_cast<double>(matrix.n_probes());
    for (std::size_t j = 0; j < matrix.n_models(); ++j) {
        out.push_back({matrix.model_ids()[j], static_cast<double>(matrix.column_ones(j)) / n});
    }
    return out;
}

namespace {

std::vector<std::size_t> cells_with_value(const PerceptionMatrix& matrix, std::size_t probe, bool value) {
    if (probe >= matrix.n_probes()) {
        throw Error(ErrorCode::IndexOutOfRange, kModule,
                    "probe index " + std::to_string(probe) + " out of range");
    }
    std::vector<std::size_t> out;
    const auto row = matrix.row(probe);
    for (std::size_t j = 0; j < matrix.n_models(); ++j) {
        const bool bit = (row[j / 64] >> (j % 64)) & 1U;
        if (bit == value) out.push_back(j);
    }
    return out;
}

}  // namespace

std::vector<std::size_t> failure_set(const PerceptionMatrix& matrix, std::size_t probe) {
    return cells_with_value(matrix, probe, false);
}

std::vector<std::size_t> success_set(const PerceptionMatrix& matrix, std::size_t probe) {
    return cells_with_value(matrix, probe, true);
}

PerceptionMatrix subsample_columns(const PerceptionMatrix& matrix, std::span<const std::size_t> columns) {
    if (columns.empty()) {
        throw Error(ErrorCode::InvalidArgument, kModule, "model subset is empty");
    }
    std::vector<std::string> models;
    models.reserve(columns.size());
    for (std::size_t j : columns) {
        if (j >= matrix.n_models()) {
            throw Error(ErrorCode::IndexOutOfRange, kModule, "model column out of range");
        }
        models.push_back(matrix.model_ids()[j]);
    }
    std::vector<std::uint8_t> bits;
    bits.reserve(matrix.n_probes() * columns.size());
    for (std::size_t i = 0; i < matrix.n_probes(); ++i) {
        const auto row = matrix.row(i);
        for (std::size_t j : columns) {
            bits.push_back(static_cast<std::uint8_t>((row[j / 64] >> (j % 64)) & 1U));
        }
    }
    return PerceptionMatrix(matrix.probe_ids(), std::move(models), bits, matrix.dataset_id());
}

PerceptionMatrix subsample(const PerceptionMatrix& matrix, std::span<const std::string> model_subset) {
    if (model_subset.empty()) {
        throw Error(ErrorCode::InvalidArgument, kModule, "model subset is empty");
    }
    std::unordered_map<std::string_view, std::size_t> index;
    for (std::size_t j = 0; j < matrix.n_models(); ++j) index.emplace(matrix.model_ids()[j], j);
    std::vector<std::size_t> columns;
    for (const auto& id : model_subset) {
        auto it = index.find(id);
        if (it == index.end()) {
            throw Error(ErrorCode::UnknownModel, kModule, "unknown model '" + id + "'");
        }
        columns.push_back(it->second);
    }
    std::sort(columns.begin(), columns.end());
    columns.erase(std::unique(columns.begin(), columns.end()), columns.end());
    return subsample_columns(matrix, columns);
}

PerceptionMatrix select_rows(const PerceptionMatrix& matrix, std::span<const std::size_t> rows) {
    std::vector<std::string> probes;
    std::vector<std::uint8_t> bits;
    const std::size_t m = matrix.n_models();
    for (std::size_t i : rows) {
        if (i >= matrix.n_probes()) {
            throw Error(ErrorCode::IndexOutOfRange, kModule, "probe row out of range");
        }
        probes.push_back(matrix.probe_ids()[i]);
        const auto row = matrix.row(i);
        for (std::size_t j = 0; j < m; ++j) {
            bits.push_back(static_cast<std::uint8_t>((row[j / 64] >> (j % 64)) & 1U));
        }
    }
    return PerceptionMatrix(std::move(probes), matrix.model_ids(), bits, matrix.dataset_id());
}

}  // namespace memeprobe
