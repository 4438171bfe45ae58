#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace memeprobe {

struct EvaluationRecord {
    std::string dataset_id;
    std::string model_id;
    std::string probe_id;
    bool correct = false;
};

enum class IngestPolicy { Strict, DropIncomplete };

struct ModelAccuracy {
    std::string model_id;
    double accuracy = 0.0;
};

/// Binary correctness matrix: one row (perception span) per probe, one
/// column per model. Rows are bit-packed across models, 64 models per word,
/// with the unused high bits of the last word kept at zero.
class PerceptionMatrix {
public:
    /// `bits` is row-major by probe, size n*m, nonzero meaning correct.
    PerceptionMatrix(std::vector<std::string> probe_ids,
                     std::vector<std::string> model_ids,
                     std::span<const std::uint8_t> bits,
                     std::string dataset_id = {});

    [[nodiscard]] std::size_t n_probes() const noexcept { return probe_ids_.size(); }
    [[nodiscard]] std::size_t n_models() const noexcept { return model_ids_.size(); }
    [[nodiscard]] std::size_t words_per_row() const noexcept { return words_per_row_; }

    [[nodiscard]] const std::vector<std::string>& probe_ids() const noexcept { return probe_ids_; }
    [[nodiscard]] const std::vector<std::string>& model_ids() const noexcept { return model_ids_; }
    [[nodiscard]] const std::string& dataset_id() const noexcept { return dataset_id_; }

    [[nodiscard]] bool at(std::size_t probe, std::size_t model) const;

    [[nodiscard]] std::span<const std::uint64_t> row(std::size_t probe) const noexcept {
        return {words_.data() + probe * words_per_row_, words_per_row_};
    }

    /// Mask of valid bits in the last word of each row.
    [[nodiscard]] std::uint64_t tail_mask() const noexcept { return tail_mask_; }

    /// Number of models answering `probe` correctly.
    [[nodiscard]] std::size_t row_ones(std::size_t probe) const noexcept;

    /// Number of probes answered correctly by `model`.
    [[nodiscard]] std::size_t column_ones(std::size_t model) const noexcept;

    [[nodiscard]] std::vector<std::uint8_t> dense_bits() const;

    friend bool operator==(const PerceptionMatrix& a, const PerceptionMatrix& b) noexcept {
        return a.probe_ids_ == b.probe_ids_ && a.model_ids_ == b.model_ids_ && a.words_ == b.words_;
    }

private:
    std::string dataset_id_;
    std::vector<std::string> probe_ids_;
    std::vector<std::string> model_ids_;
    std::size_t words_per_row_ = 0;
    std::uint64_t tail_mask_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Builds a matrix from pre-judged records. Ids are sorted lexicographically.
/// Identical repeated records are tolerated; conflicting ones are rejected.
/// DropIncomplete removes every model with a missing cell; if that would
/// remove all models, probes with missing cells are removed instead.
PerceptionMatrix ingest_records(std::span<const EvaluationRecord> records, IngestPolicy policy);

/// Inverse of ingest_records, in probe-major order.
std::vector<EvaluationRecord> to_records(const PerceptionMatrix& matrix);

std::vector<ModelAccuracy> accuracy(const PerceptionMatrix& matrix);

/// Model indices j with P[probe][j] == 0, ascending.
std::vector<std::size_t> failure_set(const PerceptionMatrix& matrix, std::size_t probe);
/// Model indices j with P[probe][j] == 1, ascending.
std::vector<std::size_t> success_set(const PerceptionMatrix& matrix, std::size_t probe);

/// Restricts to the named models, keeping the parent's column order.
PerceptionMatrix subsample(const PerceptionMatrix& matrix, std::span<const std::string> model_subset);
PerceptionMatrix subsample_columns(const PerceptionMatrix& matrix, std::span<const std::size_t> columns);

/// Keeps the given rows in the given order.
PerceptionMatrix select_rows(const PerceptionMatrix& matrix, std::span<const std::size_t> rows);

}  // namespace memeprobe
