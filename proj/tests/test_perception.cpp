#include <doctest.h>

#include <random>

#include "memeprobe/error.hpp"
#include "memeprobe/perception.hpp"
#include "support/fixtures.hpp"

using namespace memeprobe;

namespace {

std::vector<EvaluationRecord> grid(std::size_t probes, std::size_t models, bool value = true) {
    std::vector<EvaluationRecord> out;
    for (std::size_t i = 0; i < probes; ++i) {
        for (std::size_t j = 0; j < models; ++j) {
            out.push_back({"ds", "m" + std::to_string(j + 1), "q" + std::to_string(i + 1), value});
        }
    }
    return out;
}

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::Io;
}

}  // namespace

TEST_CASE("construction validates shape and ids") {
    const std::vector<std::uint8_t> bits{1, 0, 0, 1};
    CHECK(code_of([&] { PerceptionMatrix({}, {"m"}, {}, ""); }) == ErrorCode::EmptyInput);
    CHECK(code_of([&] { PerceptionMatrix({"a", "b"}, {"m", "n"}, std::span(bits).first(3)); }) ==
          ErrorCode::DimensionMismatch);
    CHECK(code_of([&] { PerceptionMatrix({"a", "a"}, {"m", "n"}, bits); }) == ErrorCode::InvalidArgument);
    const PerceptionMatrix ok({"a", "b"}, {"m", "n"}, bits);
    CHECK(ok.at(0, 0));
    CHECK_FALSE(ok.at(0, 1));
    CHECK(code_of([&] { (void)ok.at(2, 0); }) == ErrorCode::IndexOutOfRange);
}

TEST_CASE("packing keeps tail bits clear across word boundaries") {
    std::mt19937_64 rng(7);
    for (std::size_t m : {1u, 63u, 64u, 65u, 130u}) {
        const auto rows = fixtures::random_rows(rng, 5, m, 0.5);
        const auto matrix = fixtures::make_matrix(rows);
        CHECK(matrix.words_per_row() == (m + 63) / 64);
        for (std::size_t i = 0; i < 5; ++i) {
            CHECK((matrix.row(i).back() & ~matrix.tail_mask()) == 0);
            std::size_t ones = 0;
            for (std::size_t j = 0; j < m; ++j) {
                CHECK(matrix.at(i, j) == (rows[i][j] == 1));
                ones += rows[i][j];
            }
            CHECK(matrix.row_ones(i) == ones);
        }
        CHECK(fixtures::dense_of(matrix) == rows);
    }
}

TEST_CASE("ingest: complete grid of correct answers") {
    const auto records = grid(2, 2);
    const auto m = ingest_records(records, IngestPolicy::Strict);
    CHECK(m.n_probes() == 2);
    CHECK(m.n_models() == 2);
    CHECK(m.dataset_id() == "ds");
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) CHECK(m.at(i, j));
    }
}

TEST_CASE("ingest: strict mode rejects a hole") {
    auto records = grid(2, 2);
    records.pop_back();
    CHECK(code_of([&] { ingest_records(records, IngestPolicy::Strict); }) == ErrorCode::IncompleteGrid);
}

TEST_CASE("ingest: drop_incomplete removes the incomplete model") {
    auto records = grid(3, 3);
    std::erase_if(records, [](const auto& r) { return r.model_id == "m3" && r.probe_id == "q2"; });
    const auto m = ingest_records(records, IngestPolicy::DropIncomplete);
    CHECK(m.n_probes() == 3);
    CHECK(m.model_ids() == std::vector<std::string>{"m1", "m2"});
}

TEST_CASE("ingest: drop_incomplete falls back to probes when every model has a hole") {
    auto records = grid(3, 2);
    std::erase_if(records, [](const auto& r) { return r.probe_id == "q3" && r.model_id == "m1"; });
    std::erase_if(records, [](const auto& r) { return r.probe_id == "q3" && r.model_id == "m2"; });
    records.push_back({"ds", "m1", "q3", true});
    // q3 is answered by m1 only, and no model misses anything else
    std::erase_if(records, [](const auto& r) { return r.probe_id == "q2" && r.model_id == "m1"; });
    const auto m = ingest_records(records, IngestPolicy::DropIncomplete);
    CHECK(m.probe_ids() == std::vector<std::string>{"q1"});
    CHECK(m.n_models() == 2);
}

TEST_CASE("ingest: errors") {
    CHECK(code_of([] { ingest_records({}, IngestPolicy::Strict); }) == ErrorCode::EmptyInput);
    auto mixed = grid(1, 2);
    mixed[1].dataset_id = "other";
    CHECK(code_of([&] { ingest_records(mixed, IngestPolicy::Strict); }) == ErrorCode::MixedDatasets);

    auto dup = grid(2, 2);
    dup.push_back(dup.front());
    CHECK_NOTHROW(ingest_records(dup, IngestPolicy::Strict));
    dup.back().correct = !dup.back().correct;
    CHECK(code_of([&] { ingest_records(dup, IngestPolicy::Strict); }) == ErrorCode::DuplicateRecord);
}

TEST_CASE("ingest: ids are sorted regardless of record order") {
    std::vector<EvaluationRecord> records{
        {"d", "zeta", "b", true}, {"d", "alpha", "b", false}, {"d", "zeta", "a", false}, {"d", "alpha", "a", true}};
    const auto m = ingest_records(records, IngestPolicy::Strict);
    CHECK(m.probe_ids() == std::vector<std::string>{"a", "b"});
    CHECK(m.model_ids() == std::vector<std::string>{"alpha", "zeta"});
    CHECK(m.at(0, 0));
    CHECK_FALSE(m.at(0, 1));
    CHECK_FALSE(m.at(1, 0));
    CHECK(m.at(1, 1));
}

TEST_CASE("ingest is idempotent through to_records") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const auto matrix = fixtures::make_matrix(fixtures::random_rows(rng, 6, 9, 0.4));
        const auto again = ingest_records(to_records(matrix), IngestPolicy::Strict);
        CHECK(again == matrix);
    }
}

TEST_CASE("canonical accuracies and failure sets") {
    const auto t = fixtures::canonical();
    const auto acc = accuracy(t);
    const std::vector<double> expected{0.75, 0.5, 0.5, 0.25, 0.5};
    REQUIRE(acc.size() == 5);
    for (std::size_t j = 0; j < 5; ++j) {
        CHECK(acc[j].model_id == t.model_ids()[j]);
        CHECK(acc[j].accuracy == expected[j]);
    }
    CHECK(failure_set(t, 0).empty());
    CHECK(failure_set(t, 1) == std::vector<std::size_t>{0, 1, 2, 3, 4});
    CHECK(failure_set(t, 3) == std::vector<std::size_t>{2, 3, 4});
    CHECK(code_of([&] { failure_set(t, 4); }) == ErrorCode::IndexOutOfRange);
}

TEST_CASE("failure and success sets partition the models") {
    std::mt19937_64 rng(5);
    const auto matrix = fixtures::make_matrix(fixtures::random_rows(rng, 10, 70, 0.5));
    for (std::size_t i = 0; i < matrix.n_probes(); ++i) {
        auto f = failure_set(matrix, i);
        const auto s = success_set(matrix, i);
        CHECK(f.size() + s.size() == matrix.n_models());
        f.insert(f.end(), s.begin(), s.end());
        std::sort(f.begin(), f.end());
        for (std::size_t j = 0; j < f.size(); ++j) CHECK(f[j] == j);
    }
}

TEST_CASE("subsample projects columns in parent order") {
    const auto t = fixtures::canonical();
    const std::vector<std::string> subset{"m2", "m1"};
    const auto sub = subsample(t, subset);
    CHECK(sub.model_ids() == std::vector<std::string>{"m1", "m2"});
    CHECK(fixtures::dense_of(sub) == fixtures::Dense{{1, 1}, {0, 0}, {1, 0}, {1, 1}});
    CHECK(subsample(t, t.model_ids()) == t);
    CHECK(subsample(sub, sub.model_ids()) == sub);
    const std::vector<std::string> single{"m4"};
    CHECK(subsample(t, single).n_models() == 1);
    const std::vector<std::string> bad{"m9"};
    CHECK(code_of([&] { subsample(t, bad); }) == ErrorCode::UnknownModel);
}

TEST_CASE("column counts add up to the number of correct records") {
    std::mt19937_64 rng(3);
    const auto matrix = fixtures::make_matrix(fixtures::random_rows(rng, 12, 8, 0.3));
    std::size_t total = 0;
    for (std::size_t j = 0; j < matrix.n_models(); ++j) total += matrix.column_ones(j);
    std::size_t ones = 0;
    for (const auto& r : to_records(matrix)) ones += r.correct;
    CHECK(total == ones);
}
