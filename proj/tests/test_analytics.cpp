#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "memeprobe/analysis.hpp"
#include "memeprobe/analytics.hpp"
#include "memeprobe/error.hpp"
#include "memeprobe/stats.hpp"
#include "support/fixtures.hpp"
#include "support/naive.hpp"

using namespace memeprobe;
using doctest::Approx;

TEST_CASE("silverman bandwidth") {
    const std::vector<double> x{0, 1, 2, 3, 4};
    // sd = sqrt(2.5), IQR = 3 - 1 = 2, so the IQR term wins
    const double expected = 0.9 * std::min(std::sqrt(2.5), 2.0 / 1.34) * std::pow(5.0, -0.2);
    CHECK(silverman_bandwidth(x) == Approx(expected).epsilon(1e-15));
    CHECK(silverman_bandwidth(x) == Approx(naive::silverman(x)).epsilon(1e-15));
    CHECK(silverman_bandwidth(std::vector<double>{2, 2, 2}) == 1e-3);
    CHECK(silverman_bandwidth(std::vector<double>{0, 0, 0, 0, 0, 0, 0, 10}) == Approx(1e-2));
    CHECK_THROWS_AS(silverman_bandwidth(std::vector<double>{1}), Error);
}

TEST_CASE("js divergence basics") {
    std::mt19937_64 rng(21);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> a(20), b(25);
        for (auto& v : a) v = normal(rng);
        for (auto& v : b) v = normal(rng) + 0.5 * trial / 10.0;
        const double ab = js_divergence(a, b);
        CHECK(ab >= 0.0);
        CHECK(ab <= std::log(2.0) + 1e-9);
        CHECK(ab == js_divergence(b, a));
        CHECK(js_divergence(a, a) <= 1e-12);
    }
    const std::vector<double> left{0.0, 0.001, 0.002};
    const std::vector<double> right{100.0, 100.001, 100.002};
    CHECK(js_divergence(left, right) == Approx(std::log(2.0)).epsilon(1e-9));
    CHECK_THROWS_AS(js_divergence(std::vector<double>{1.0}, right), Error);
}

TEST_CASE("spearman") {
    const std::vector<double> x{1, 2, 3, 4};
    const std::vector<double> y{1, 3, 2, 4};
    CHECK(*spearman(x, y) == 0.8);
    CHECK(*spearman(x, x) == 1.0);
    const std::vector<double> neg{-1, -2, -3, -4};
    CHECK(*spearman(x, neg) == -1.0);
    CHECK_FALSE(spearman(x, std::vector<double>{5, 5, 5, 5}).has_value());
    CHECK_THROWS_AS(spearman(x, std::vector<double>{1, 2}), Error);

    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> a(12), b(12);
        for (auto& v : a) v = std::floor(unit(rng) * 6.0);  // ties on purpose
        for (auto& v : b) v = unit(rng);
        const auto rho = spearman(a, b);
        std::vector<double> ta, tb;
        for (double v : a) ta.push_back(std::exp(v));
        for (double v : b) tb.push_back(v * v * v + 3.0);
        const auto rho2 = spearman(ta, tb);
        REQUIRE(rho.has_value() == rho2.has_value());
        if (rho) CHECK(std::abs(*rho - *rho2) <= 1e-12);
        CHECK(average_ranks(a) == naive::average_ranks(a));
    }
}

TEST_CASE("leaderboard ranks and deltas") {
    MemeScoreTable t{{"a", "b", "c"}, {0.9, 0.5, 0.7}, {"S", "Same"}, {{0.1, 0.9, 0.5}, {0.9, 0.5, 0.7}}};
    const auto board = leaderboard(t);
    REQUIRE(board.rows.size() == 3);
    CHECK(board.rows[0].model_id == "a");
    CHECK(board.rows[1].model_id == "c");
    CHECK(board.rows[2].model_id == "b");
    CHECK(board.rows[0].deltas == std::vector<long>{-2, 0});
    CHECK(board.rows[2].deltas == std::vector<long>{2, 0});
    CHECK_THROWS_AS(leaderboard(MemeScoreTable{}), Error);

    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        MemeScoreTable r;
        r.model_ids = fixtures::numbered("m", 6);
        for (int j = 0; j < 6; ++j) r.accuracy.push_back(std::round(unit(rng) * 4) / 4);
        r.score_names = {"X"};
        r.scores.push_back({});
        for (int j = 0; j < 6; ++j) r.scores[0].push_back(std::round(unit(rng) * 4) / 4);
        const auto lb = leaderboard(r);
        const auto acc_rank = naive::ranks_descending(r.accuracy, r.model_ids);
        const auto sc_rank = naive::ranks_descending(r.scores[0], r.model_ids);
        long total = 0;
        std::map<std::string, long> by_id;
        for (const auto& row : lb.rows) {
            total += row.deltas[0];
            by_id[row.model_id] = row.deltas[0];
        }
        CHECK(total == 0);
        for (std::size_t j = 0; j < 6; ++j) {
            CHECK(by_id[r.model_ids[j]] == static_cast<long>(acc_rank[j]) - static_cast<long>(sc_rank[j]));
        }
        // permuting the table leaves each model's deltas unchanged
        MemeScoreTable p = r;
        std::reverse(p.model_ids.begin(), p.model_ids.end());
        std::reverse(p.accuracy.begin(), p.accuracy.end());
        std::reverse(p.scores[0].begin(), p.scores[0].end());
        for (const auto& row : leaderboard(p).rows) CHECK(by_id[row.model_id] == row.deltas[0]);
    }
}

TEST_CASE("landscape means") {
    const auto t = fixtures::canonical();
    const auto props = compute_properties(t, 0.5);
    std::map<std::string, PropertySet> sets{{"T", props}};
    const auto rows = dataset_landscape(sets);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].n_probes == 4);
    CHECK(rows[0].means[0] == Approx(0.5));
    for (std::size_t p = 0; p < 6; ++p) {
        const auto& v = props.values[p];
        CHECK(rows[0].means[p] == Approx(std::accumulate(v.begin(), v.end(), 0.0) / 4.0).epsilon(1e-15));
    }
    PropertySet incomplete = props;
    incomplete[Property::Bridge].clear();
    CHECK_THROWS_AS(dataset_landscape({{"X", incomplete}}), Error);
}

TEST_CASE("top-k") {
    const auto t = fixtures::canonical();
    const auto d = difficulty(t).values;
    CHECK(top_k(t.probe_ids(), d, 2, Direction::Highest) == std::vector<std::string>{"p2", "p4"});
    CHECK(top_k(t.probe_ids(), d, 4, Direction::Lowest) == std::vector<std::string>{"p1", "p3", "p4", "p2"});
    const std::vector<double> flat(4, 0.3);
    CHECK(top_k(t.probe_ids(), flat, 2, Direction::Highest) == std::vector<std::string>{"p1", "p2"});
    CHECK_THROWS_AS(top_k(t.probe_ids(), d, 0, Direction::Highest), Error);
    CHECK_THROWS_AS(top_k(t.probe_ids(), d, 5, Direction::Highest), Error);
}

TEST_CASE("heatmap permutes rows and columns consistently") {
    std::mt19937_64 rng(24);
    for (int trial = 0; trial < 20; ++trial) {
        const auto m = fixtures::make_matrix(fixtures::random_rows(rng, 9, 7, 0.5));
        const auto sim = hamming_similarity(m);
        const auto u = uniqueness(sim).values;
        const auto h = heatmap_export(sim, m.probe_ids(), u);
        for (std::size_t a = 0; a < 9; ++a) {
            CHECK(h.labels[a] == m.probe_ids()[h.order[a]]);
            if (a > 0) CHECK(u[h.order[a - 1]] >= u[h.order[a]]);
            CHECK(h.values[a * 9 + a] == 1.0);
            for (std::size_t b = 0; b < 9; ++b) {
                CHECK(h.values[a * 9 + b] == sim(h.order[a], h.order[b]));
                CHECK(h.values[a * 9 + b] == h.values[b * 9 + a]);
            }
        }
    }
    const auto t = fixtures::canonical();
    const auto flat = heatmap_export(hamming_similarity(t), t.probe_ids(), std::vector<double>(4, 0.0));
    CHECK(flat.order == std::vector<std::size_t>{0, 1, 2, 3});
}

TEST_CASE("subset draws are deterministic and distinct across repeats") {
    const auto ids = fixtures::numbered("m", 12);
    const auto a = draw_model_subset(ids, 5, 7, 0);
    CHECK(a == draw_model_subset(ids, 5, 7, 0));
    CHECK(a.size() == 5);
    CHECK(std::is_sorted(a.begin(), a.end()));
    CHECK(a != draw_model_subset(ids, 5, 8, 0));
    CHECK_THROWS_AS(draw_model_subset(ids, 13, 0, 0), Error);
}

TEST_CASE("stability at full size is exact and two repeats give one pair") {
    const auto m = fixtures::make_matrix(fixtures::planted_population(40, 9, 5));
    StabilityOptions opts;
    opts.sizes = {9};
    opts.repeats = 3;
    opts.tau = 0.6;
    const auto report = subsample_stability(m, opts);
    CHECK(report.entries.size() == 16);
    for (const auto& e : report.entries) {
        REQUIRE(e.value.has_value());
        if (e.metric == StabilityMetric::Js) CHECK(*e.value == 0.0);
        else CHECK(*e.value == 1.0);
        CHECK(e.pairs == 3);
    }
    opts.sizes = {4, 6};
    opts.repeats = 2;
    const auto two = subsample_stability(m, opts);
    for (const auto& e : two.entries) CHECK(e.pairs <= 1);
    CHECK(two.find(4, StabilityMetric::Js, "difficulty")->pairs == 1);
    opts.sizes = {10};
    CHECK_THROWS_AS(subsample_stability(m, opts), Error);
    opts.sizes = {4};
    opts.repeats = 1;
    CHECK_THROWS_AS(subsample_stability(m, opts), Error);
}

TEST_CASE("stability reruns are identical") {
    const auto m = fixtures::make_matrix(fixtures::planted_population(60, 12, 9));
    StabilityOptions opts;
    opts.sizes = {3, 6};
    opts.repeats = 4;
    opts.seed = 42;
    const auto a = subsample_stability(m, opts);
    const auto b = subsample_stability(m, opts);
    REQUIRE(a.entries.size() == b.entries.size());
    for (std::size_t e = 0; e < a.entries.size(); ++e) {
        CHECK(a.entries[e].value == b.entries[e].value);
        CHECK(a.entries[e].pairs == b.entries[e].pairs);
    }
}
