#include <doctest.h>

#include <random>

#include "memeprobe/analysis.hpp"
#include "memeprobe/error.hpp"
#include "memeprobe/memescore.hpp"
#include "support/fixtures.hpp"
#include "support/naive.hpp"

using namespace memeprobe;

namespace {

PropertySet constant_properties(std::size_t n) {
    PropertySet props;
    props.probe_ids = fixtures::numbered("p", n);
    for (auto& v : props.values) v.assign(n, 0.25);
    return props;
}

PropertySet random_properties(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    PropertySet props;
    props.probe_ids = fixtures::numbered("p", n);
    for (auto& v : props.values) {
        for (std::size_t i = 0; i < n; ++i) v.push_back(unit(rng));
    }
    return props;
}

}  // namespace

TEST_CASE("factor parsing") {
    CHECK(parse_factor("difficulty").property == Property::Difficulty);
    CHECK_FALSE(parse_factor("difficulty").complemented);
    CHECK(parse_factor("1-difficulty").complemented);
    CHECK(format_factor(parse_factor("1-risk")) == "1-risk");
    CHECK_THROWS_AS(parse_factor("speed"), Error);
}

TEST_CASE("catalog has the ten named scores") {
    const auto& cat = builtin_catalog();
    std::vector<std::string> names;
    for (const auto& s : cat) names.push_back(s.name);
    CHECK(names == std::vector<std::string>{"Difficulty", "Uniqueness", "Risk", "Surprise", "Typicality", "Bridge",
                                            "Mastery", "Ingenuity", "Robustness", "Caution"});
    const auto& caution = cat.back();
    REQUIRE(caution.factors.size() == 3);
    CHECK(caution.factors[1].property == Property::Difficulty);
    CHECK(caution.factors[1].complemented);
}

TEST_CASE("normalization") {
    CHECK(normalize_property(std::vector<double>{0.0, 1.0}) == std::vector<double>{0.0, 2.0});
    CHECK(normalize_property(std::vector<double>{3.0, 3.0, 3.0}) == std::vector<double>{1.0, 1.0, 1.0});
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> unit(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> x(7);
        for (auto& v : x) v = unit(rng);
        const auto z = normalize_property(x);
        CHECK(*std::min_element(z.begin(), z.end()) == 0.0);
        const auto ref = naive::normalize(x);
        for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(z[i] - ref[i]) <= 1e-12);
    }
}

TEST_CASE("weights: constant properties are uniform, (0, 1) difficulty puts all mass on probe 2") {
    const auto w = probe_weights(constant_properties(4), builtin_catalog()[0]);
    CHECK(w == std::vector<double>(4, 0.25));
    PropertySet two = constant_properties(2);
    two[Property::Difficulty] = {0.0, 1.0};
    CHECK(probe_weights(two, builtin_catalog()[0]) == std::vector<double>{0.0, 1.0});
}

TEST_CASE("weights: degenerate and invalid specs") {
    PropertySet two = constant_properties(2);
    two[Property::Difficulty] = {0.0, 1.0};
    two[Property::Risk] = {1.0, 0.0};
    const MemeSpec clash{"Clash", {{Property::Difficulty, false}, {Property::Risk, false}}};
    try {
        probe_weights(two, clash);
        FAIL("expected DegenerateWeights");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DegenerateWeights);
        CHECK(std::string(e.what()).find("Clash") != std::string::npos);
    }
    CHECK_THROWS_AS(probe_weights(two, MemeSpec{"Empty", {}}), Error);
    CHECK_THROWS_AS(probe_weights(two, MemeSpec{"Twice", {{Property::Risk, false}, {Property::Risk, true}}}), Error);
}

TEST_CASE("canonical weighted scores") {
    const auto t = fixtures::canonical();
    const std::vector<double> w{0.0, 0.0, 0.5, 0.5};
    CHECK(meme_score(t, w) == std::vector<double>{1.0, 0.5, 0.5, 0.0, 0.5});
    CHECK_THROWS_AS(meme_score(t, std::vector<double>{1.0}), Error);
    CHECK_THROWS_AS(meme_score(t, std::vector<double>{0.5, 0.5, 0.5, 0.5}), Error);
    CHECK(meme_score(t, std::vector<double>{0.0, 0.0, 0.0, 1.0}) == std::vector<double>{1.0, 1.0, 0.0, 0.0, 0.0});
}

TEST_CASE("uniform weights reproduce accuracy exactly") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 1 + rng() % 30;
        const auto m = fixtures::make_matrix(fixtures::random_rows(rng, n, 7, 0.5));
        const auto table = score_catalog(m, constant_properties(n));
        for (const auto& column : table.scores) CHECK(column == table.accuracy);
    }
}

TEST_CASE("catalog equals composing weights and scores by hand") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        const auto rows = fixtures::random_rows(rng, 10, 6, 0.5);
        const auto m = fixtures::make_matrix(rows);
        const auto props = compute_properties(m, 0.5);
        MemeScoreTable table;
        try {
            table = score_catalog(m, props);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::DegenerateWeights);
            continue;
        }
        CHECK(table.n_models() == 6);
        CHECK(table.scores.size() == 10);
        for (std::size_t s = 0; s < 10; ++s) {
            const auto& spec = builtin_catalog()[s];
            std::vector<std::vector<double>> factors;
            for (const auto& f : spec.factors) {
                auto v = props[f.property];
                if (f.complemented) {
                    for (auto& x : v) x = 1.0 - x;
                }
                factors.push_back(v);
            }
            const auto ref = naive::scores(rows, naive::weights(factors));
            for (std::size_t j = 0; j < 6; ++j) CHECK(std::abs(table.scores[s][j] - ref[j]) <= 1e-12);
        }
    }
}

TEST_CASE("scores stay in [0, 1]; all-correct and all-wrong columns are exact") {
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 40; ++trial) {
        auto rows = fixtures::random_rows(rng, 12, 5, 0.5);
        for (auto& r : rows) {
            r.push_back(1);
            r.push_back(0);
        }
        const auto m = fixtures::make_matrix(rows);
        const auto props = random_properties(rng, 12);
        for (const auto& spec : builtin_catalog()) {
            const auto sc = meme_score(m, probe_weights(props, spec));
            for (double v : sc) {
                CHECK(v >= 0.0);
                CHECK(v <= 1.0);
            }
            CHECK(sc[5] == 1.0);
            CHECK(sc[6] == 0.0);
        }
    }
}

TEST_CASE("weights are invariant to scale, shift and factor order") {
    std::mt19937_64 rng(15);
    for (int trial = 0; trial < 30; ++trial) {
        const auto props = random_properties(rng, 9);
        auto scaled = props;
        for (auto& v : scaled.values) {
            for (auto& x : v) x = 3.5 * x + 2.0;
        }
        const MemeSpec fwd{"F", {{Property::Typicality, false}, {Property::Uniqueness, false}}};
        const MemeSpec rev{"R", {{Property::Uniqueness, false}, {Property::Typicality, false}}};
        const auto a = probe_weights(props, fwd);
        const auto b = probe_weights(scaled, fwd);
        const auto c = probe_weights(props, rev);
        for (std::size_t i = 0; i < 9; ++i) {
            CHECK(std::abs(a[i] - b[i]) <= 1e-12);
            CHECK(std::abs(a[i] - c[i]) <= 1e-12);
        }
    }
}

TEST_CASE("table lookups and averaging") {
    MemeScoreTable a{{"x", "y"}, {0.5, 0.7}, {"S"}, {{0.1, 0.3}}};
    MemeScoreTable b{{"y", "z"}, {0.9, 0.2}, {"S"}, {{0.5, 0.4}}};
    CHECK(a.column("accuracy") == a.accuracy);
    CHECK_THROWS_AS((void)a.column("nope"), Error);
    const std::vector<MemeScoreTable> both{a, b};
    const auto avg = average_tables(both);
    CHECK(avg.model_ids == std::vector<std::string>{"y"});
    CHECK(avg.accuracy[0] == doctest::Approx(0.8));
    CHECK(avg.scores[0][0] == doctest::Approx(0.4));
    MemeScoreTable c{{"q"}, {0.5}, {"S"}, {{0.1}}};
    const std::vector<MemeScoreTable> disjoint{a, c};
    CHECK_THROWS_AS(average_tables(disjoint), Error);
}
