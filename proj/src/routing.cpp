#include "memeprobe/routing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include <fmt/format.h>

#include "memeprobe/error.hpp"
#include "memeprobe/hashing.hpp"

namespace memeprobe {

namespace {

constexpr const char* kModule = "routing";

bool is_hard(int level) { return level >= kHardLevel; }

// assign[i] true = item i answered by the high-Difficulty model
RoutedAccuracy score_assignment(const RoutingInstance& instance, const std::vector<bool>& assign) {
    RoutedAccuracy out;
    std::size_t hard_ok = 0;
    std::size_t easy_ok = 0;
    for (std::size_t i = 0; i < instance.size(); ++i) {
        const bool ok = assign[i] ? instance.hi_correct[i] : instance.lo_correct[i];
        if (is_hard(instance.levels[i])) {
            ++out.n_hard;
            hard_ok += ok;
        } else {
            ++out.n_easy;
            easy_ok += ok;
        }
    }
    out.hard = out.n_hard == 0 ? 0.0 : static_cast<double>(hard_ok) / static_cast<double>(out.n_hard);
    out.easy = out.n_easy == 0 ? 0.0 : static_cast<double>(easy_ok) / static_cast<double>(out.n_easy);
    out.overall = static_cast<double>(hard_ok + easy_ok) / static_cast<double>(instance.size());
    return out;
}

std::string pct(double fraction) { return fmt::format("{:.2f}", 100.0 * fraction); }
std::string signed_pct(double fraction) { return fmt::format("{:+.2f}", 100.0 * fraction); }

}  // namespace

void validate(const RoutingInstance& instance) {
    const std::size_t n = instance.item_ids.size();
    if (n == 0) {
        throw Error(ErrorCode::EmptyInput, kModule, "routing instance has no items");
    }
    if (instance.levels.size() != n || instance.hi_correct.size() != n || instance.lo_correct.size() != n) {
        throw Error(ErrorCode::DimensionMismatch, kModule, "routing instance columns differ in length");
    }
    std::unordered_set<std::string_view> seen;
    for (std::size_t i = 0; i < n; ++i) {
        if (instance.levels[i] < 1 || instance.levels[i] > 5) {
            throw Error(ErrorCode::InvalidArgument, kModule,
                        "item '" + instance.item_ids[i] + "' has level " + std::to_string(instance.levels[i]));
        }
        if (!seen.insert(instance.item_ids[i]).second) {
            throw Error(ErrorCode::InvalidArgument, kModule, "duplicate item '" + instance.item_ids[i] + "'");
        }
    }
}

RoutedAccuracy difficulty_route(const RoutingInstance& instance) {
    validate(instance);
    std::vector<bool> assign(instance.size());
    for (std::size_t i = 0; i < instance.size(); ++i) assign[i] = is_hard(instance.levels[i]);
    return score_assignment(instance, assign);
}

BalancedBaseline balanced_baseline(const RoutingInstance& instance, const std::vector<std::uint64_t>& seeds) {
    validate(instance);
    if (seeds.empty()) {
        throw Error(ErrorCode::InvalidArgument, kModule, "balanced baseline needs at least one seed");
    }
    BalancedBaseline out;
    out.seeds = seeds;
    for (std::uint64_t seed : seeds) {
        std::vector<bool> assign(instance.size(), false);
        for (int level = 1; level <= 5; ++level) {
            std::vector<std::pair<std::uint64_t, std::size_t>> keyed;
            for (std::size_t i = 0; i < instance.size(); ++i) {
                if (instance.levels[i] != level) continue;
                keyed.emplace_back(
                    keyed_hash({seed, static_cast<std::uint64_t>(level), fnv1a64(instance.item_ids[i])}), i);
            }
            std::sort(keyed.begin(), keyed.end(), [&](const auto& a, const auto& b) {
                if (a.first != b.first) return a.first < b.first;
                return instance.item_ids[a.second] < instance.item_ids[b.second];
            });
            const std::size_t to_hi = (keyed.size() + 1) / 2;
            for (std::size_t r = 0; r < to_hi; ++r) assign[keyed[r].second] = true;
        }
        out.per_seed.push_back(score_assignment(instance, assign));
    }

    const auto k = static_cast<double>(seeds.size());
    // offsets from the first seed keep a constant column exactly constant
    auto mean_of = [&](double RoutedAccuracy::*field) {
        const double base = out.per_seed.front().*field;
        double s = 0.0;
        for (const auto& r : out.per_seed) s += r.*field - base;
        return base + s / k;
    };
    auto std_of = [&](double RoutedAccuracy::*field, double mean) {
        double s = 0.0;
        for (const auto& r : out.per_seed) s += (r.*field - mean) * (r.*field - mean);
        return std::sqrt(s / k);
    };
    for (auto field : {&RoutedAccuracy::hard, &RoutedAccuracy::easy, &RoutedAccuracy::overall}) {
        out.mean.*field = mean_of(field);
        out.std.*field = std_of(field, out.mean.*field);
    }
    out.mean.n_hard = out.std.n_hard = out.per_seed.front().n_hard;
    out.mean.n_easy = out.std.n_easy = out.per_seed.front().n_easy;
    return out;
}

double best_single(const RoutingInstance& instance) {
    validate(instance);
    const std::size_t hi = static_cast<std::size_t>(std::count(instance.hi_correct.begin(), instance.hi_correct.end(), true));
    const std::size_t lo = static_cast<std::size_t>(std::count(instance.lo_correct.begin(), instance.lo_correct.end(), true));
    return static_cast<double>(std::max(hi, lo)) / static_cast<double>(instance.size());
}

std::vector<std::uint64_t> default_routing_seeds() {
    std::vector<std::uint64_t> seeds(10);
    std::iota(seeds.begin(), seeds.end(), 0);
    return seeds;
}

RoutingReport evaluate_routing(const RoutingInstance& instance, const std::vector<std::uint64_t>& seeds,
                               std::string hi_model, std::string lo_model) {
    RoutingReport report;
    report.hi_model = std::move(hi_model);
    report.lo_model = std::move(lo_model);
    report.routed = difficulty_route(instance);
    report.balanced = balanced_baseline(instance, seeds);
    report.best_single = best_single(instance);
    report.gain_vs_balanced.hard = report.routed.hard - report.balanced.mean.hard;
    report.gain_vs_balanced.easy = report.routed.easy - report.balanced.mean.easy;
    report.gain_vs_balanced.overall = report.routed.overall - report.balanced.mean.overall;
    report.gain_vs_balanced.n_hard = report.routed.n_hard;
    report.gain_vs_balanced.n_easy = report.routed.n_easy;
    report.gain_vs_single = report.routed.overall - report.best_single;
    return report;
}

std::pair<std::string, std::string> select_pair(const MemeScoreTable& table, double accuracy_window) {
    const std::size_t m = table.n_models();
    if (m < 2) {
        throw Error(ErrorCode::InvalidArgument, kModule, "pair selection needs at least two models");
    }
    const auto& diff = table.column("Difficulty");
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return table.model_ids[a] < table.model_ids[b]; });

    bool found = false;
    double best_gap = 0.0;
    std::pair<std::size_t, std::size_t> best{0, 0};
    for (std::size_t x = 0; x < m; ++x) {
        for (std::size_t y = x + 1; y < m; ++y) {
            const std::size_t a = order[x];
            const std::size_t b = order[y];
            // absorb rounding in percentage-derived inputs
            if (std::abs(table.accuracy[a] - table.accuracy[b]) > accuracy_window + 1e-12) continue;
            const double gap = std::abs(diff[a] - diff[b]);
            if (!found || gap > best_gap) {
                found = true;
                best_gap = gap;
                best = diff[b] > diff[a] ? std::pair{b, a} : std::pair{a, b};
            }
        }
    }
    if (!found) {
        throw Error(ErrorCode::NoPairWithinWindow, kModule,
                    fmt::format("no two models within {:.2f} accuracy points", 100.0 * accuracy_window));
    }
    return {table.model_ids[best.first], table.model_ids[best.second]};
}

std::string format_routing_report(const RoutingReport& r) {
    std::string out;
    out += fmt::format("pair,{} (hi-Diff) vs {} (low-Diff)\n", r.hi_model, r.lo_model);
    out += "method,hard,easy,overall\n";
    out += fmt::format("Difficulty Routing,{},{},{}\n", pct(r.routed.hard), pct(r.routed.easy), pct(r.routed.overall));
    out += fmt::format("Balanced Routing,{} (± {}),{} (± {}),{} (± {})\n", pct(r.balanced.mean.hard),
                       pct(r.balanced.std.hard), pct(r.balanced.mean.easy), pct(r.balanced.std.easy),
                       pct(r.balanced.mean.overall), pct(r.balanced.std.overall));
    out += fmt::format("Best Single Model (Without Routing),--,--,{}\n", pct(r.best_single));
    out += fmt::format("Gains of Difficulty Routing,{},{},{} vs Balanced; {} vs Single\n",
                       signed_pct(r.gain_vs_balanced.hard), signed_pct(r.gain_vs_balanced.easy),
                       signed_pct(r.gain_vs_balanced.overall), signed_pct(r.gain_vs_single));
    return out;
}

}  // namespace memeprobe
