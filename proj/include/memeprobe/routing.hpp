#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "memeprobe/memescore.hpp"

namespace memeprobe {

/// Items at or above this level are hard and go to the high-Difficulty model.
inline constexpr int kHardLevel = 4;

struct RoutingInstance {
    std::vector<std::string> item_ids;
    std::vector<int> levels;  // 1..5
    std::vector<bool> hi_correct;
    std::vector<bool> lo_correct;

    [[nodiscard]] std::size_t size() const noexcept { return item_ids.size(); }
};

/// Throws InvalidArgument on ragged vectors, an empty instance, duplicate
/// item ids or levels outside 1..5.
void validate(const RoutingInstance& instance);

/// Accuracies as fractions. A subset with no items reports 0.
struct RoutedAccuracy {
    double hard = 0.0;
    double easy = 0.0;
    double overall = 0.0;
    std::size_t n_hard = 0;
    std::size_t n_easy = 0;
};

struct BalancedBaseline {
    std::vector<std::uint64_t> seeds;
    std::vector<RoutedAccuracy> per_seed;
    RoutedAccuracy mean;
    RoutedAccuracy std;  // population std over seeds
};

struct RoutingReport {
    std::string hi_model;
    std::string lo_model;
    RoutedAccuracy routed;
    BalancedBaseline balanced;
    double best_single = 0.0;
    RoutedAccuracy gain_vs_balanced;  // routed - balanced mean, per column
    double gain_vs_single = 0.0;      // routed overall - best single
};

RoutedAccuracy difficulty_route(const RoutingInstance& instance);

/// Per seed and level, items are ordered by keyed_hash(seed, level, item id)
/// and the first ceil(count / 2) go to the high-Difficulty model.
BalancedBaseline balanced_baseline(const RoutingInstance& instance, const std::vector<std::uint64_t>& seeds);

double best_single(const RoutingInstance& instance);

std::vector<std::uint64_t> default_routing_seeds();  // 0..9

RoutingReport evaluate_routing(const RoutingInstance& instance, const std::vector<std::uint64_t>& seeds,
                               std::string hi_model = "hi", std::string lo_model = "lo");

/// Among model pairs whose accuracy gap is at most `accuracy_window`
/// (fraction units), the one with the largest Difficulty-score gap. Returns
/// (higher-Difficulty id, lower-Difficulty id).
std::pair<std::string, std::string> select_pair(const MemeScoreTable& table, double accuracy_window);

/// Table rows: Difficulty Routing, Balanced Routing, Best Single Model,
/// Gains of Difficulty Routing; columns Hard (L4-5), Easy (L1-3), Overall.
std::string format_routing_report(const RoutingReport& report);

}  // namespace memeprobe
