#include "memeprobe/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "memeprobe/error.hpp"

namespace memeprobe {

namespace {

constexpr const char* kModule = "clustering";

struct RowHash {
    std::size_t operator()(const std::vector<std::uint64_t>& words) const noexcept {
        std::uint64_t h = 0x9e3779b97f4a7c15ULL;
        for (std::uint64_t w : words) {
            h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};

void check_tau(double tau) {
    if (!(tau >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, kModule, "tau must be >= 0");
    }
}

// Union-find with smallest-index roots.
struct DisjointSets {
    std::vector<std::size_t> parent;
    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a < b) parent[b] = a;
        else parent[a] = b;
    }
};

// Complete linkage over one component, expressed on agreement counts: the
// link between two clusters is the minimum agreement over their cross pairs,
// and the pair with the largest link merges first while link >= threshold.
std::vector<std::vector<std::size_t>> complete_linkage(const SimilarityMatrix& similarity,
                                                       const std::vector<std::size_t>& members,
                                                       std::uint32_t threshold) {
    const std::size_t k = members.size();
    if (k == 1) return {members};

    std::vector<std::uint32_t> link(k * k);
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b) {
            link[a * k + b] = similarity.agreements(members[a], members[b]);
        }
    }
    std::vector<bool> active(k, true);
    std::vector<std::vector<std::size_t>> groups(k);
    for (std::size_t a = 0; a < k; ++a) groups[a] = {members[a]};

    // nearest[a]: active partner with the largest link, smallest index on ties
    std::vector<std::size_t> nearest(k, k);
    auto refresh = [&](std::size_t a) {
        std::size_t best = k;
        std::uint32_t best_link = 0;
        for (std::size_t b = 0; b < k; ++b) {
            if (b == a || !active[b]) continue;
            const std::uint32_t l = link[a * k + b];
            if (best == k || l > best_link) {
                best = b;
                best_link = l;
            }
        }
        nearest[a] = best;
    };
    for (std::size_t a = 0; a < k; ++a) refresh(a);

    std::size_t remaining = k;
    while (remaining > 1) {
        std::size_t x = k;
        std::uint32_t best_link = 0;
        for (std::size_t a = 0; a < k; ++a) {
            if (!active[a] || nearest[a] == k) continue;
            const std::uint32_t l = link[a * k + nearest[a]];
            if (x == k || l > best_link) {
                x = a;
                best_link = l;
            }
        }
        if (x == k || best_link < threshold) break;
        const std::size_t y = nearest[x];  // x < y by the scan order
        for (std::size_t c = 0; c < k; ++c) {
            if (!active[c] || c == x || c == y) continue;
            const std::uint32_t merged = std::min(link[x * k + c], link[y * k + c]);
            link[x * k + c] = merged;
            link[c * k + x] = merged;
        }
        active[y] = false;
        groups[x].insert(groups[x].end(), groups[y].begin(), groups[y].end());
        groups[y].clear();
        --remaining;
        for (std::size_t c = 0; c < k; ++c) {
            if (!active[c]) continue;
            if (c == x || nearest[c] == x || nearest[c] == y) refresh(c);
        }
    }

    std::vector<std::vector<std::size_t>> out;
    for (std::size_t a = 0; a < k; ++a) {
        if (!active[a]) continue;
        std::sort(groups[a].begin(), groups[a].end());
        out.push_back(std::move(groups[a]));
    }
    return out;
}

std::size_t pick_prototype(const SimilarityMatrix& similarity, const std::vector<std::size_t>& members) {
    std::size_t best = members.front();
    std::uint64_t best_sum = 0;
    bool first = true;
    for (std::size_t i : members) {
        std::uint64_t sum = 0;
        for (std::size_t k : members) {
            if (k != i) sum += similarity.agreements(i, k);
        }
        if (first || sum > best_sum) {
            best = i;
            best_sum = sum;
            first = false;
        }
    }
    return best;
}

void check_partition(const SimilarityMatrix& similarity, const ClusterPartition& partition) {
    if (partition.assignments.size() != similarity.size()) {
        throw Error(ErrorCode::DimensionMismatch, kModule, "partition and similarity sizes differ");
    }
    if (partition.prototypes.size() != partition.clusters.size()) {
        throw Error(ErrorCode::InvalidArgument, kModule, "partition needs one prototype per cluster");
    }
}

}  // namespace

DedupResult dedup_rows(const PerceptionMatrix& matrix) {
    std::unordered_map<std::vector<std::uint64_t>, std::size_t, RowHash> seen;
    DedupMap map;
    map.representative.resize(matrix.n_probes());
    std::vector<std::size_t> first_rows;
    for (std::size_t i = 0; i < matrix.n_probes(); ++i) {
        const auto row = matrix.row(i);
        std::vector<std::uint64_t> key(row.begin(), row.end());
        auto [it, inserted] = seen.emplace(std::move(key), map.groups.size());
        if (inserted) {
            map.groups.push_back({});
            first_rows.push_back(i);
        }
        map.representative[i] = it->second;
        map.groups[it->second].push_back(i);
    }
    return {select_rows(matrix, first_rows), std::move(map)};
}

std::vector<std::vector<std::size_t>> threshold_components(const SimilarityMatrix& similarity, double tau) {
    check_tau(tau);
    const std::size_t n = similarity.size();
    const std::uint32_t threshold = similarity.threshold_count(tau);
    DisjointSets sets(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = i + 1; k < n; ++k) {
            if (similarity.agreements(i, k) >= threshold) sets.unite(i, k);
        }
    }
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> slot(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t root = sets.find(i);
        if (slot[root] == n) {
            slot[root] = out.size();
            out.push_back({});
        }
        out[slot[root]].push_back(i);
    }
    return out;
}

ClusterPartition cluster(const SimilarityMatrix& similarity, double tau) {
    const auto components = threshold_components(similarity, tau);
    const std::uint32_t threshold = similarity.threshold_count(tau);

    ClusterPartition out;
    out.tau = tau;
    for (const auto& component : components) {
        for (auto& c : complete_linkage(similarity, component, threshold)) {
            out.clusters.push_back(std::move(c));
        }
    }
    std::sort(out.clusters.begin(), out.clusters.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    out.assignments.assign(similarity.size(), 0);
    for (std::size_t label = 0; label < out.clusters.size(); ++label) {
        for (std::size_t i : out.clusters[label]) out.assignments[i] = label;
        out.prototypes.push_back(pick_prototype(similarity, out.clusters[label]));
    }
    return out;
}

double intra_similarity(const SimilarityMatrix& similarity, const std::vector<std::size_t>& members) {
    const std::size_t size = members.size();
    if (size < 2) return 0.0;
    std::uint64_t total = 0;
    for (std::size_t i : members) {
        for (std::size_t k : members) {
            if (k != i) total += similarity.agreements(i, k);
        }
    }
    const double pairs = static_cast<double>(size) * static_cast<double>(size - 1);
    return static_cast<double>(total) / (pairs * static_cast<double>(similarity.n_models()));
}

PropertyVector typicality(const SimilarityMatrix& similarity, const ClusterPartition& partition) {
    check_partition(similarity, partition);
    const auto m = static_cast<double>(similarity.n_models());
    PropertyVector out{Property::Typicality, std::vector<double>(similarity.size(), 0.0)};
    for (std::size_t label = 0; label < partition.clusters.size(); ++label) {
        const auto& members = partition.clusters[label];
        const std::size_t size = members.size();
        const std::size_t proto = partition.prototypes[label];
        if (size == 1) {
            out.values[proto] = 0.5;
            continue;
        }
        const double log_size = std::log(static_cast<double>(size));
        const double h = std::sqrt(log_size / (1.0 + log_size));
        const double g = 1.0 / std::sqrt(1.0 + log_size);
        const double intra = intra_similarity(similarity, members);
        for (std::size_t i : members) {
            if (i == proto) {
                out.values[i] = 0.5 + 0.5 * h * intra;
                continue;
            }
            std::uint64_t sum = 0;
            for (std::size_t k : members) {
                if (k != i) sum += similarity.agreements(i, k);
            }
            const double centrality = static_cast<double>(sum) / (static_cast<double>(size - 1) * m);
            out.values[i] = g * centrality;
        }
    }
    return out;
}

PropertyVector bridge(const SimilarityMatrix& similarity, const ClusterPartition& partition) {
    check_partition(similarity, partition);
    const std::size_t n = similarity.size();
    const std::size_t clusters = partition.clusters.size();
    PropertyVector out{Property::Bridge, std::vector<double>(n, 0.0)};
    std::vector<std::uint64_t> mass(clusters);
    for (std::size_t i = 0; i < n; ++i) {
        std::fill(mass.begin(), mass.end(), 0);
        std::uint64_t total = 0;
        for (std::size_t k = 0; k < n; ++k) {
            if (k == i) continue;
            const std::uint32_t a = similarity.agreements(i, k);
            mass[partition.assignments[k]] += a;
            total += a;
        }
        if (total == 0) continue;
        double concentration = 0.0;
        for (std::uint64_t part : mass) {
            const double f = static_cast<double>(part) / static_cast<double>(total);
            concentration += f * f;
        }
        out.values[i] = 1.0 - concentration;
    }
    return out;
}

ClusterPartition expand_partition(const ClusterPartition& reduced, const DedupMap& map) {
    ClusterPartition out;
    out.tau = reduced.tau;
    out.assignments.assign(map.representative.size(), 0);
    for (std::size_t label = 0; label < reduced.clusters.size(); ++label) {
        std::vector<std::size_t> members;
        for (std::size_t r : reduced.clusters[label]) {
            const auto& g = map.groups.at(r);
            members.insert(members.end(), g.begin(), g.end());
        }
        std::sort(members.begin(), members.end());
        out.clusters.push_back(std::move(members));
        out.prototypes.push_back(map.groups.at(reduced.prototypes[label]).front());
    }
    // keep clusters ordered by smallest original member
    std::vector<std::size_t> order(out.clusters.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return out.clusters[a].front() < out.clusters[b].front(); });
    ClusterPartition sorted;
    sorted.tau = out.tau;
    sorted.assignments.assign(out.assignments.size(), 0);
    for (std::size_t label = 0; label < order.size(); ++label) {
        sorted.clusters.push_back(std::move(out.clusters[order[label]]));
        sorted.prototypes.push_back(out.prototypes[order[label]]);
        for (std::size_t i : sorted.clusters.back()) sorted.assignments[i] = label;
    }
    return sorted;
}

std::vector<double> broadcast(const std::vector<double>& reduced_values, const DedupMap& map) {
    if (reduced_values.size() != map.groups.size()) {
        throw Error(ErrorCode::DimensionMismatch, kModule, "reduced values do not match dedup groups");
    }
    std::vector<double> out(map.representative.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = reduced_values[map.representative[i]];
    return out;
}

}  // namespace memeprobe
