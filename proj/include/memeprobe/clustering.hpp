#pragma once

#include <cstddef>
#include <vector>

#include "memeprobe/perception.hpp"
#include "memeprobe/properties.hpp"

namespace memeprobe {

inline constexpr double kDefaultTau = 0.8;

struct ClusterPartition {
    std::vector<std::size_t> assignments;            // probe -> cluster label
    std::vector<std::vector<std::size_t>> clusters;  // ascending members, ordered by smallest member
    std::vector<std::size_t> prototypes;             // one probe per cluster
    double tau = kDefaultTau;
};

struct DedupMap {
    std::vector<std::size_t> representative;       // original probe -> reduced row
    std::vector<std::vector<std::size_t>> groups;  // reduced row -> original probes, ascending
};

struct DedupResult {
    PerceptionMatrix reduced;
    DedupMap map;
};

/// Collapses bit-identical rows. Reduced rows keep first-occurrence order and
/// the id of the first probe in each group.
DedupResult dedup_rows(const PerceptionMatrix& matrix);

/// Connected components of the graph with an edge wherever S(i,k) >= tau.
/// Components are ordered by smallest member; members ascend.
std::vector<std::vector<std::size_t>> threshold_components(const SimilarityMatrix& similarity, double tau);

/// Complete-linkage agglomeration inside each threshold component, cut at
/// dissimilarity 1 - tau (inclusive). Merge ties go to the pair with the
/// smallest member index; prototype ties to the smallest index.
ClusterPartition cluster(const SimilarityMatrix& similarity, double tau);

/// Mean similarity over ordered member pairs; 0 for singletons.
double intra_similarity(const SimilarityMatrix& similarity, const std::vector<std::size_t>& members);

PropertyVector typicality(const SimilarityMatrix& similarity, const ClusterPartition& partition);
PropertyVector bridge(const SimilarityMatrix& similarity, const ClusterPartition& partition);

/// Lifts a partition over reduced rows back to the original probes. The first
/// probe of the reduced prototype's group becomes the prototype.
ClusterPartition expand_partition(const ClusterPartition& reduced, const DedupMap& map);

/// Copies per-reduced-row values to every original probe.
std::vector<double> broadcast(const std::vector<double>& reduced_values, const DedupMap& map);

}  // namespace memeprobe
