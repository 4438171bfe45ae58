#include "memeprobe/analysis.hpp"

#include <optional>
#include <utility>

namespace memeprobe {

ProbeAnalysis analyze_probes(const PerceptionMatrix& matrix, double tau) {
    ProbeAnalysis out;
    out.properties.probe_ids = matrix.probe_ids();
    out.properties[Property::Difficulty] = difficulty(matrix).values;
    out.properties[Property::Risk] = risk(matrix).values;

    auto surprise_parts = surprise(matrix);
    out.properties[Property::Surprise] = std::move(surprise_parts.surprise.values);
    out.surprise_easy = std::move(surprise_parts.easy);
    out.surprise_hard = std::move(surprise_parts.hard);

    auto dedup = dedup_rows(matrix);
    const bool has_duplicates = dedup.reduced.n_probes() != matrix.n_probes();

    std::optional<SimilarityMatrix> reduced_similarity;
    {
        SimilarityMatrix full = hamming_similarity(matrix);
        out.properties[Property::Uniqueness] = uniqueness(full).values;
        if (!has_duplicates) reduced_similarity.emplace(std::move(full));
    }
    if (has_duplicates) reduced_similarity.emplace(hamming_similarity(dedup.reduced));

    const ClusterPartition reduced_partition = cluster(*reduced_similarity, tau);
    out.properties[Property::Typicality] =
        broadcast(typicality(*reduced_similarity, reduced_partition).values, dedup.map);
    out.properties[Property::Bridge] = broadcast(bridge(*reduced_similarity, reduced_partition).values, dedup.map);

    out.partition = expand_partition(reduced_partition, dedup.map);
    // expand_partition keeps cluster order, so labels line up with the reduced ones
    for (const auto& members : reduced_partition.clusters) {
        out.cluster_intra.push_back(intra_similarity(*reduced_similarity, members));
    }
    out.dedup = std::move(dedup.map);
    return out;
}

}  // namespace memeprobe
