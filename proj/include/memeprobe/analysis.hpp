#pragma once

#include <vector>

#include "memeprobe/clustering.hpp"
#include "memeprobe/perception.hpp"
#include "memeprobe/properties.hpp"

namespace memeprobe {

/// Everything the probe side produces for one matrix.
struct ProbeAnalysis {
    PropertySet properties;
    std::vector<double> surprise_easy;
    std::vector<double> surprise_hard;
    DedupMap dedup;
    ClusterPartition partition;          // over the original probes
    std::vector<double> cluster_intra;   // per cluster, over deduplicated rows
};

/// Full probe pipeline: difficulty, risk, surprise and uniqueness on the
/// matrix as given; clustering, typicality and bridge on deduplicated rows,
/// broadcast back to duplicates.
ProbeAnalysis analyze_probes(const PerceptionMatrix& matrix, double tau);

inline PropertySet compute_properties(const PerceptionMatrix& matrix, double tau) {
    return analyze_probes(matrix, tau).properties;
}

}  // namespace memeprobe
