#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace memeprobe {

inline constexpr std::size_t kDefaultKdeGrid = 512;

/// 0.9 * min(sd, IQR / 1.34) * n^(-1/5) with the sample standard deviation
/// and linearly interpolated quartiles. Falls back to 1e-3 * max(range, 1)
/// when that spread is zero.
double silverman_bandwidth(std::span<const double> sample);

/// Jensen-Shannon divergence (natural log) between Gaussian KDEs of the two
/// samples, each with its own Silverman bandwidth, evaluated on a shared
/// uniform grid over [min - 3h, max + 3h] where h is the larger bandwidth.
double js_divergence(std::span<const double> a, std::span<const double> b,
                     std::size_t grid_points = kDefaultKdeGrid);

/// Ranks starting at 1; ties share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> values);

/// Pearson correlation of average ranks. Empty when either side has zero
/// rank variance.
std::optional<double> spearman(std::span<const double> xs, std::span<const double> ys);

}  // namespace memeprobe
