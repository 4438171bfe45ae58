#include "memeprobe/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "memeprobe/error.hpp"

namespace memeprobe {

namespace {

constexpr const char* kModule = "analytics";

double quantile_sorted(const std::vector<double>& sorted, double p) {
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

void require_sample(std::span<const double> sample) {
    if (sample.size() < 2) {
        throw Error(ErrorCode::SampleTooSmall, kModule, "sample needs at least two values");
    }
}

// Unnormalized Gaussian kernel sums at each grid point, rescaled to unit mass.
std::vector<double> grid_density(std::span<const double> sample, double bandwidth, double lo, double step,
                                 std::size_t points) {
    std::vector<double> mass(points, 0.0);
    for (std::size_t g = 0; g < points; ++g) {
        const double x = lo + step * static_cast<double>(g);
        double sum = 0.0;
        for (double s : sample) {
            const double u = (x - s) / bandwidth;
            sum += std::exp(-0.5 * u * u);
        }
        mass[g] = sum;
    }
    double total = std::accumulate(mass.begin(), mass.end(), 0.0);
    if (!(total > 0.0)) {
        // kernels narrower than the grid spacing underflow; bin to nearest point
        std::fill(mass.begin(), mass.end(), 0.0);
        for (double s : sample) {
            const auto g = static_cast<std::size_t>(
                std::clamp(std::llround((s - lo) / step), 0LL, static_cast<long long>(points - 1)));
            mass[g] += 1.0;
        }
        total = static_cast<double>(sample.size());
    }
    for (double& v : mass) v /= total;
    return mass;
}

}  // namespace

double silverman_bandwidth(std::span<const double> sample) {
    require_sample(sample);
    const auto n = static_cast<double>(sample.size());
    const double mean = std::accumulate(sample.begin(), sample.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : sample) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (n - 1.0));

    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);

    const double spread = std::min(sd, iqr / 1.34);
    const double h = 0.9 * spread * std::pow(n, -0.2);
    if (h > 0.0) return h;
    const double range = sorted.back() - sorted.front();
    return 1e-3 * std::max(std::abs(range), 1.0);
}

double js_divergence(std::span<const double> a, std::span<const double> b, std::size_t grid_points) {
    require_sample(a);
    require_sample(b);
    if (grid_points < 2) {
        throw Error(ErrorCode::InvalidArgument, kModule, "KDE grid needs at least two points");
    }
    const double ha = silverman_bandwidth(a);
    const double hb = silverman_bandwidth(b);
    const double hmax = std::max(ha, hb);
    const auto [amin, amax] = std::minmax_element(a.begin(), a.end());
    const auto [bmin, bmax] = std::minmax_element(b.begin(), b.end());
    const double lo = std::min(*amin, *bmin) - 3.0 * hmax;
    const double hi = std::max(*amax, *bmax) + 3.0 * hmax;
    const double step = (hi - lo) / static_cast<double>(grid_points - 1);

    const auto p = grid_density(a, ha, lo, step, grid_points);
    const auto q = grid_density(b, hb, lo, step, grid_points);
    double kl_p = 0.0;
    double kl_q = 0.0;
    for (std::size_t g = 0; g < grid_points; ++g) {
        const double mid = 0.5 * (p[g] + q[g]);
        if (p[g] > 0.0) kl_p += p[g] * std::log(p[g] / mid);
        if (q[g] > 0.0) kl_q += q[g] * std::log(q[g] / mid);
    }
    return std::clamp(0.5 * (kl_p + kl_q), 0.0, std::log(2.0));
}

std::vector<double> average_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return values[x] < values[y]; });
    std::vector<double> ranks(n);
    std::size_t start = 0;
    while (start < n) {
        std::size_t end = start + 1;
        while (end < n && values[order[end]] == values[order[start]]) ++end;
        // positions start..end-1 hold ranks start+1..end
        const double rank = 0.5 * static_cast<double>(start + 1 + end);
        for (std::size_t t = start; t < end; ++t) ranks[order[t]] = rank;
        start = end;
    }
    return ranks;
}

std::optional<double> spearman(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) {
        throw Error(ErrorCode::DimensionMismatch, kModule, "spearman inputs differ in length");
    }
    require_sample(xs);
    const auto rx = average_ranks(xs);
    const auto ry = average_ranks(ys);
    const auto n = static_cast<double>(rx.size());
    const double mean = (n + 1.0) / 2.0;  // mean rank, ties included
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        const double dx = rx[i] - mean;
        const double dy = ry[i] - mean;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return std::nullopt;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace memeprobe
