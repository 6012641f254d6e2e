#pragma once

#include <cstddef>
#include <vector>

#include "holidet/series.hpp"

namespace holidet::changepoint {

enum class CostModel { l2, gaussian };

/// Merging stops either when the cheapest merge would cost more than a
/// threshold, or when the window count has been reduced to a target.
struct StopRule {
    enum class Kind { merge_threshold, window_count };
    Kind kind = Kind::merge_threshold;
    double threshold = 250.0;
    std::size_t target_windows = 2;

    static StopRule max_merge_cost(double threshold) {
        return {Kind::merge_threshold, threshold, 2};
    }
    static StopRule windows(std::size_t n) {
        return {Kind::window_count, 0.0, n};
    }
};

/// Ordered breakpoints t_0 = 0 < t_1 < ... < t_n = T tiling the series.
/// Every window spans at least grid_size samples (the final one may be
/// longer, never shorter).
struct Segmentation {
    std::vector<std::size_t> breakpoints;
    std::size_t grid_size = 0;

    std::size_t window_count() const {
        return breakpoints.empty() ? 0 : breakpoints.size() - 1;
    }
    Subrange window(std::size_t k) const {
        return {breakpoints[k], breakpoints[k + 1]};
    }
};

/// One greedy merge: which interior breakpoint was removed, at what cost.
struct MergeRecord {
    std::size_t removed_index = 0;
    double merge_gain = 0.0;
    std::size_t step = 0;
};

struct BottomUpResult {
    Segmentation segmentation;
    std::vector<MergeRecord> merges;
};

/// Sum of squared deviations from the window mean.
double cost_l2(const TimeSeries& series, Subrange range);

/// n*log(max(var, eps)) + sum((y - mean)^2) / max(var, eps), eps = 1e-8.
/// Sensitive to both mean and variance shifts. Requires >= 2 samples.
double cost_gaussian(const TimeSeries& series, Subrange range);

double cost(const TimeSeries& series, Subrange range, CostModel model);

inline constexpr double kVarianceFloor = 1e-8;

/// Greedy bottom-up merging from a regular grid of delta-sized cells
/// (the last cell absorbs T mod delta). Each step removes the interior
/// breakpoint whose merge gain
///   c(union) - c(left) - c(right)
/// is smallest, ties to the lowest breakpoint, until the stop rule fires.
/// Returns the surviving breakpoints and the full merge audit trail.
BottomUpResult bottom_up(const TimeSeries& series, CostModel model,
                         std::size_t grid_size, const StopRule& stop);

}  // namespace holidet::changepoint
