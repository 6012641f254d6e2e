#include "holidet/changepoint.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "holidet/signal.hpp"

namespace holidet::changepoint {

double cost_l2(const TimeSeries& series, Subrange range) {
    check_range(series, range, "cost_l2");
    const double m = signal::mean(series, range);
    double sum = 0.0;
    for (std::size_t t = range.a; t < range.b; ++t) {
        const double d = series.values[t] - m;
        sum += d * d;
    }
    return sum;
}

double cost_gaussian(const TimeSeries& series, Subrange range) {
    check_range(series, range, "cost_gaussian");
    if (range.size() < 2) {
        throw std::invalid_argument("cost_gaussian: window shorter than 2 samples");
    }
    const double n = static_cast<double>(range.size());
    const double var = signal::variance(series, range);
    const double floored = std::max(var, kVarianceFloor);
    // The deviation sum is evaluated literally even though it cancels to n
    // whenever the floor is inactive.
    const double m = signal::mean(series, range);
    double dev = 0.0;
    for (std::size_t t = range.a; t < range.b; ++t) {
        const double d = series.values[t] - m;
        dev += d * d;
    }
    return n * std::log(floored) + dev / floored;
}

double cost(const TimeSeries& series, Subrange range, CostModel model) {
    switch (model) {
        case CostModel::l2: return cost_l2(series, range);
        case CostModel::gaussian: return cost_gaussian(series, range);
    }
    throw std::invalid_argument("cost: unknown cost model");
}

BottomUpResult bottom_up(const TimeSeries& series, CostModel model,
                         std::size_t grid_size, const StopRule& stop) {
    const std::size_t n = series.size();
    if (grid_size < 2) {
        throw std::invalid_argument("bottom_up: grid_size must be >= 2");
    }
    if (n < 2 * grid_size) {
        throw std::invalid_argument("bottom_up: series of length " + std::to_string(n) +
                                    " is shorter than two grid cells");
    }

    std::vector<std::size_t> bp;
    const std::size_t cells = n / grid_size;
    bp.reserve(cells + 1);
    for (std::size_t i = 0; i + 1 < cells; ++i) {
        bp.push_back(i * grid_size);
    }
    bp.push_back((cells - 1) * grid_size);
    bp.push_back(n);

    std::vector<MergeRecord> merges;
    std::size_t step = 0;
    while (bp.size() > 2) {
        if (stop.kind == StopRule::Kind::window_count &&
            bp.size() - 1 <= stop.target_windows) {
            break;
        }
        double best_gain = std::numeric_limits<double>::infinity();
        std::size_t best_i = 0;
        for (std::size_t i = 1; i + 1 < bp.size(); ++i) {
            const Subrange left{bp[i - 1], bp[i]};
            const Subrange right{bp[i], bp[i + 1]};
            const Subrange merged{bp[i - 1], bp[i + 1]};
            const double gain = cost(series, merged, model) -
                                (cost(series, left, model) + cost(series, right, model));
            if (gain < best_gain) {
                best_gain = gain;
                best_i = i;
            }
        }
        if (stop.kind == StopRule::Kind::merge_threshold && best_gain > stop.threshold) {
            break;
        }
        merges.push_back({bp[best_i], best_gain, step++});
        bp.erase(bp.begin() + static_cast<std::ptrdiff_t>(best_i));
    }

    BottomUpResult result;
    result.segmentation.breakpoints = std::move(bp);
    result.segmentation.grid_size = grid_size;
    result.merges = std::move(merges);
    return result;
}

}  // namespace holidet::changepoint
