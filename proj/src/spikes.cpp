#include "holidet/spikes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "holidet/signal.hpp"

namespace holidet::spikes {

namespace {

bool is_constant(const TimeSeries& series) {
    for (const double v : series.values) {
        if (v != series.values.front()) return false;
    }
    return true;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

double kde_threshold(const TimeSeries& series) {
    const std::size_t n = series.size();
    if (n < 16) {
        throw std::invalid_argument("kde_threshold: series shorter than 16 samples");
    }
    if (is_constant(series)) {
        throw std::domain_error("kde_threshold: constant series has no spikes");
    }

    const Subrange full{0, n};
    const double mu = signal::mean(series, full);
    const double sd = std::sqrt(signal::variance(series, full));

    std::vector<double> sorted = series.values;
    std::sort(sorted.begin(), sorted.end());
    const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
    double spread = sd;
    if (iqr > 0.0) spread = std::min(sd, iqr / 1.34);
    const double h = 0.9 * spread * std::pow(static_cast<double>(n), -0.2);

    const double lo = sorted.front();
    const double hi = sorted.back();
    constexpr std::size_t kBins = 512;
    const double step = (hi - lo) / static_cast<double>(kBins - 1);

    // Linear-binned KDE: histogram on the grid, then a truncated Gaussian
    // smoothing pass.
    std::vector<double> counts(kBins, 0.0);
    for (const double v : series.values) {
        auto idx = static_cast<std::size_t>(std::llround((v - lo) / step));
        idx = std::min(idx, kBins - 1);
        counts[idx] += 1.0;
    }
    const auto reach = std::min<std::size_t>(
        kBins, static_cast<std::size_t>(std::ceil(5.0 * h / step)) + 1);
    std::vector<double> kernel(reach);
    for (std::size_t d = 0; d < reach; ++d) {
        const double z = static_cast<double>(d) * step / h;
        kernel[d] = std::exp(-0.5 * z * z);
    }
    std::vector<double> density(kBins, 0.0);
    for (std::size_t j = 0; j < kBins; ++j) {
        if (counts[j] == 0.0) continue;
        const std::size_t first = j >= reach - 1 ? j - (reach - 1) : 0;
        const std::size_t last = std::min(kBins - 1, j + reach - 1);
        for (std::size_t i = first; i <= last; ++i) {
            const std::size_t d = i > j ? i - j : j - i;
            density[i] += counts[j] * kernel[d];
        }
    }

    // Local maxima, plateau-tolerant at the grid boundaries.
    std::vector<std::size_t> modes;
    for (std::size_t i = 0; i < kBins; ++i) {
        const double left = i == 0 ? -1.0 : density[i - 1];
        const double right = i + 1 == kBins ? -1.0 : density[i + 1];
        if (density[i] > left && density[i] >= right) {
            modes.push_back(i);
        }
    }
    if (modes.size() < 2) {
        return mu + 2.0 * sd;
    }
    std::size_t top1 = modes[0], top2 = modes[1];
    if (density[top2] > density[top1]) std::swap(top1, top2);
    for (std::size_t k = 2; k < modes.size(); ++k) {
        if (density[modes[k]] > density[top1]) {
            top2 = top1;
            top1 = modes[k];
        } else if (density[modes[k]] > density[top2]) {
            top2 = modes[k];
        }
    }
    std::size_t a = std::min(top1, top2);
    std::size_t b = std::max(top1, top2);
    if (b - a < 2) {
        return mu + 2.0 * sd;
    }

    double min_density = std::numeric_limits<double>::infinity();
    for (std::size_t i = a + 1; i < b; ++i) {
        min_density = std::min(min_density, density[i]);
    }
    // Of the bins tying at the minimum, take the one nearest the centre of
    // the valley.
    const double centre = 0.5 * (static_cast<double>(a) + static_cast<double>(b));
    std::size_t pick = a + 1;
    double pick_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = a + 1; i < b; ++i) {
        if (density[i] != min_density) continue;
        const double dist = std::abs(static_cast<double>(i) - centre);
        if (dist < pick_dist) {
            pick_dist = dist;
            pick = i;
        }
    }
    return lo + static_cast<double>(pick) * step;
}

std::vector<Spike> detect_spikes(const TimeSeries& series, double threshold) {
    if (!std::isfinite(threshold)) {
        throw std::invalid_argument("detect_spikes: threshold must be finite");
    }
    const std::size_t n = series.size();
    const auto& v = series.values;
    std::vector<Spike> out;
    std::size_t t = 0;
    while (t < n) {
        if (!(v[t] > threshold)) {
            ++t;
            continue;
        }
        Spike spike;
        spike.start = t;
        double sum = 0.0;
        double peak = -std::numeric_limits<double>::infinity();
        while (t < n && v[t] > threshold) {
            sum += v[t];
            peak = std::max(peak, v[t]);
            ++t;
        }
        spike.end = t;
        double baseline = 0.0;
        int flanks = 0;
        if (spike.start > 0) {
            baseline += v[spike.start - 1];
            ++flanks;
        }
        if (spike.end < n) {
            baseline += v[spike.end];
            ++flanks;
        }
        if (flanks > 0) baseline /= flanks;
        spike.baseline = baseline;
        spike.peak = peak;
        spike.mean_above_baseline =
            sum / static_cast<double>(spike.end - spike.start) - baseline;
        out.push_back(spike);
    }
    return out;
}

std::vector<std::size_t> retrieve_periodic(const std::vector<std::size_t>& spike_starts,
                                           const RetrievalParams& params) {
    if (spike_starts.empty()) {
        throw std::invalid_argument("retrieve_periodic: no spikes");
    }
    if (!(params.period >= 2.0)) {
        throw std::invalid_argument("retrieve_periodic: period must be >= 2 samples");
    }
    if (params.max_error < 0.0 || !(params.max_error < params.period / 2.0)) {
        throw std::invalid_argument("retrieve_periodic: max_error must lie in [0, P/2)");
    }
    const double period = params.period;
    const double m = params.max_error;
    const std::size_t n = spike_starts.size();

    // Anchor: the spike with the most companions sitting within m of a
    // multiple of the period away from it.
    std::size_t anchor = 0;
    std::size_t best_count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t count = 0;
        for (std::size_t k = 0; k < n; ++k) {
            const double d = std::abs(static_cast<double>(spike_starts[k]) -
                                      static_cast<double>(spike_starts[i]));
            const double r = std::fmod(d, period);
            if (std::min(r, period - r) <= m) ++count;
        }
        if (count > best_count) {
            best_count = count;
            anchor = i;
        }
    }

    double max_offset = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        max_offset = std::max(max_offset, std::abs(static_cast<double>(spike_starts[k]) -
                                                   static_cast<double>(spike_starts[anchor])));
    }
    const auto max_jumps = static_cast<std::size_t>(std::floor(max_offset / period));

    std::set<std::size_t> selected{anchor};
    for (const double direction : {1.0, -1.0}) {
        std::size_t current = anchor;
        std::size_t j = 1;
        while (j <= max_jumps) {
            const double target = static_cast<double>(spike_starts[current]) +
                                  static_cast<double>(j) * direction * period;
            std::size_t best_k = 0;
            double best_dev = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < n; ++k) {
                const double dev = std::abs(static_cast<double>(spike_starts[k]) - target);
                if (dev < best_dev) {
                    best_dev = dev;
                    best_k = k;
                }
            }
            if (best_dev <= m) {
                selected.insert(best_k);
                current = best_k;
                j = 1;
            } else {
                ++j;
            }
        }
    }

    std::vector<std::size_t> out;
    out.reserve(selected.size());
    for (const std::size_t idx : selected) out.push_back(spike_starts[idx]);
    std::sort(out.begin(), out.end());
    return out;
}

ExtractionResult reconstruct(const TimeSeries& series, const std::vector<Spike>& selected) {
    std::vector<Spike> sorted = selected;
    std::sort(sorted.begin(), sorted.end(),
              [](const Spike& x, const Spike& y) { return x.start < y.start; });
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (sorted[i].start >= sorted[i].end || sorted[i].end > series.size()) {
            throw std::invalid_argument("reconstruct: spike bounds out of range");
        }
        if (i > 0 && sorted[i].start < sorted[i - 1].end) {
            throw std::invalid_argument("reconstruct: overlapping spikes");
        }
    }

    ExtractionResult result;
    result.component = series;
    result.residue = series;
    std::fill(result.component.values.begin(), result.component.values.end(), 0.0);
    result.selected_spikes = sorted;

    for (const Spike& spike : sorted) {
        for (std::size_t t = spike.start; t < spike.end; ++t) {
            const double y = series.values[t];
            double c = spike.mean_above_baseline;
            double r = y - c;
            if (c + r != y) {
                c = y - r;
                r = y - c;
            }
            // Last-ulp nudge so that component + residue rebuilds the input
            // bit for bit.
            for (int attempt = 0; attempt < 4 && c + r != y; ++attempt) {
                r = std::nextafter(r, c + r < y ? std::numeric_limits<double>::infinity()
                                                : -std::numeric_limits<double>::infinity());
            }
            if (c + r != y) {
                c = 0.0;
                r = y;
            }
            result.component.values[t] = c;
            result.residue.values[t] = r;
        }
    }
    return result;
}

std::vector<ExtractionResult> extract_all(const TimeSeries& series,
                                          const ExtractionConfig& config) {
    std::vector<ExtractionResult> results;
    TimeSeries current = series;
    for (int iteration = 0; iteration < config.max_iterations; ++iteration) {
        const auto periods = autoperiod::detect_periods(current, config.period_detection);
        if (periods.empty()) break;
        if (is_constant(current)) break;

        const double threshold = kde_threshold(current);
        const auto spikes = detect_spikes(current, threshold);
        if (spikes.empty()) break;

        std::vector<std::size_t> starts(spikes.size());
        for (std::size_t i = 0; i < spikes.size(); ++i) starts[i] = spikes[i].start;
        const double period = periods.front().refined_period;
        const auto selected_starts =
            retrieve_periodic(starts, {period, config.max_error});

        std::vector<Spike> selected;
        for (const Spike& spike : spikes) {
            if (std::binary_search(selected_starts.begin(), selected_starts.end(), spike.start)) {
                selected.push_back(spike);
            }
        }
        ExtractionResult extraction = reconstruct(current, selected);
        extraction.period = period;
        current = extraction.residue;
        results.push_back(std::move(extraction));
    }
    return results;
}

}  // namespace holidet::spikes
