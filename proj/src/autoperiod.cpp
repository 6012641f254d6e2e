#include "holidet/autoperiod.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "holidet/signal.hpp"

namespace holidet::autoperiod {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic Fisher-Yates driven by a splitmix64 stream.
void shuffle_values(std::vector<double>& values, std::uint64_t seed) {
    std::uint64_t state = seed;
    for (std::size_t i = values.size() - 1; i > 0; --i) {
        state = splitmix64(state);
        const std::size_t j = static_cast<std::size_t>(state % (i + 1));
        std::swap(values[i], values[j]);
    }
}

double max_non_dc_power(const signal::Spectrum& spec) {
    double best = 0.0;
    for (std::size_t k = 1; k < spec.powers.size(); ++k) {
        best = std::max(best, spec.powers[k]);
    }
    return best;
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double sse = 0.0;
};

// Least-squares line through (lags[i], values[i]) for i in [first, last].
LineFit fit_line(const std::vector<double>& values, std::size_t lo,
                 std::size_t first, std::size_t last) {
    const double n = static_cast<double>(last - first + 1);
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = first; i <= last; ++i) {
        sx += static_cast<double>(lo + i);
        sy += values[i];
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = first; i <= last; ++i) {
        const double dx = static_cast<double>(lo + i) - mx;
        sxx += dx * dx;
        sxy += dx * (values[i] - my);
    }
    LineFit fit;
    fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    fit.intercept = my - fit.slope * mx;
    double sse = 0.0;
    for (std::size_t i = first; i <= last; ++i) {
        const double r = values[i] - (fit.intercept + fit.slope * static_cast<double>(lo + i));
        sse += r * r;
    }
    fit.sse = sse;
    return fit;
}

}  // namespace

std::size_t hill_half_width(const Config& config, double period_samples) {
    const auto scaled = static_cast<std::size_t>(
        std::llround(config.hill_halfwidth_frac * period_samples));
    return std::max(config.hill_halfwidth_min, scaled);
}

PermutationThreshold permutation_threshold(const TimeSeries& series,
                                           int n_permutations, std::uint64_t seed) {
    if (series.size() < 4) {
        throw std::invalid_argument("permutation_threshold: series shorter than 4 samples");
    }
    if (n_permutations < 2) {
        throw std::invalid_argument("permutation_threshold: need at least 2 permutations");
    }
    double highest = 0.0, second = 0.0;
    TimeSeries shuffled = series;
    for (int p = 0; p < n_permutations; ++p) {
        shuffled.values = series.values;
        shuffle_values(shuffled.values, splitmix64(seed ^ (0xA5A5A5A5ULL + static_cast<std::uint64_t>(p))));
        const double peak = max_non_dc_power(signal::periodogram(shuffled));
        if (peak > highest) {
            second = highest;
            highest = peak;
        } else if (peak > second) {
            second = peak;
        }
    }
    return {second, n_permutations, seed};
}

std::vector<PeriodCandidate> candidate_periods(const TimeSeries& series,
                                               const PermutationThreshold& threshold) {
    const auto spec = signal::periodogram(series);
    const std::size_t n = series.size();
    std::vector<PeriodCandidate> out;
    // Bins above T/2 mirror the lower half for real input and would map to
    // sub-2-sample periods, so the search stops at the Nyquist bin.
    for (std::size_t k = 1; k <= n / 2; ++k) {
        if (spec.powers[k] > threshold.value) {
            PeriodCandidate c;
            c.frequency_bin = k;
            c.period_samples = static_cast<double>(n) / static_cast<double>(k);
            c.power = spec.powers[k];
            out.push_back(c);
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const PeriodCandidate& a, const PeriodCandidate& b) {
        return a.power > b.power;
    });
    return out;
}

PeriodCandidate validate_on_acf(const TimeSeries& series, PeriodCandidate candidate,
                                std::size_t window_half_width, double acf_mean_excess) {
    const std::size_t n = series.size();
    const auto p = static_cast<std::size_t>(std::llround(candidate.period_samples));
    const double w = static_cast<double>(window_half_width);
    if (p < window_half_width ||
        !(candidate.period_samples + w < static_cast<double>(n) / 2.0)) {
        throw std::out_of_range("validate_on_acf: search window exceeds the ACF range");
    }
    const std::size_t lo = p - window_half_width;
    const std::size_t hi = p + window_half_width;
    const auto correlation = signal::acf(series, hi);
    std::vector<double> window(correlation.begin() + static_cast<std::ptrdiff_t>(lo),
                               correlation.begin() + static_cast<std::ptrdiff_t>(hi) + 1);

    // Exhaustive split search; each side keeps at least two points.
    double best_sse = 0.0;
    std::size_t best_split = 0;
    bool found = false;
    LineFit best_left, best_right;
    for (std::size_t s = 1; s + 1 < window.size(); ++s) {
        const LineFit left = fit_line(window, lo, 0, s);
        const LineFit right = fit_line(window, lo, s, window.size() - 1);
        const double sse = left.sse + right.sse;
        if (!found || sse < best_sse) {
            found = true;
            best_sse = sse;
            best_split = s;
            best_left = left;
            best_right = right;
        }
    }
    candidate.validated = false;
    candidate.refined_period = 0.0;
    if (!found) {
        return candidate;
    }

    double window_mean = 0.0;
    for (const double v : window) window_mean += v;
    window_mean /= static_cast<double>(window.size());

    const bool hill = best_left.slope > 0.0 && best_right.slope < 0.0;
    const bool significant = window[best_split] > window_mean + acf_mean_excess;
    if (hill && significant) {
        candidate.validated = true;
        candidate.refined_period = static_cast<double>(lo + best_split);
    }
    return candidate;
}

std::vector<PeriodCandidate> detect_periods(const TimeSeries& series, const Config& config) {
    const std::size_t n = series.size();
    if (n < config.min_window) {
        throw std::invalid_argument("detect_periods: window of " + std::to_string(n) +
                                    " samples is shorter than the minimum of " +
                                    std::to_string(config.min_window));
    }
    const auto threshold = permutation_threshold(series, config.n_permutations, config.seed);
    const auto candidates = candidate_periods(series, threshold);

    std::vector<PeriodCandidate> validated;
    for (const auto& candidate : candidates) {
        const std::size_t w = hill_half_width(config, candidate.period_samples);
        if (!(candidate.period_samples + static_cast<double>(w) < static_cast<double>(n) / 2.0) ||
            static_cast<std::size_t>(std::llround(candidate.period_samples)) < w) {
            continue;  // no room for the ACF window; cannot be validated
        }
        const auto checked = validate_on_acf(series, candidate, w, config.acf_mean_excess);
        if (checked.validated) {
            validated.push_back(checked);
        }
    }

    // Candidates already arrive strongest-first; collapse near-equal
    // refined periods onto the strongest representative.
    std::vector<PeriodCandidate> deduped;
    for (const auto& candidate : validated) {
        bool duplicate = false;
        for (const auto& kept : deduped) {
            const double rel = std::abs(candidate.refined_period - kept.refined_period) /
                               std::max(candidate.refined_period, kept.refined_period);
            if (rel <= config.dedup_tolerance) {
                duplicate = true;
                break;
            }
        }
        if (!duplicate) {
            deduped.push_back(candidate);
        }
    }
    return deduped;
}

}  // namespace holidet::autoperiod
