#pragma once

#include <cstdint>
#include <vector>

#include "holidet/series.hpp"

namespace holidet::autoperiod {

/// Periodogram bin that survived the significance threshold. The refined
/// period is the ACF lag confirmed by the hill test and is only set when
/// validated is true.
struct PeriodCandidate {
    std::size_t frequency_bin = 0;  // k >= 1, DC excluded
    double period_samples = 0.0;    // T / k
    double power = 0.0;
    bool validated = false;
    double refined_period = 0.0;
};

struct PermutationThreshold {
    double value = 0.0;
    int n_permutations = 100;
    std::uint64_t seed = 0;
};

struct Config {
    int n_permutations = 100;
    std::uint64_t seed = 0;
    double dedup_tolerance = 0.05;     // periods this close collapse to the stronger one
    double hill_halfwidth_frac = 0.2;  // ACF window half-width as a fraction of the period
    std::size_t hill_halfwidth_min = 2;
    double acf_mean_excess = 0.0;      // extra margin required over the window-mean ACF
    std::size_t min_window = 96;       // two days at 30-minute sampling
};

/// Half-width of the ACF validation window for a candidate period.
std::size_t hill_half_width(const Config& config, double period_samples);

/// Shuffle the sample order n times (Fisher-Yates, one derived seed per
/// permutation), take each shuffle's maximum non-DC periodogram power,
/// and return the second-highest of those maxima.
PermutationThreshold permutation_threshold(const TimeSeries& series,
                                           int n_permutations, std::uint64_t seed);

/// All bins 1 <= k <= T/2 with power strictly above the threshold,
/// strongest first (ties to the lower bin).
std::vector<PeriodCandidate> candidate_periods(const TimeSeries& series,
                                               const PermutationThreshold& threshold);

/// Two-segment linear regression over ACF lags [p - w, p + w]: the split
/// minimising the summed squared residuals must sit on a hill (positive
/// then negative slope) and its ACF value must exceed the window mean.
/// The split lag becomes the refined period.
PeriodCandidate validate_on_acf(const TimeSeries& series, PeriodCandidate candidate,
                                std::size_t window_half_width, double acf_mean_excess = 0.0);

/// Full procedure: permutation threshold, candidate bins, ACF validation,
/// deduplication of near-equal refined periods. Strongest first.
/// Rejects windows shorter than config.min_window samples.
std::vector<PeriodCandidate> detect_periods(const TimeSeries& series, const Config& config = {});

}  // namespace holidet::autoperiod
