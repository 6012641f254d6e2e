#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "holidet/series.hpp"

namespace holidet::signal {

/// Squared DFT magnitudes per bin, full length T. frequencies[k] = k/T
/// (cycles per sample); the corresponding period is T/k samples.
struct Spectrum {
    std::vector<double> powers;
    std::vector<double> frequencies;
};

double mean(const TimeSeries& series, Subrange range);

/// Population variance (divide by the range length).
double variance(const TimeSeries& series, Subrange range);

/// Forward transform Y_k = sum_t y_t exp(-2*pi*i*k*t/T), k = 0..T-1.
std::vector<std::complex<double>> dft(const TimeSeries& series);

Spectrum periodogram(const TimeSeries& series);

/// ACF(k) = (1/T) * sum_{t} y_t * y_{t+k}, lagged values past the end
/// treated as zero. Output has max_lag + 1 entries.
std::vector<double> acf(const TimeSeries& series, std::size_t max_lag);

/// Series divided by its global standard deviation after mean removal.
/// A constant series comes back all-zero.
TimeSeries zscore(const TimeSeries& series);

}  // namespace holidet::signal
