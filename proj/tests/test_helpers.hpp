#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "holidet/series.hpp"

// Shared test utilities: seeded data generators and independent reference
// implementations (kept free of the library's internals on purpose).
namespace testutil {

inline std::vector<double> random_values(std::size_t n, std::uint64_t seed,
                                         double lo = 0.0, double hi = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> out(n);
    for (auto& v : out) v = dist(rng);
    return out;
}

inline std::vector<double> gaussian_values(std::size_t n, std::uint64_t seed,
                                           double mean = 0.0, double sigma = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(mean, sigma);
    std::vector<double> out(n);
    for (auto& v : out) v = dist(rng);
    return out;
}

// Literal transform: Y_k = sum_t y_t exp(-2 pi i k t / T).
inline std::vector<std::complex<double>> naive_dft(const std::vector<double>& y) {
    const std::size_t n = y.size();
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> sum = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            const double angle = -2.0 * M_PI * static_cast<double>(k) *
                                 static_cast<double>(t) / static_cast<double>(n);
            sum += y[t] * std::complex<double>(std::cos(angle), std::sin(angle));
        }
        out[k] = sum;
    }
    return out;
}

// Literal autocorrelation with zero extension past the series end.
inline std::vector<double> naive_acf(const std::vector<double>& y, std::size_t max_lag) {
    const std::size_t n = y.size();
    std::vector<double> out(max_lag + 1, 0.0);
    for (std::size_t k = 0; k <= max_lag; ++k) {
        double sum = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            const double lagged = t + k < n ? y[t + k] : 0.0;
            sum += y[t] * lagged;
        }
        out[k] = sum / static_cast<double>(n);
    }
    return out;
}

inline double naive_mean(const std::vector<double>& y, std::size_t a, std::size_t b) {
    double sum = 0.0;
    for (std::size_t t = a; t < b; ++t) sum += y[t];
    return sum / static_cast<double>(b - a);
}

inline double naive_variance(const std::vector<double>& y, std::size_t a, std::size_t b) {
    const double m = naive_mean(y, a, b);
    double sum = 0.0;
    for (std::size_t t = a; t < b; ++t) sum += (y[t] - m) * (y[t] - m);
    return sum / static_cast<double>(b - a);
}

}  // namespace testutil
