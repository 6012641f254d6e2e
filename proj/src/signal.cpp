#include "holidet/signal.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace holidet::signal {

double mean(const TimeSeries& series, Subrange range) {
    check_range(series, range, "mean");
    double sum = 0.0;
    for (std::size_t t = range.a; t < range.b; ++t) {
        sum += series.values[t];
    }
    return sum / static_cast<double>(range.size());
}

double variance(const TimeSeries& series, Subrange range) {
    check_range(series, range, "variance");
    const double m = mean(series, range);
    double sum = 0.0;
    for (std::size_t t = range.a; t < range.b; ++t) {
        const double d = series.values[t] - m;
        sum += d * d;
    }
    return sum / static_cast<double>(range.size());
}

namespace {

std::mutex& fftw_plan_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

std::vector<std::complex<double>> dft(const TimeSeries& series) {
    const std::size_t n = series.size();
    if (n == 0) {
        throw std::invalid_argument("dft: empty series");
    }
    std::vector<std::complex<double>> in(n), out(n);
    for (std::size_t t = 0; t < n; ++t) {
        in[t] = {series.values[t], 0.0};
    }
    fftw_plan plan;
    {
        // fftw plan creation/destruction is not thread safe; execution is.
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(n),
                                reinterpret_cast<fftw_complex*>(in.data()),
                                reinterpret_cast<fftw_complex*>(out.data()),
                                FFTW_FORWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

Spectrum periodogram(const TimeSeries& series) {
    const auto coeffs = dft(series);
    const std::size_t n = coeffs.size();
    Spectrum spec;
    spec.powers.resize(n);
    spec.frequencies.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        spec.powers[k] = std::norm(coeffs[k]);
        spec.frequencies[k] = static_cast<double>(k) / static_cast<double>(n);
    }
    return spec;
}

std::vector<double> acf(const TimeSeries& series, std::size_t max_lag) {
    const std::size_t n = series.size();
    if (n == 0 || max_lag >= n) {
        throw std::out_of_range("acf: max_lag " + std::to_string(max_lag) +
                                " out of range for series of length " + std::to_string(n));
    }
    std::vector<double> out(max_lag + 1, 0.0);
    const double* v = series.values.data();
    for (std::size_t k = 0; k <= max_lag; ++k) {
        double sum = 0.0;
        for (std::size_t t = 0; t + k < n; ++t) {
            sum += v[t] * v[t + k];
        }
        out[k] = sum / static_cast<double>(n);
    }
    return out;
}

TimeSeries zscore(const TimeSeries& series) {
    if (series.size() == 0) {
        throw std::invalid_argument("zscore: empty series");
    }
    const Subrange full{0, series.size()};
    const double m = mean(series, full);
    const double sd = std::sqrt(variance(series, full));
    TimeSeries out = series;
    if (sd == 0.0) {
        for (auto& v : out.values) v = 0.0;
        return out;
    }
    for (auto& v : out.values) v = (v - m) / sd;
    return out;
}

}  // namespace holidet::signal
