#include "holidet/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace holidet::synth {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& rng) {
    return std::ldexp(static_cast<double>(rng() >> 11), -53);
}

// Overlap of the sampling interval [t, t+1) with the ON windows
// [k*period + phase, k*period + phase + duty), k integer.
double on_overlap(double t, double period, double phase, double duty) {
    double u = std::fmod(t - phase, period);
    if (u < 0.0) u += period;
    double overlap = std::min(u + 1.0, duty) - std::min(u, duty);
    if (u + 1.0 > period) {
        overlap += std::min(u + 1.0 - period, duty);
    }
    return overlap;
}

TimeSeries square_component(std::size_t length, double period, double phase,
                            double duty, double amplitude,
                            std::vector<Event>& events) {
    TimeSeries comp = make_series(std::vector<double>(length, 0.0));
    for (std::size_t t = 0; t < length; ++t) {
        comp.values[t] = amplitude * on_overlap(static_cast<double>(t), period, phase, duty);
    }
    for (double k = 0.0;; k += 1.0) {
        const double on_start = k * period + phase;
        if (on_start >= static_cast<double>(length)) break;
        if (on_start + duty <= 0.0) continue;
        Event e;
        e.start = static_cast<std::size_t>(std::max(0.0, std::floor(on_start)));
        e.end = std::min(length, static_cast<std::size_t>(std::ceil(on_start + duty)));
        e.value = amplitude;
        if (e.start < e.end) events.push_back(e);
    }
    return comp;
}

}  // namespace

SyntheticCase named_case(char name, std::uint64_t seed, std::size_t length) {
    SyntheticCase spec;
    spec.name = std::string(1, name);
    spec.seed = seed;
    spec.length = length;
    switch (name) {
        case 'A': spec.period1 = 48.0; break;
        case 'B': spec.period1 = 48.0; spec.random_spikes = true; break;
        case 'C': spec.period1 = 23.6; break;
        case 'D': spec.period1 = 23.6; spec.random_spikes = true; break;
        case 'E': spec.period1 = 48.0; spec.period2 = 48.0; break;
        case 'F': spec.period1 = 48.0; spec.period2 = 48.0; spec.random_spikes = true; break;
        case 'G': spec.period1 = 21.0; spec.period2 = 17.0; break;
        case 'H': spec.period1 = 23.6; spec.period2 = 29.4; break;
        default:
            throw std::invalid_argument("named_case: unknown case '" + std::string(1, name) + "'");
    }
    return spec;
}

std::pair<TimeSeries, GroundTruth> generate_case(const SyntheticCase& spec) {
    if (spec.length == 0 || spec.period1 < 2.0 || spec.duty1 <= 0.0 ||
        spec.duty1 >= spec.period1 - 1.0) {
        throw std::invalid_argument("generate_case: invalid component 1 parameters");
    }
    if (spec.period2 &&
        (*spec.period2 < 2.0 || spec.duty2 <= 0.0 || spec.duty2 >= *spec.period2 - 1.0)) {
        throw std::invalid_argument("generate_case: invalid component 2 parameters");
    }

    GroundTruth truth;
    truth.events.emplace_back();
    truth.components.push_back(square_component(spec.length, spec.period1, 0.0, spec.duty1,
                                                spec.amplitude1, truth.events.back()));
    if (spec.period2) {
        truth.events.emplace_back();
        truth.components.push_back(square_component(spec.length, *spec.period2, spec.offset2,
                                                    spec.duty2, spec.amplitude2,
                                                    truth.events.back()));
    }

    truth.random_component = make_series(std::vector<double>(spec.length, 0.0));
    if (spec.random_spikes) {
        std::mt19937_64 rng(splitmix64(spec.seed ^ 0x72616e64ULL));
        for (std::size_t t = 0; t < spec.length; ++t) {
            if (uniform01(rng) >= spec.random_spike_rate) continue;
            // Geometric duration with mean 2 samples, height around half of
            // the first component.
            std::size_t duration = 1;
            while (uniform01(rng) < 0.5) ++duration;
            std::normal_distribution<double> height_dist(0.5 * spec.amplitude1,
                                                         0.1 * spec.amplitude1);
            const double height = std::max(height_dist(rng), 0.0);
            const std::size_t end = std::min(spec.length, t + duration);
            for (std::size_t s = t; s < end; ++s) {
                truth.random_component.values[s] += height;
            }
            truth.random_events.push_back({t, end, height});
        }
    }

    truth.noise = make_series(std::vector<double>(spec.length, 0.0));
    if (spec.noise_sigma > 0.0) {
        std::mt19937_64 rng(splitmix64(spec.seed ^ 0x6e6f6973ULL));
        std::normal_distribution<double> noise_dist(0.0, spec.noise_sigma);
        for (std::size_t t = 0; t < spec.length; ++t) {
            truth.noise.values[t] = noise_dist(rng);
        }
    }

    TimeSeries aggregate = make_series(std::vector<double>(spec.length, 0.0));
    for (std::size_t t = 0; t < spec.length; ++t) {
        double v = 0.0;
        for (const auto& comp : truth.components) v += comp.values[t];
        v += truth.random_component.values[t];
        v += truth.noise.values[t];
        aggregate.values[t] = v;
    }
    return {std::move(aggregate), std::move(truth)};
}

std::pair<TimeSeries, GroundTruth> generate_household(std::size_t years,
                                                      const std::vector<VacancySpec>& vacancies,
                                                      std::uint64_t seed) {
    if (years == 0) {
        throw std::invalid_argument("generate_household: years must be >= 1");
    }
    const std::size_t samples_per_day = 48;
    const std::size_t length = years * 365 * samples_per_day;
    const std::size_t min_vacancy = 3 * samples_per_day;

    std::vector<VacancySpec> sorted = vacancies;
    std::sort(sorted.begin(), sorted.end(),
              [](const VacancySpec& x, const VacancySpec& y) { return x.start < y.start; });
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (sorted[i].duration < min_vacancy) {
            throw std::invalid_argument("generate_household: vacancy shorter than 3 days");
        }
        if (sorted[i].start + sorted[i].duration > length) {
            throw std::invalid_argument("generate_household: vacancy past the series end");
        }
        if (i > 0 && sorted[i].start < sorted[i - 1].start + sorted[i - 1].duration) {
            throw std::invalid_argument("generate_household: overlapping vacancies");
        }
    }

    std::mt19937_64 rng(splitmix64(seed ^ 0x686f7573ULL));
    std::normal_distribution<double> unit_normal(0.0, 1.0);

    std::vector<std::uint8_t> vacant(length, 0);
    for (const auto& v : sorted) {
        std::fill(vacant.begin() + static_cast<std::ptrdiff_t>(v.start),
                  vacant.begin() + static_cast<std::ptrdiff_t>(v.start + v.duration), 1);
    }

    // Low-consumption but high-variance stretches of occupied time (the
    // inhabitants are around, just frugal). These keep mean-based
    // classifiers honest without looking like vacancies to variance-based
    // ones.
    std::vector<std::uint8_t> frugal(length, 0);
    const std::size_t n_frugal = 2 * years + static_cast<std::size_t>(uniform01(rng) * 3.0);
    for (std::size_t e = 0; e < n_frugal; ++e) {
        const std::size_t duration =
            (4 + static_cast<std::size_t>(uniform01(rng) * 7.0)) * samples_per_day;
        for (int attempt = 0; attempt < 40; ++attempt) {
            const std::size_t start = static_cast<std::size_t>(
                uniform01(rng) * static_cast<double>(length - duration));
            bool clear = true;
            for (std::size_t t = start; t < start + duration && clear; ++t) {
                if (vacant[t] || frugal[t]) clear = false;
            }
            if (clear) {
                std::fill(frugal.begin() + static_cast<std::ptrdiff_t>(start),
                          frugal.begin() + static_cast<std::ptrdiff_t>(start + duration), 1);
                break;
            }
        }
    }

    const double seasonal_phase = uniform01(rng) * 2.0 * 3.14159265358979323846;
    TimeSeries series = make_series(std::vector<double>(length, 0.0),
                                    parse_iso8601("2021-09-01T00:00:00Z"));
    for (std::size_t t = 0; t < length; ++t) {
        const std::size_t slot = t % samples_per_day;
        const double day = static_cast<double>(t / samples_per_day);
        double v;
        if (vacant[t]) {
            // Flat baseline plus a fridge-like daily-period square wave.
            const double fridge = slot < 16 ? 35.0 : 0.0;
            v = 45.0 + fridge + 3.0 * unit_normal(rng);
        } else if (frugal[t]) {
            v = 60.0 + 30.0 * std::abs(unit_normal(rng));
            if (uniform01(rng) < 0.12) v += 1000.0 + 250.0 * unit_normal(rng);
        } else {
            const double seasonal =
                150.0 + 120.0 * std::sin(2.0 * 3.14159265358979323846 * day / 365.0 + seasonal_phase);
            double shape = 30.0;
            if (slot >= 14 && slot < 20) shape = 500.0;
            else if (slot >= 20 && slot < 34) shape = 250.0;
            else if (slot >= 34 && slot < 44) shape = 800.0;
            const double activity = std::abs(1.0 + 0.6 * unit_normal(rng));
            v = seasonal + shape * activity + 40.0 * unit_normal(rng);
            if (uniform01(rng) < 0.08) v += 1200.0 + 300.0 * unit_normal(rng);
        }
        series.values[t] = std::max(v, 0.0);
    }

    GroundTruth truth;
    truth.random_component = make_series(std::vector<double>(length, 0.0), series.start_time);
    truth.noise = make_series(std::vector<double>(length, 0.0), series.start_time);
    for (const auto& v : sorted) {
        truth.vacancy_intervals.emplace_back(v.start, v.start + v.duration);
    }
    return {std::move(series), std::move(truth)};
}

double nmae(const TimeSeries& extracted, const TimeSeries& truth) {
    if (extracted.size() != truth.size()) {
        throw std::invalid_argument("nmae: length mismatch (" + std::to_string(extracted.size()) +
                                    " vs " + std::to_string(truth.size()) + ")");
    }
    double abs_error = 0.0;
    double support_sum = 0.0;
    std::size_t support_count = 0;
    for (std::size_t t = 0; t < truth.size(); ++t) {
        abs_error += std::abs(extracted.values[t] - truth.values[t]);
        if (truth.values[t] != 0.0) {
            support_sum += truth.values[t];
            ++support_count;
        }
    }
    if (support_count == 0) {
        throw std::domain_error("nmae: truth has no nonzero support");
    }
    const double support_mean = support_sum / static_cast<double>(support_count);
    return abs_error / static_cast<double>(truth.size()) / support_mean;
}

}  // namespace holidet::synth
