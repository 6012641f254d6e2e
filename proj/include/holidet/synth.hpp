#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "holidet/series.hpp"

namespace holidet::synth {

/// Parameters of one synthetic benchmark signal: one or two asymmetric
/// square components, Gaussian noise, optional random spikes. Components
/// are realized as interval energy, so a component whose period is not a
/// multiple of the sampling step gets fractional edge samples.
struct SyntheticCase {
    std::string name = "A";
    double period1 = 48.0;
    std::optional<double> period2;
    bool random_spikes = false;
    std::size_t length = 1440;  // 30 days at 30-minute sampling
    std::uint64_t seed = 42;
    double amplitude1 = 1.0;
    double amplitude2 = 0.6;
    double duty1 = 8.0;  // spike width, samples
    double duty2 = 4.0;
    double noise_sigma = 0.05;
    double offset2 = 10.0;          // start offset of the second component
    double random_spike_rate = 0.06;  // per-sample appearance probability
};

/// The eight named cases: periods {A,B: 48 | C,D: 23.6 | E,F: 48+48 |
/// G: 21+17 | H: 23.6+29.4}, random spikes on B, D, F.
SyntheticCase named_case(char name, std::uint64_t seed = 42, std::size_t length = 1440);

struct Event {
    std::size_t start = 0;  // [start, end) sample span
    std::size_t end = 0;
    double value = 0.0;
};

/// Everything the generator knows. The emitted aggregate is rebuilt
/// exactly by summing, in this order: components (in index order), then
/// the random component, then noise.
struct GroundTruth {
    std::vector<TimeSeries> components;
    std::vector<std::vector<Event>> events;  // per component
    std::vector<Event> random_events;
    TimeSeries random_component;
    TimeSeries noise;
    std::vector<std::pair<std::size_t, std::size_t>> vacancy_intervals;  // household mode
};

std::pair<TimeSeries, GroundTruth> generate_case(const SyntheticCase& spec);

/// Vacancy request for the household generator, in samples.
struct VacancySpec {
    std::size_t start = 0;
    std::size_t duration = 0;
};

/// Labeled two-regime household: occupied stretches carry a noisy daily
/// pattern with high variance (including occasional low-consumption but
/// still high-variance stretches); vacancies are a low flat baseline plus
/// a fridge-like daily-period component. Vacancies must be >= 3 days and
/// non-overlapping.
std::pair<TimeSeries, GroundTruth> generate_household(std::size_t years,
                                                      const std::vector<VacancySpec>& vacancies,
                                                      std::uint64_t seed);

/// mean(|extracted - truth|) over all samples, normalized by the mean of
/// the truth over its nonzero support.
double nmae(const TimeSeries& extracted, const TimeSeries& truth);

}  // namespace holidet::synth
