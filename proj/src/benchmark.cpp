#include "holidet/benchmark.hpp"

#include <random>

#include "holidet/signal.hpp"

namespace holidet::bench {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::vector<CaseResult> run_case_benchmark(std::uint64_t seed,
                                           const spikes::ExtractionConfig& config) {
    std::vector<CaseResult> results;
    for (char name = 'A'; name <= 'H'; ++name) {
        const auto spec = synth::named_case(name, seed);
        auto [series, truth] = synth::generate_case(spec);

        CaseResult result;
        result.name = name;
        result.true_periods.push_back(spec.period1);
        if (spec.period2) result.true_periods.push_back(*spec.period2);

        const auto extractions = spikes::extract_all(series, config);
        result.components_extracted = extractions.size();
        if (!extractions.empty()) {
            result.first_period = extractions[0].period;
            result.first_nmae = synth::nmae(extractions[0].component, truth.components[0]);
        }
        if (extractions.size() >= 2) {
            result.second_period = extractions[1].period;
            if (truth.components.size() >= 2) {
                result.second_nmae = synth::nmae(extractions[1].component, truth.components[1]);
            }
        }
        results.push_back(std::move(result));
    }
    return results;
}

const std::vector<CaseExpectation>& case_expectations() {
    static const std::vector<CaseExpectation> expectations = {
        {'A', 48.0, std::nullopt, 0.10, std::nullopt},
        {'B', 48.0, std::nullopt, 0.10, std::nullopt},
        {'C', 24.0, std::nullopt, 0.35, std::nullopt},
        {'D', 24.0, std::nullopt, 0.35, std::nullopt},
        {'E', 48.0, 48.0, 0.12, 0.12},
        {'F', 48.0, 48.0, 0.12, 0.12},
        {'G', 21.0, 17.0, 0.45, 0.80},
        {'H', 24.0, 30.0, 0.45, 0.80},
    };
    return expectations;
}

bool period_matches(const std::optional<double>& detected, const std::optional<double>& expected) {
    if (!expected) return !detected;
    if (!detected) return false;
    return *detected >= 0.95 * *expected && *detected <= 1.05 * *expected;
}

bool case_passes(const CaseResult& result, const CaseExpectation& expectation) {
    if (!period_matches(result.first_period, expectation.first_period)) return false;
    if (!period_matches(result.second_period, expectation.second_period)) return false;
    if (expectation.first_period) {
        if (!result.first_nmae || *result.first_nmae > expectation.first_nmae_bound) return false;
    }
    if (expectation.second_period && expectation.second_nmae_bound) {
        if (!result.second_nmae || *result.second_nmae > *expectation.second_nmae_bound) {
            return false;
        }
    }
    return true;
}

changepoint::Segmentation default_segmentation(const TimeSeries& series) {
    const auto normalized = signal::zscore(series);
    return changepoint::bottom_up(normalized, changepoint::CostModel::gaussian, 144,
                                  changepoint::StopRule::max_merge_cost(250.0))
        .segmentation;
}

std::vector<occupancy::Label> truth_window_labels(
    const changepoint::Segmentation& seg,
    const std::vector<std::pair<std::size_t, std::size_t>>& vacancy_intervals) {
    std::vector<occupancy::Label> labels(seg.window_count(), occupancy::Label::occupied);
    for (std::size_t k = 0; k < seg.window_count(); ++k) {
        const Subrange w = seg.window(k);
        std::size_t vacant = 0;
        for (const auto& [start, end] : vacancy_intervals) {
            const std::size_t lo = std::max(w.a, start);
            const std::size_t hi = std::min(w.b, end);
            if (hi > lo) vacant += hi - lo;
        }
        if (2 * vacant >= w.size()) {
            labels[k] = occupancy::Label::holiday;
        }
    }
    return labels;
}

occupancy::LabeledHousehold make_labeled_household(std::uint64_t seed, std::size_t years) {
    const std::size_t samples_per_day = 48;
    const std::size_t length = years * 365 * samples_per_day;

    // 1-3 vacancies of 5-18 days, at least 5 days apart.
    std::mt19937_64 rng(splitmix64(seed ^ 0x76616361ULL));
    auto uniform = [&rng](double lo, double hi) {
        return lo + (hi - lo) * std::ldexp(static_cast<double>(rng() >> 11), -53);
    };
    const auto n_vacancies = static_cast<std::size_t>(uniform(1.0, 3.999));
    std::vector<synth::VacancySpec> vacancies;
    for (std::size_t v = 0; v < n_vacancies; ++v) {
        const std::size_t duration =
            static_cast<std::size_t>(uniform(5.0, 18.0)) * samples_per_day;
        for (int attempt = 0; attempt < 50; ++attempt) {
            const auto start = static_cast<std::size_t>(
                uniform(0.0, static_cast<double>(length - duration)));
            bool clear = true;
            for (const auto& other : vacancies) {
                const std::size_t margin = 5 * samples_per_day;
                if (start < other.start + other.duration + margin &&
                    other.start < start + duration + margin) {
                    clear = false;
                    break;
                }
            }
            if (clear) {
                vacancies.push_back({start, duration});
                break;
            }
        }
    }

    auto [series, truth] = synth::generate_household(years, vacancies, seed);

    occupancy::LabeledHousehold household;
    household.id = "synth-" + std::to_string(seed);
    household.seg = default_segmentation(series);
    household.truth = truth_window_labels(household.seg, truth.vacancy_intervals);
    household.series = std::move(series);
    return household;
}

std::vector<occupancy::LabeledHousehold> make_labeled_suite(std::size_t n_households,
                                                            std::uint64_t base_seed,
                                                            std::size_t years) {
    std::vector<occupancy::LabeledHousehold> suite;
    suite.reserve(n_households);
    for (std::size_t i = 0; i < n_households; ++i) {
        suite.push_back(make_labeled_household(base_seed + i, years));
    }
    return suite;
}

}  // namespace holidet::bench
