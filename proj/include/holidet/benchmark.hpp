#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "holidet/occupancy.hpp"
#include "holidet/spikes.hpp"
#include "holidet/synth.hpp"

namespace holidet::bench {

/// Two-pass extraction outcome for one synthetic case. Pass i is compared
/// against ground-truth component i.
struct CaseResult {
    char name = 'A';
    std::vector<double> true_periods;
    std::optional<double> first_period;
    std::optional<double> second_period;
    std::optional<double> first_nmae;
    std::optional<double> second_nmae;
    std::size_t components_extracted = 0;
};

std::vector<CaseResult> run_case_benchmark(std::uint64_t seed = 42,
                                           const spikes::ExtractionConfig& config = {});

/// Reference outcome for one named case: the period each pass must find
/// (within 5%, absent = the pass must find nothing) and the retrieval
/// error ceiling per pass.
struct CaseExpectation {
    char name = 'A';
    std::optional<double> first_period;
    std::optional<double> second_period;
    double first_nmae_bound = 0.0;
    std::optional<double> second_nmae_bound;
};

const std::vector<CaseExpectation>& case_expectations();

/// Within 5% of the expected period, or both absent.
bool period_matches(const std::optional<double>& detected, const std::optional<double>& expected);

bool case_passes(const CaseResult& result, const CaseExpectation& expectation);

/// Default segmentation used when building labeled households: z-scored
/// series, Gaussian cost, 3-day grid, merge threshold 250.
changepoint::Segmentation default_segmentation(const TimeSeries& series);

/// Ground-truth window labels: a window counts as a holiday when at least
/// half of its samples fall inside a true vacancy interval.
std::vector<occupancy::Label> truth_window_labels(
    const changepoint::Segmentation& seg,
    const std::vector<std::pair<std::size_t, std::size_t>>& vacancy_intervals);

/// One synthetic household with seeded vacancies, segmented and labeled,
/// ready for classifier evaluation.
occupancy::LabeledHousehold make_labeled_household(std::uint64_t seed, std::size_t years = 2);

std::vector<occupancy::LabeledHousehold> make_labeled_suite(std::size_t n_households,
                                                            std::uint64_t base_seed = 0,
                                                            std::size_t years = 2);

}  // namespace holidet::bench
