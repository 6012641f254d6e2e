#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "holidet/changepoint.hpp"
#include "holidet/series.hpp"

namespace holidet::occupancy {

enum class Comparison : std::uint8_t { neighbours, full };
enum class Criterion : std::uint8_t { mean, variance };
enum class Label : std::uint8_t { occupied = 0, holiday = 1 };

/// One of the four classifier variants: N_mean, N_var, F_mean, F_var,
/// with a ratio r in (0, 1].
struct ClassifierSpec {
    Comparison comparison = Comparison::full;
    Criterion criterion = Criterion::variance;
    double ratio = 0.5;

    static ClassifierSpec n_mean(double r) { return {Comparison::neighbours, Criterion::mean, r}; }
    static ClassifierSpec n_var(double r) { return {Comparison::neighbours, Criterion::variance, r}; }
    static ClassifierSpec f_mean(double r) { return {Comparison::full, Criterion::mean, r}; }
    static ClassifierSpec f_var(double r) { return {Comparison::full, Criterion::variance, r}; }
    std::string name() const;
};

struct WindowLabel {
    Subrange window;
    Label label = Label::occupied;
    double criterion_value = 0.0;
};

/// Maximal run of holiday windows, merged; at least min_duration long.
struct HolidayInterval {
    std::int64_t start_time = 0;
    std::int64_t end_time = 0;
    std::size_t start_sample = 0;
    std::size_t end_sample = 0;
    std::vector<std::size_t> source_windows;
};

struct MetricsReport {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
};

/// Label every segmentation window.
///
/// Neighbours mode: window k is a holiday when its criterion value is at
/// most the smaller of its neighbours' AND at most r/2 times their sum;
/// the first and last windows use their single neighbour for both tests.
/// Full mode: window k is a holiday when its criterion value is at most
/// r times the whole-series value. A comparison of zero against zero is
/// labelled occupied (a dead meter is not a vacancy).
std::vector<WindowLabel> classify_windows(const TimeSeries& series,
                                          const changepoint::Segmentation& seg,
                                          const ClassifierSpec& spec);

std::vector<HolidayInterval> merge_holidays(const TimeSeries& series,
                                            const std::vector<WindowLabel>& labels,
                                            std::int64_t min_duration_seconds = 3 * kSecondsPerDay);

/// Each window is independently a holiday with probability p (seeded,
/// reproducible). Criterion values are left at zero.
std::vector<WindowLabel> baseline_random(const changepoint::Segmentation& seg,
                                         double p, std::uint64_t seed);

/// Window-level precision/recall/F1 with holiday as the positive class.
/// Zero denominators yield zero.
MetricsReport score(const std::vector<Label>& predicted, const std::vector<Label>& truth);
MetricsReport score(const std::vector<WindowLabel>& predicted, const std::vector<Label>& truth);
MetricsReport metrics_from_counts(std::size_t tp, std::size_t fp, std::size_t fn, std::size_t tn);

struct LabeledHousehold {
    std::string id;
    TimeSeries series;
    changepoint::Segmentation seg;
    std::vector<Label> truth;  // one per window
};

struct RatioFit {
    double best_ratio = 0.0;               // majority vote over folds, ties to smaller
    std::vector<double> fold_ratios;
    std::vector<MetricsReport> fold_metrics;  // evaluation split of each fold
    double mean_f1 = 0.0;                   // across folds
};

/// Cross-validated ratio fit. Households are dealt round-robin into
/// `folds` groups; each fold fits the ratio on its own group (grid search
/// maximising pooled F1, ties to the smaller ratio) and is scored on all
/// remaining households.
RatioFit fit_ratio(const std::vector<LabeledHousehold>& dataset,
                   Comparison comparison, Criterion criterion,
                   const std::vector<double>& ratio_grid, std::size_t folds);

}  // namespace holidet::occupancy
