#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "holidet/autoperiod.hpp"
#include "holidet/changepoint.hpp"
#include "holidet/occupancy.hpp"
#include "holidet/series.hpp"
#include "holidet/spikes.hpp"

namespace holidet {

/// Bad input data (malformed CSV, coverage, ordering). CLI exit code 2.
struct input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad configuration. CLI exit code 3.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace holidet

namespace holidet::pipeline {

inline constexpr const char* kVersion = "0.1.0";

struct Config {
    std::size_t grid_size = 144;  // 3 days at 30-minute sampling
    changepoint::CostModel cost = changepoint::CostModel::gaussian;
    double stop_threshold = 250.0;           // applied to the normalized series
    std::optional<std::size_t> stop_windows;  // overrides the threshold rule
    bool normalize = true;
    occupancy::ClassifierSpec classifier = occupancy::ClassifierSpec::f_var(0.5);
    double min_holiday_days = 3.0;
    int permutations = 100;
    std::uint64_t seed = 0;
    double max_error = 2.0;   // spike alignment error, samples
    int iteration_cap = 4;
    std::size_t gap_fill_limit = 4;  // samples; longer gaps split the series

    spikes::ExtractionConfig extraction() const;
    changepoint::StopRule stop_rule() const;
    void validate() const;  // throws config_error
};

/// Spike spans here are absolute sample indices into the chunk.
struct ComponentReport {
    double period_samples = 0.0;
    std::vector<spikes::Spike> spikes;
};

struct IntervalExtraction {
    std::size_t interval_index = 0;
    std::vector<ComponentReport> components;
    std::string error;  // set when extraction failed; never aborts the household
};

struct ChunkReport {
    std::int64_t start_time = 0;
    std::int64_t sampling_period = kDefaultSamplingPeriod;
    std::size_t samples = 0;
    changepoint::Segmentation segmentation;
    std::vector<occupancy::WindowLabel> windows;
    std::vector<occupancy::HolidayInterval> holidays;
    std::vector<IntervalExtraction> extractions;
    std::string error;  // set when the whole chunk could not be analysed
};

struct AnalysisReport {
    std::string household_id;
    std::string version = kVersion;
    Config config;
    std::vector<ChunkReport> chunks;
};

/// Segmentation -> classification -> holiday merge -> per-holiday spike
/// extraction, for one gap-free chunk.
ChunkReport run_chunk(const TimeSeries& series, const Config& config);

AnalysisReport run_pipeline(const std::string& household_id,
                            const std::vector<TimeSeries>& chunks, const Config& config);

/// One row of a window-label file.
struct LabelRow {
    std::string household_id;
    std::int64_t window_start = 0;
    std::int64_t window_end = 0;
    occupancy::Label label = occupancy::Label::occupied;
};

struct HouseholdMetrics {
    std::string household_id;
    occupancy::MetricsReport metrics;
};

struct EvalResult {
    occupancy::MetricsReport micro;  // pooled counts over every window
    double macro_f1 = 0.0;           // mean of per-household F1
    std::vector<HouseholdMetrics> per_household;
};

/// Window-level evaluation of reports against ground-truth labels.
/// Labels are matched to report windows by exact start/end timestamps;
/// any unmatched window or row raises input_error naming the offenders.
EvalResult evaluate(const std::vector<AnalysisReport>& reports,
                    const std::vector<LabelRow>& labels);

}  // namespace holidet::pipeline
