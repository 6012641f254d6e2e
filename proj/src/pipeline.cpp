#include "holidet/pipeline.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "holidet/signal.hpp"

namespace holidet::pipeline {

spikes::ExtractionConfig Config::extraction() const {
    spikes::ExtractionConfig out;
    out.period_detection.n_permutations = permutations;
    out.period_detection.seed = seed;
    out.max_error = max_error;
    out.max_iterations = iteration_cap;
    return out;
}

changepoint::StopRule Config::stop_rule() const {
    if (stop_windows) {
        return changepoint::StopRule::windows(*stop_windows);
    }
    return changepoint::StopRule::max_merge_cost(stop_threshold);
}

void Config::validate() const {
    if (grid_size < 2) throw config_error("config: grid_size must be >= 2");
    if (!(classifier.ratio > 0.0) || classifier.ratio > 1.0) {
        throw config_error("config: ratio must lie in (0, 1]");
    }
    if (min_holiday_days <= 0.0) throw config_error("config: min_holiday_days must be positive");
    if (permutations < 2) throw config_error("config: permutations must be >= 2");
    if (max_error < 0.0) throw config_error("config: max_error must be >= 0");
    if (iteration_cap < 1) throw config_error("config: iteration_cap must be >= 1");
}

ChunkReport run_chunk(const TimeSeries& series, const Config& config) {
    config.validate();
    ChunkReport report;
    report.start_time = series.start_time;
    report.sampling_period = series.sampling_period;
    report.samples = series.size();

    if (series.size() < 2 * config.grid_size) {
        report.error = "chunk of " + std::to_string(series.size()) +
                       " samples is shorter than two grid cells";
        return report;
    }

    const TimeSeries& for_segmentation = config.normalize ? signal::zscore(series) : series;
    report.segmentation =
        changepoint::bottom_up(for_segmentation, config.cost, config.grid_size,
                               config.stop_rule())
            .segmentation;

    // Classification always runs on the raw series; both criteria are
    // scale-covariant, so only the stop threshold needs the normalization.
    if (config.classifier.comparison == occupancy::Comparison::neighbours &&
        report.segmentation.window_count() < 2) {
        report.error = "single-window segmentation cannot use a neighbour classifier";
        return report;
    }
    report.windows = occupancy::classify_windows(series, report.segmentation, config.classifier);
    report.holidays = occupancy::merge_holidays(
        series, report.windows,
        static_cast<std::int64_t>(config.min_holiday_days * static_cast<double>(kSecondsPerDay)));

    for (std::size_t i = 0; i < report.holidays.size(); ++i) {
        const auto& interval = report.holidays[i];
        IntervalExtraction extraction;
        extraction.interval_index = i;
        try {
            const TimeSeries window =
                slice(series, {interval.start_sample, interval.end_sample});
            const auto results = spikes::extract_all(window, config.extraction());
            for (const auto& result : results) {
                ComponentReport component;
                component.period_samples = result.period;
                component.spikes = result.selected_spikes;
                for (auto& spike : component.spikes) {
                    spike.start += interval.start_sample;
                    spike.end += interval.start_sample;
                }
                extraction.components.push_back(std::move(component));
            }
        } catch (const std::exception& e) {
            extraction.error = e.what();
        }
        report.extractions.push_back(std::move(extraction));
    }
    return report;
}

AnalysisReport run_pipeline(const std::string& household_id,
                            const std::vector<TimeSeries>& chunks, const Config& config) {
    AnalysisReport report;
    report.household_id = household_id;
    report.config = config;
    for (const auto& chunk : chunks) {
        report.chunks.push_back(run_chunk(chunk, config));
    }
    return report;
}

EvalResult evaluate(const std::vector<AnalysisReport>& reports,
                    const std::vector<LabelRow>& labels) {
    std::map<std::string, std::map<std::pair<std::int64_t, std::int64_t>, occupancy::Label>> truth;
    for (const auto& row : labels) {
        truth[row.household_id][{row.window_start, row.window_end}] = row.label;
    }

    EvalResult result;
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
    double f1_sum = 0.0;
    std::size_t scored_households = 0;
    for (const auto& report : reports) {
        const auto it = truth.find(report.household_id);
        if (it == truth.end()) {
            throw input_error("evaluate: no labels for household '" + report.household_id + "'");
        }
        const auto& rows = it->second;
        std::set<std::pair<std::int64_t, std::int64_t>> seen;
        std::vector<occupancy::Label> predicted, expected;
        std::string misaligned;
        for (const auto& chunk : report.chunks) {
            TimeSeries shim;  // timestamp arithmetic only
            shim.start_time = chunk.start_time;
            shim.sampling_period = chunk.sampling_period;
            for (const auto& window : chunk.windows) {
                const std::pair<std::int64_t, std::int64_t> key{
                    shim.sample_time(window.window.a), shim.sample_time(window.window.b)};
                const auto found = rows.find(key);
                if (found == rows.end()) {
                    misaligned += " [" + format_iso8601(key.first) + ", " +
                                  format_iso8601(key.second) + ")";
                    continue;
                }
                seen.insert(key);
                predicted.push_back(window.label);
                expected.push_back(found->second);
            }
        }
        if (!misaligned.empty()) {
            throw input_error("evaluate: household '" + report.household_id +
                              "' has unlabeled windows:" + misaligned);
        }
        if (seen.size() != rows.size()) {
            std::string extra;
            for (const auto& [key, label] : rows) {
                (void)label;
                if (!seen.count(key)) {
                    extra += " [" + format_iso8601(key.first) + ", " +
                             format_iso8601(key.second) + ")";
                }
            }
            throw input_error("evaluate: household '" + report.household_id +
                              "' labels do not match any report window:" + extra);
        }
        const auto metrics = occupancy::score(predicted, expected);
        result.per_household.push_back({report.household_id, metrics});
        tp += metrics.tp;
        fp += metrics.fp;
        fn += metrics.fn;
        tn += metrics.tn;
        f1_sum += metrics.f1;
        ++scored_households;
    }
    result.micro = occupancy::metrics_from_counts(tp, fp, fn, tn);
    result.macro_f1 = scored_households > 0 ? f1_sum / static_cast<double>(scored_households) : 0.0;
    return result;
}

}  // namespace holidet::pipeline
