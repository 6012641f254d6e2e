#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "holidet/pipeline.hpp"

namespace holidet::report {

/// Versioned report schema. Field order is fixed so that identical runs
/// serialize byte-identically; the volatile run timestamp lives in the
/// meta block and is off by default.
nlohmann::ordered_json to_json(const pipeline::AnalysisReport& report,
                               bool with_run_timestamp = false);

pipeline::AnalysisReport from_json(const nlohmann::ordered_json& j);

void write_json(const std::string& path, const pipeline::AnalysisReport& report,
                bool with_run_timestamp = false);
pipeline::AnalysisReport read_json(const std::string& path);

/// Per-sample plot table: timestamp, value, window id, label, one column
/// per extracted component.
void write_plot_csv(const std::string& path, const std::vector<TimeSeries>& chunks,
                    const pipeline::AnalysisReport& report);

/// Static overview: consumption polyline per chunk with one shaded
/// rect (class "holiday") per holiday interval.
void write_svg(const std::string& path, const std::vector<TimeSeries>& chunks,
               const pipeline::AnalysisReport& report);

}  // namespace holidet::report
