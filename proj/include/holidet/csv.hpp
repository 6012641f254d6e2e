#pragma once

#include <string>
#include <vector>

#include "holidet/pipeline.hpp"
#include "holidet/series.hpp"

namespace holidet::csvio {

struct IngestResult {
    std::vector<TimeSeries> chunks;  // split at gaps longer than the fill limit
    double coverage = 0.0;           // fraction of the spanned grid present in the file
    std::size_t rows = 0;
};

/// Read a meter file (header `timestamp,consumption_wh`, ISO-8601 UTC
/// timestamps on a uniform 30-minute grid). Gaps up to gap_fill_limit
/// samples are linearly interpolated and masked invalid; longer gaps
/// split the series. Files covering less than min_coverage of their span
/// are rejected. Throws input_error with the offending line number.
IngestResult ingest_csv(const std::string& path,
                        std::int64_t sampling_period = kDefaultSamplingPeriod,
                        std::size_t gap_fill_limit = 4,
                        double min_coverage = 0.9);

void write_series_csv(const std::string& path, const TimeSeries& series);

/// Label files: `household_id,window_start,window_end,label` with label
/// in {holiday, occupied}.
std::vector<pipeline::LabelRow> read_label_csv(const std::string& path);
void write_label_csv(const std::string& path, const std::vector<pipeline::LabelRow>& rows);

}  // namespace holidet::csvio
