#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace holidet {

inline constexpr std::int64_t kSecondsPerDay = 86400;
inline constexpr std::int64_t kDefaultSamplingPeriod = 1800;  // 30 minutes

/// Uniformly sampled consumption curve. Values are energy per sampling
/// interval (Wh per 30 min by default). valid[t] == 0 marks imputed samples.
struct TimeSeries {
    std::vector<double> values;
    std::int64_t start_time = 0;                       // unix epoch seconds (UTC)
    std::int64_t sampling_period = kDefaultSamplingPeriod;  // seconds, > 0
    std::vector<std::uint8_t> valid;                   // same length as values

    std::size_t size() const { return values.size(); }
    std::int64_t sample_time(std::size_t index) const {
        return start_time + static_cast<std::int64_t>(index) * sampling_period;
    }
    std::size_t samples_per_day() const {
        return static_cast<std::size_t>(kSecondsPerDay / sampling_period);
    }
};

TimeSeries make_series(std::vector<double> values,
                       std::int64_t start_time = 0,
                       std::int64_t sampling_period = kDefaultSamplingPeriod);

/// Half-open index range [a, b) into a series.
struct Subrange {
    std::size_t a = 0;
    std::size_t b = 0;
    std::size_t size() const { return b - a; }
};

/// Throws std::out_of_range unless 0 <= a < b <= series length.
void check_range(const TimeSeries& series, Subrange range, const char* where);

TimeSeries slice(const TimeSeries& series, Subrange range);

// ISO-8601 UTC timestamps, second resolution ("2021-09-01T00:00:00Z";
// the 'Z' and the seconds field are optional on input, a space may stand
// in for 'T').
std::int64_t parse_iso8601(std::string_view text);
std::string format_iso8601(std::int64_t epoch_seconds);

}  // namespace holidet
