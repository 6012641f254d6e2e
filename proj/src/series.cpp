#include "holidet/series.hpp"

#include <cstdio>
#include <stdexcept>

namespace holidet {

TimeSeries make_series(std::vector<double> values,
                       std::int64_t start_time,
                       std::int64_t sampling_period) {
    if (sampling_period <= 0) {
        throw std::invalid_argument("make_series: sampling_period must be positive");
    }
    TimeSeries out;
    out.valid.assign(values.size(), 1);
    out.values = std::move(values);
    out.start_time = start_time;
    out.sampling_period = sampling_period;
    return out;
}

void check_range(const TimeSeries& series, Subrange range, const char* where) {
    if (range.a >= range.b || range.b > series.size()) {
        throw std::out_of_range(std::string(where) + ": invalid range [" +
                                std::to_string(range.a) + ", " + std::to_string(range.b) +
                                ") for series of length " + std::to_string(series.size()));
    }
}

TimeSeries slice(const TimeSeries& series, Subrange range) {
    check_range(series, range, "slice");
    TimeSeries out;
    out.values.assign(series.values.begin() + static_cast<std::ptrdiff_t>(range.a),
                      series.values.begin() + static_cast<std::ptrdiff_t>(range.b));
    out.valid.assign(series.valid.begin() + static_cast<std::ptrdiff_t>(range.a),
                     series.valid.begin() + static_cast<std::ptrdiff_t>(range.b));
    out.start_time = series.sample_time(range.a);
    out.sampling_period = series.sampling_period;
    return out;
}

namespace {

// Civil-date conversions (proleptic Gregorian, days since 1970-01-01).
std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, unsigned& m, unsigned& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y = static_cast<int>(yy + (m <= 2));
}

}  // namespace

std::int64_t parse_iso8601(std::string_view text) {
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
    char sep = 0;
    const std::string buf(text);
    int fields = std::sscanf(buf.c_str(), "%4d-%2d-%2d%c%2d:%2d:%2d",
                             &y, &mo, &d, &sep, &h, &mi, &s);
    if (fields < 6 || (sep != 'T' && sep != ' ')) {
        throw std::invalid_argument("parse_iso8601: malformed timestamp '" + buf + "'");
    }
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || s > 60 ||
        h < 0 || mi < 0 || s < 0) {
        throw std::invalid_argument("parse_iso8601: out-of-range field in '" + buf + "'");
    }
    return days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d)) * kSecondsPerDay +
           h * 3600 + mi * 60 + s;
}

std::string format_iso8601(std::int64_t epoch_seconds) {
    std::int64_t days = epoch_seconds / kSecondsPerDay;
    std::int64_t rem = epoch_seconds % kSecondsPerDay;
    if (rem < 0) {
        rem += kSecondsPerDay;
        days -= 1;
    }
    int y;
    unsigned m, d;
    civil_from_days(days, y, m, d);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", y, m, d,
                  static_cast<long long>(rem / 3600), static_cast<long long>((rem / 60) % 60),
                  static_cast<long long>(rem % 60));
    return buf;
}

}  // namespace holidet
