#include "holidet/csv.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>

namespace holidet::csvio {

namespace {

std::string trim(const std::string& s) {
    std::size_t first = 0;
    std::size_t last = s.size();
    while (first < last && std::isspace(static_cast<unsigned char>(s[first]))) ++first;
    while (last > first && std::isspace(static_cast<unsigned char>(s[last - 1]))) --last;
    return s.substr(first, last - first);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t next = line.find(sep, pos);
        if (next == std::string::npos) {
            out.push_back(line.substr(pos));
            break;
        }
        out.push_back(line.substr(pos, next - pos));
        pos = next + 1;
    }
    return out;
}

double parse_value(const std::string& text, const std::string& path, std::size_t line_no) {
    const std::string t = trim(text);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v)) {
        throw input_error(path + ":" + std::to_string(line_no) + ": malformed value '" + text + "'");
    }
    return v;
}

}  // namespace

IngestResult ingest_csv(const std::string& path, std::int64_t sampling_period,
                        std::size_t gap_fill_limit, double min_coverage) {
    std::ifstream in(path);
    if (!in) {
        throw input_error(path + ": cannot open file");
    }
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) {
        throw input_error(path + ": empty file");
    }
    ++line_no;
    {
        auto header = split(trim(line), ',');
        if (header.size() != 2 || trim(header[0]) != "timestamp" ||
            trim(header[1]) != "consumption_wh") {
            throw input_error(path + ":1: expected header 'timestamp,consumption_wh'");
        }
    }

    IngestResult result;
    TimeSeries chunk;
    chunk.sampling_period = sampling_period;
    std::int64_t first_time = 0;
    std::int64_t prev_time = 0;
    double prev_value = 0.0;
    std::size_t present = 0;

    auto close_chunk = [&]() {
        if (!chunk.values.empty()) {
            result.chunks.push_back(std::move(chunk));
            chunk = TimeSeries{};
            chunk.sampling_period = sampling_period;
        }
    };

    while (std::getline(in, line)) {
        ++line_no;
        const std::string trimmed = trim(line);
        if (trimmed.empty()) continue;
        const auto fields = split(trimmed, ',');
        if (fields.size() != 2) {
            throw input_error(path + ":" + std::to_string(line_no) +
                              ": expected 2 fields, found " + std::to_string(fields.size()));
        }
        std::int64_t ts;
        try {
            ts = parse_iso8601(trim(fields[0]));
        } catch (const std::exception& e) {
            throw input_error(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
        const double value = parse_value(fields[1], path, line_no);

        if (present == 0) {
            first_time = ts;
            chunk.start_time = ts;
        } else {
            const std::int64_t delta = ts - prev_time;
            if (delta <= 0) {
                throw input_error(path + ":" + std::to_string(line_no) +
                                  ": timestamps not strictly increasing");
            }
            if (delta % sampling_period != 0) {
                throw input_error(path + ":" + std::to_string(line_no) +
                                  ": timestamp off the sampling grid");
            }
            const auto missing = static_cast<std::size_t>(delta / sampling_period) - 1;
            if (missing > gap_fill_limit) {
                close_chunk();
                chunk.start_time = ts;
            } else if (missing > 0) {
                // Linear interpolation across the gap, masked as imputed.
                for (std::size_t g = 1; g <= missing; ++g) {
                    const double frac = static_cast<double>(g) / static_cast<double>(missing + 1);
                    chunk.values.push_back(prev_value + frac * (value - prev_value));
                    chunk.valid.push_back(0);
                }
            }
        }
        chunk.values.push_back(value);
        chunk.valid.push_back(1);
        prev_time = ts;
        prev_value = value;
        ++present;
    }
    close_chunk();

    if (present == 0) {
        throw input_error(path + ": no data rows");
    }
    const auto span = static_cast<std::size_t>((prev_time - first_time) / sampling_period) + 1;
    result.coverage = static_cast<double>(present) / static_cast<double>(span);
    result.rows = present;
    if (result.coverage < min_coverage) {
        throw input_error(path + ": coverage " + std::to_string(result.coverage) +
                          " below the required " + std::to_string(min_coverage));
    }
    return result;
}

void write_series_csv(const std::string& path, const TimeSeries& series) {
    std::ofstream out(path);
    if (!out) {
        throw input_error(path + ": cannot open file for writing");
    }
    out << "timestamp,consumption_wh\n";
    char buf[64];
    for (std::size_t t = 0; t < series.size(); ++t) {
        std::snprintf(buf, sizeof(buf), "%.6f", series.values[t]);
        out << format_iso8601(series.sample_time(t)) << ',' << buf << '\n';
    }
    if (!out) {
        throw input_error(path + ": write failed");
    }
}

std::vector<pipeline::LabelRow> read_label_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw input_error(path + ": cannot open file");
    }
    std::string line;
    std::size_t line_no = 0;
    std::vector<pipeline::LabelRow> rows;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string trimmed = trim(line);
        if (trimmed.empty()) continue;
        if (line_no == 1 && trimmed.rfind("household_id", 0) == 0) continue;
        const auto fields = split(trimmed, ',');
        if (fields.size() != 4) {
            throw input_error(path + ":" + std::to_string(line_no) +
                              ": expected 4 fields, found " + std::to_string(fields.size()));
        }
        pipeline::LabelRow row;
        row.household_id = trim(fields[0]);
        try {
            row.window_start = parse_iso8601(trim(fields[1]));
            row.window_end = parse_iso8601(trim(fields[2]));
        } catch (const std::exception& e) {
            throw input_error(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
        std::string label = trim(fields[3]);
        std::transform(label.begin(), label.end(), label.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (label == "holiday") {
            row.label = occupancy::Label::holiday;
        } else if (label == "occupied") {
            row.label = occupancy::Label::occupied;
        } else {
            throw input_error(path + ":" + std::to_string(line_no) + ": unknown label '" +
                              fields[3] + "'");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_label_csv(const std::string& path, const std::vector<pipeline::LabelRow>& rows) {
    std::ofstream out(path);
    if (!out) {
        throw input_error(path + ": cannot open file for writing");
    }
    out << "household_id,window_start,window_end,label\n";
    for (const auto& row : rows) {
        out << row.household_id << ',' << format_iso8601(row.window_start) << ','
            << format_iso8601(row.window_end) << ','
            << (row.label == occupancy::Label::holiday ? "holiday" : "occupied") << '\n';
    }
    if (!out) {
        throw input_error(path + ": write failed");
    }
}

}  // namespace holidet::csvio
