#include "holidet/report.hpp"

#include <chrono>
#include <cmath>
#include <fstream>

namespace holidet::report {

using nlohmann::ordered_json;

namespace {

std::string cost_name(changepoint::CostModel model) {
    return model == changepoint::CostModel::l2 ? "l2" : "gaussian";
}

changepoint::CostModel cost_from_name(const std::string& name) {
    if (name == "l2") return changepoint::CostModel::l2;
    if (name == "gaussian") return changepoint::CostModel::gaussian;
    throw input_error("report: unknown cost model '" + name + "'");
}

occupancy::ClassifierSpec classifier_from_name(const std::string& name, double ratio) {
    if (name == "N_mean") return occupancy::ClassifierSpec::n_mean(ratio);
    if (name == "N_var") return occupancy::ClassifierSpec::n_var(ratio);
    if (name == "F_mean") return occupancy::ClassifierSpec::f_mean(ratio);
    if (name == "F_var") return occupancy::ClassifierSpec::f_var(ratio);
    throw input_error("report: unknown classifier '" + name + "'");
}

ordered_json config_json(const pipeline::Config& config) {
    ordered_json j;
    j["grid_size"] = config.grid_size;
    j["cost"] = cost_name(config.cost);
    j["stop_threshold"] = config.stop_threshold;
    if (config.stop_windows) {
        j["stop_windows"] = *config.stop_windows;
    }
    j["normalize"] = config.normalize;
    j["classifier"] = config.classifier.name();
    j["ratio"] = config.classifier.ratio;
    j["min_holiday_days"] = config.min_holiday_days;
    j["permutations"] = config.permutations;
    j["seed"] = config.seed;
    j["max_error"] = config.max_error;
    j["iteration_cap"] = config.iteration_cap;
    j["gap_fill_limit"] = config.gap_fill_limit;
    return j;
}

pipeline::Config config_from_json(const ordered_json& j) {
    pipeline::Config config;
    config.grid_size = j.at("grid_size").get<std::size_t>();
    config.cost = cost_from_name(j.at("cost").get<std::string>());
    config.stop_threshold = j.at("stop_threshold").get<double>();
    if (j.contains("stop_windows")) {
        config.stop_windows = j.at("stop_windows").get<std::size_t>();
    }
    config.normalize = j.at("normalize").get<bool>();
    config.classifier = classifier_from_name(j.at("classifier").get<std::string>(),
                                             j.at("ratio").get<double>());
    config.min_holiday_days = j.at("min_holiday_days").get<double>();
    config.permutations = j.at("permutations").get<int>();
    config.seed = j.at("seed").get<std::uint64_t>();
    config.max_error = j.at("max_error").get<double>();
    config.iteration_cap = j.at("iteration_cap").get<int>();
    config.gap_fill_limit = j.at("gap_fill_limit").get<std::size_t>();
    return config;
}

ordered_json spike_json(const spikes::Spike& spike, const TimeSeries& shim) {
    ordered_json j;
    j["start"] = format_iso8601(shim.sample_time(spike.start));
    j["end"] = format_iso8601(shim.sample_time(spike.end));
    j["start_sample"] = spike.start;
    j["end_sample"] = spike.end;
    j["peak"] = spike.peak;
    j["mean_above_baseline"] = spike.mean_above_baseline;
    j["baseline"] = spike.baseline;
    return j;
}

}  // namespace

ordered_json to_json(const pipeline::AnalysisReport& report, bool with_run_timestamp) {
    ordered_json j;
    j["schema_version"] = 1;
    j["household_id"] = report.household_id;
    j["version"] = report.version;
    j["config"] = config_json(report.config);
    j["chunks"] = ordered_json::array();
    for (const auto& chunk : report.chunks) {
        TimeSeries shim;
        shim.start_time = chunk.start_time;
        shim.sampling_period = chunk.sampling_period;

        ordered_json c;
        c["start_time"] = format_iso8601(chunk.start_time);
        c["sampling_period_seconds"] = chunk.sampling_period;
        c["samples"] = chunk.samples;
        if (!chunk.error.empty()) {
            c["error"] = chunk.error;
        }
        c["breakpoints"] = ordered_json::array();
        c["breakpoint_samples"] = ordered_json::array();
        for (const std::size_t bp : chunk.segmentation.breakpoints) {
            c["breakpoints"].push_back(format_iso8601(shim.sample_time(bp)));
            c["breakpoint_samples"].push_back(bp);
        }
        c["grid_size"] = chunk.segmentation.grid_size;
        c["windows"] = ordered_json::array();
        for (const auto& window : chunk.windows) {
            ordered_json w;
            w["start"] = format_iso8601(shim.sample_time(window.window.a));
            w["end"] = format_iso8601(shim.sample_time(window.window.b));
            w["label"] = window.label == occupancy::Label::holiday ? "holiday" : "occupied";
            w["criterion_value"] = window.criterion_value;
            c["windows"].push_back(std::move(w));
        }
        c["holiday_intervals"] = ordered_json::array();
        for (const auto& interval : chunk.holidays) {
            ordered_json h;
            h["start"] = format_iso8601(interval.start_time);
            h["end"] = format_iso8601(interval.end_time);
            h["start_sample"] = interval.start_sample;
            h["end_sample"] = interval.end_sample;
            h["source_windows"] = interval.source_windows;
            c["holiday_intervals"].push_back(std::move(h));
        }
        c["extractions"] = ordered_json::array();
        for (const auto& extraction : chunk.extractions) {
            ordered_json e;
            e["interval_index"] = extraction.interval_index;
            if (!extraction.error.empty()) {
                e["error"] = extraction.error;
            }
            e["components"] = ordered_json::array();
            for (const auto& component : extraction.components) {
                ordered_json k;
                k["period_samples"] = component.period_samples;
                k["period_hours"] = component.period_samples *
                                    static_cast<double>(chunk.sampling_period) / 3600.0;
                k["spikes"] = ordered_json::array();
                for (const auto& spike : component.spikes) {
                    k["spikes"].push_back(spike_json(spike, shim));
                }
                e["components"].push_back(std::move(k));
            }
            c["extractions"].push_back(std::move(e));
        }
        j["chunks"].push_back(std::move(c));
    }
    ordered_json meta;
    if (with_run_timestamp) {
        const auto now = std::chrono::system_clock::now();
        meta["generated_at"] = format_iso8601(
            std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count());
    }
    j["meta"] = std::move(meta);
    return j;
}

pipeline::AnalysisReport from_json(const ordered_json& j) {
    if (j.at("schema_version").get<int>() != 1) {
        throw input_error("report: unsupported schema version");
    }
    pipeline::AnalysisReport report;
    report.household_id = j.at("household_id").get<std::string>();
    report.version = j.at("version").get<std::string>();
    report.config = config_from_json(j.at("config"));
    for (const auto& c : j.at("chunks")) {
        pipeline::ChunkReport chunk;
        chunk.start_time = parse_iso8601(c.at("start_time").get<std::string>());
        chunk.sampling_period = c.at("sampling_period_seconds").get<std::int64_t>();
        chunk.samples = c.at("samples").get<std::size_t>();
        if (c.contains("error")) {
            chunk.error = c.at("error").get<std::string>();
        }
        for (const auto& bp : c.at("breakpoint_samples")) {
            chunk.segmentation.breakpoints.push_back(bp.get<std::size_t>());
        }
        chunk.segmentation.grid_size = c.at("grid_size").get<std::size_t>();
        TimeSeries shim;
        shim.start_time = chunk.start_time;
        shim.sampling_period = chunk.sampling_period;
        for (const auto& w : c.at("windows")) {
            occupancy::WindowLabel label;
            const std::int64_t start = parse_iso8601(w.at("start").get<std::string>());
            const std::int64_t end = parse_iso8601(w.at("end").get<std::string>());
            label.window.a = static_cast<std::size_t>((start - chunk.start_time) /
                                                      chunk.sampling_period);
            label.window.b =
                static_cast<std::size_t>((end - chunk.start_time) / chunk.sampling_period);
            label.label = w.at("label").get<std::string>() == "holiday"
                              ? occupancy::Label::holiday
                              : occupancy::Label::occupied;
            label.criterion_value = w.at("criterion_value").get<double>();
            chunk.windows.push_back(label);
        }
        for (const auto& h : c.at("holiday_intervals")) {
            occupancy::HolidayInterval interval;
            interval.start_time = parse_iso8601(h.at("start").get<std::string>());
            interval.end_time = parse_iso8601(h.at("end").get<std::string>());
            interval.start_sample = h.at("start_sample").get<std::size_t>();
            interval.end_sample = h.at("end_sample").get<std::size_t>();
            interval.source_windows = h.at("source_windows").get<std::vector<std::size_t>>();
            chunk.holidays.push_back(std::move(interval));
        }
        for (const auto& e : c.at("extractions")) {
            pipeline::IntervalExtraction extraction;
            extraction.interval_index = e.at("interval_index").get<std::size_t>();
            if (e.contains("error")) {
                extraction.error = e.at("error").get<std::string>();
            }
            for (const auto& k : e.at("components")) {
                pipeline::ComponentReport component;
                component.period_samples = k.at("period_samples").get<double>();
                for (const auto& s : k.at("spikes")) {
                    spikes::Spike spike;
                    spike.start = s.at("start_sample").get<std::size_t>();
                    spike.end = s.at("end_sample").get<std::size_t>();
                    spike.peak = s.at("peak").get<double>();
                    spike.mean_above_baseline = s.at("mean_above_baseline").get<double>();
                    spike.baseline = s.at("baseline").get<double>();
                    component.spikes.push_back(spike);
                }
                extraction.components.push_back(std::move(component));
            }
            chunk.extractions.push_back(std::move(extraction));
        }
        report.chunks.push_back(std::move(chunk));
    }
    return report;
}

void write_json(const std::string& path, const pipeline::AnalysisReport& report,
                bool with_run_timestamp) {
    std::ofstream out(path);
    if (!out) {
        throw input_error(path + ": cannot open file for writing");
    }
    out << to_json(report, with_run_timestamp).dump(2) << '\n';
    if (!out) {
        throw input_error(path + ": write failed");
    }
}

pipeline::AnalysisReport read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw input_error(path + ": cannot open file");
    }
    ordered_json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw input_error(path + ": " + e.what());
    }
    return from_json(j);
}

void write_plot_csv(const std::string& path, const std::vector<TimeSeries>& chunks,
                    const pipeline::AnalysisReport& report) {
    if (chunks.size() != report.chunks.size()) {
        throw input_error("write_plot_csv: chunk count mismatch");
    }
    std::size_t max_components = 0;
    for (const auto& chunk : report.chunks) {
        for (const auto& extraction : chunk.extractions) {
            max_components = std::max(max_components, extraction.components.size());
        }
    }

    std::ofstream out(path);
    if (!out) {
        throw input_error(path + ": cannot open file for writing");
    }
    out << "timestamp,value,window_id,label";
    for (std::size_t k = 0; k < max_components; ++k) {
        out << ",component_" << k + 1;
    }
    out << '\n';

    char buf[64];
    for (std::size_t ci = 0; ci < chunks.size(); ++ci) {
        const auto& series = chunks[ci];
        const auto& chunk = report.chunks[ci];
        // Per-sample component heights rebuilt from the spike spans.
        std::vector<std::vector<double>> component_values(
            max_components, std::vector<double>(series.size(), 0.0));
        for (const auto& extraction : chunk.extractions) {
            for (std::size_t k = 0; k < extraction.components.size(); ++k) {
                for (const auto& spike : extraction.components[k].spikes) {
                    for (std::size_t t = spike.start; t < spike.end && t < series.size(); ++t) {
                        component_values[k][t] = spike.mean_above_baseline;
                    }
                }
            }
        }
        std::size_t window = 0;
        for (std::size_t t = 0; t < series.size(); ++t) {
            while (window + 1 < chunk.windows.size() && t >= chunk.windows[window].window.b) {
                ++window;
            }
            const bool holiday = window < chunk.windows.size() &&
                                 chunk.windows[window].label == occupancy::Label::holiday;
            std::snprintf(buf, sizeof(buf), "%.6f", series.values[t]);
            out << format_iso8601(series.sample_time(t)) << ',' << buf << ',' << window << ','
                << (holiday ? "holiday" : "occupied");
            for (std::size_t k = 0; k < max_components; ++k) {
                std::snprintf(buf, sizeof(buf), "%.6f", component_values[k][t]);
                out << ',' << buf;
            }
            out << '\n';
        }
    }
    if (!out) {
        throw input_error(path + ": write failed");
    }
}

void write_svg(const std::string& path, const std::vector<TimeSeries>& chunks,
               const pipeline::AnalysisReport& report) {
    if (chunks.size() != report.chunks.size()) {
        throw input_error("write_svg: chunk count mismatch");
    }
    const double width = 1200.0;
    const double row_height = 220.0;
    const double pad = 30.0;
    const double height = row_height * static_cast<double>(chunks.size()) + pad;

    std::ofstream out(path);
    if (!out) {
        throw input_error(path + ": cannot open file for writing");
    }
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";

    for (std::size_t ci = 0; ci < chunks.size(); ++ci) {
        const auto& series = chunks[ci];
        const auto& chunk = report.chunks[ci];
        if (series.size() < 2) continue;
        const double top = row_height * static_cast<double>(ci) + pad / 2.0;
        const double plot_height = row_height - pad;
        double vmax = 0.0;
        for (const double v : series.values) vmax = std::max(vmax, v);
        if (vmax <= 0.0) vmax = 1.0;
        const double x_scale = width / static_cast<double>(series.size() - 1);
        auto x_of = [&](std::size_t t) { return static_cast<double>(t) * x_scale; };
        auto y_of = [&](double v) { return top + plot_height * (1.0 - std::min(v, vmax) / vmax); };

        for (const auto& interval : chunk.holidays) {
            out << "  <rect class=\"holiday\" x=\"" << x_of(interval.start_sample) << "\" y=\""
                << top << "\" width=\"" << x_of(interval.end_sample) - x_of(interval.start_sample)
                << "\" height=\"" << plot_height << "\" fill=\"#ffd27f\" opacity=\"0.6\"/>\n";
        }
        out << "  <polyline fill=\"none\" stroke=\"#2266aa\" stroke-width=\"0.6\" points=\"";
        for (std::size_t t = 0; t < series.size(); ++t) {
            if (t > 0) out << ' ';
            out << x_of(t) << ',' << y_of(series.values[t]);
        }
        out << "\"/>\n";
    }
    out << "</svg>\n";
    if (!out) {
        throw input_error(path + ": write failed");
    }
}

}  // namespace holidet::report
