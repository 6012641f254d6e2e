#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "holidet/benchmark.hpp"
#include "holidet/csv.hpp"
#include "holidet/pipeline.hpp"
#include "holidet/report.hpp"

namespace {

using namespace holidet;
namespace fs = std::filesystem;

struct ConfigFlags {
    pipeline::Config config;
    std::string classifier_name = "F_var";
    std::string cost_name = "gaussian";
    std::size_t stop_windows = 0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--grid-size", config.grid_size, "Segmentation grid cell, samples");
        cmd->add_option("--cost", cost_name, "Segmentation cost: l2 | gaussian");
        cmd->add_option("--stop-threshold", config.stop_threshold,
                        "Max merge cost on the normalized series");
        cmd->add_option("--stop-windows", stop_windows,
                        "Stop at this window count instead of the threshold");
        cmd->add_flag("!--no-normalize", config.normalize,
                      "Skip z-scoring before segmentation");
        cmd->add_option("--classifier", classifier_name,
                        "Holiday classifier: N_mean | N_var | F_mean | F_var");
        cmd->add_option("--ratio", config.classifier.ratio, "Classifier ratio in (0, 1]");
        cmd->add_option("--min-holiday-days", config.min_holiday_days,
                        "Minimum holiday duration, days");
        cmd->add_option("--permutations", config.permutations,
                        "Permutations for the period significance threshold");
        cmd->add_option("--seed", config.seed, "Seed for all randomized steps");
        cmd->add_option("--max-error", config.max_error, "Spike alignment error, samples");
        cmd->add_option("--iteration-cap", config.iteration_cap,
                        "Maximum extraction passes per holiday interval");
        cmd->add_option("--gap-fill-limit", config.gap_fill_limit,
                        "Interpolate gaps up to this many samples; split otherwise");
        cmd->set_config("--config", "", "Flat key=value config file; flags win");
    }

    pipeline::Config resolve() const {
        pipeline::Config out = config;
        if (cost_name == "l2") {
            out.cost = changepoint::CostModel::l2;
        } else if (cost_name == "gaussian") {
            out.cost = changepoint::CostModel::gaussian;
        } else {
            throw config_error("unknown cost model '" + cost_name + "'");
        }
        if (classifier_name == "N_mean") {
            out.classifier = occupancy::ClassifierSpec::n_mean(config.classifier.ratio);
        } else if (classifier_name == "N_var") {
            out.classifier = occupancy::ClassifierSpec::n_var(config.classifier.ratio);
        } else if (classifier_name == "F_mean") {
            out.classifier = occupancy::ClassifierSpec::f_mean(config.classifier.ratio);
        } else if (classifier_name == "F_var") {
            out.classifier = occupancy::ClassifierSpec::f_var(config.classifier.ratio);
        } else {
            throw config_error("unknown classifier '" + classifier_name + "'");
        }
        if (stop_windows > 0) {
            out.stop_windows = stop_windows;
        }
        out.validate();
        return out;
    }
};

std::string household_id_from_path(const std::string& path) {
    return fs::path(path).stem().string();
}

int run_analyze(const std::vector<std::string>& inputs, const std::string& out_dir,
                const pipeline::Config& config, bool emit_svg, bool emit_plot,
                bool with_timestamp, unsigned jobs) {
    fs::create_directories(out_dir);
    struct Outcome {
        std::string id;
        std::string error;
        std::size_t holidays = 0;
        std::size_t chunks = 0;
    };
    std::vector<Outcome> outcomes(inputs.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= inputs.size()) break;
            Outcome& outcome = outcomes[i];
            outcome.id = household_id_from_path(inputs[i]);
            try {
                const auto ingest =
                    csvio::ingest_csv(inputs[i], kDefaultSamplingPeriod, config.gap_fill_limit);
                const auto report = pipeline::run_pipeline(outcome.id, ingest.chunks, config);
                outcome.chunks = report.chunks.size();
                for (const auto& chunk : report.chunks) {
                    outcome.holidays += chunk.holidays.size();
                }
                const fs::path base = fs::path(out_dir) / outcome.id;
                report::write_json(base.string() + ".report.json", report, with_timestamp);
                if (emit_plot) {
                    report::write_plot_csv(base.string() + ".plot.csv", ingest.chunks, report);
                }
                if (emit_svg) {
                    report::write_svg(base.string() + ".svg", ingest.chunks, report);
                }
            } catch (const std::exception& e) {
                outcome.error = e.what();
            }
        }
    };

    const unsigned n_workers =
        std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(inputs.size())));
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    std::size_t failures = 0;
    for (const auto& outcome : outcomes) {
        if (outcome.error.empty()) {
            std::cout << outcome.id << ": " << outcome.chunks << " chunk(s), "
                      << outcome.holidays << " holiday interval(s)\n";
        } else {
            ++failures;
            std::cerr << outcome.id << ": FAILED: " << outcome.error << "\n";
        }
    }
    if (failures == inputs.size()) return 2;
    if (failures > 0) return 4;
    return 0;
}

int run_evaluate(const std::vector<std::string>& report_paths, const std::string& label_path) {
    std::vector<pipeline::AnalysisReport> reports;
    reports.reserve(report_paths.size());
    for (const auto& path : report_paths) {
        reports.push_back(report::read_json(path));
    }
    const auto labels = csvio::read_label_csv(label_path);
    const auto result = pipeline::evaluate(reports, labels);

    nlohmann::ordered_json j;
    j["micro"] = {{"precision", result.micro.precision},
                  {"recall", result.micro.recall},
                  {"f1", result.micro.f1},
                  {"tp", result.micro.tp},
                  {"fp", result.micro.fp},
                  {"fn", result.micro.fn},
                  {"tn", result.micro.tn}};
    j["macro_f1"] = result.macro_f1;
    j["per_household"] = nlohmann::ordered_json::array();
    for (const auto& hh : result.per_household) {
        j["per_household"].push_back({{"household_id", hh.household_id},
                                      {"precision", hh.metrics.precision},
                                      {"recall", hh.metrics.recall},
                                      {"f1", hh.metrics.f1}});
    }
    std::cout << j.dump(2) << '\n';
    return 0;
}

int run_fit_ratio(const std::vector<std::string>& inputs, const std::string& label_path,
                  const pipeline::Config& config, const std::string& comparison_name,
                  const std::string& criterion_name, std::size_t folds) {
    const auto label_rows = csvio::read_label_csv(label_path);

    std::vector<occupancy::LabeledHousehold> dataset;
    for (const auto& path : inputs) {
        occupancy::LabeledHousehold household;
        household.id = household_id_from_path(path);
        auto ingest = csvio::ingest_csv(path, kDefaultSamplingPeriod, config.gap_fill_limit);
        if (ingest.chunks.size() != 1) {
            throw input_error(path + ": ratio fitting expects gap-free single-chunk series");
        }
        household.series = std::move(ingest.chunks[0]);
        const TimeSeries& for_seg =
            config.normalize ? signal::zscore(household.series) : household.series;
        household.seg =
            changepoint::bottom_up(for_seg, config.cost, config.grid_size, config.stop_rule())
                .segmentation;

        for (std::size_t k = 0; k < household.seg.window_count(); ++k) {
            const auto window = household.seg.window(k);
            const std::int64_t start = household.series.sample_time(window.a);
            const std::int64_t end = household.series.sample_time(window.b);
            bool found = false;
            for (const auto& row : label_rows) {
                if (row.household_id == household.id && row.window_start == start &&
                    row.window_end == end) {
                    household.truth.push_back(row.label);
                    found = true;
                    break;
                }
            }
            if (!found) {
                throw input_error(label_path + ": no label for " + household.id + " window [" +
                                  format_iso8601(start) + ", " + format_iso8601(end) + ")");
            }
        }
        dataset.push_back(std::move(household));
    }

    occupancy::Comparison comparison;
    if (comparison_name == "neighbours") {
        comparison = occupancy::Comparison::neighbours;
    } else if (comparison_name == "full") {
        comparison = occupancy::Comparison::full;
    } else {
        throw config_error("unknown comparison '" + comparison_name + "'");
    }
    occupancy::Criterion criterion;
    if (criterion_name == "mean") {
        criterion = occupancy::Criterion::mean;
    } else if (criterion_name == "variance") {
        criterion = occupancy::Criterion::variance;
    } else {
        throw config_error("unknown criterion '" + criterion_name + "'");
    }

    std::vector<double> grid;
    for (int i = 1; i <= 20; ++i) grid.push_back(0.05 * i);
    const auto fit = occupancy::fit_ratio(dataset, comparison, criterion, grid, folds);

    nlohmann::ordered_json j;
    j["best_ratio"] = fit.best_ratio;
    j["mean_f1"] = fit.mean_f1;
    j["folds"] = nlohmann::ordered_json::array();
    for (std::size_t f = 0; f < fit.fold_metrics.size(); ++f) {
        j["folds"].push_back({{"fitted_ratio", fit.fold_ratios[f]},
                              {"precision", fit.fold_metrics[f].precision},
                              {"recall", fit.fold_metrics[f].recall},
                              {"f1", fit.fold_metrics[f].f1}});
    }
    std::cout << j.dump(2) << '\n';
    return 0;
}

void write_truth_json(const std::string& path, const synth::GroundTruth& truth) {
    nlohmann::ordered_json j;
    j["components"] = nlohmann::ordered_json::array();
    for (const auto& comp : truth.components) {
        j["components"].push_back(comp.values);
    }
    j["events"] = nlohmann::ordered_json::array();
    for (const auto& events : truth.events) {
        nlohmann::ordered_json list = nlohmann::ordered_json::array();
        for (const auto& e : events) {
            list.push_back({{"start", e.start}, {"end", e.end}, {"value", e.value}});
        }
        j["events"].push_back(std::move(list));
    }
    j["random_events"] = nlohmann::ordered_json::array();
    for (const auto& e : truth.random_events) {
        j["random_events"].push_back({{"start", e.start}, {"end", e.end}, {"value", e.value}});
    }
    j["vacancy_intervals"] = nlohmann::ordered_json::array();
    for (const auto& [start, end] : truth.vacancy_intervals) {
        j["vacancy_intervals"].push_back({start, end});
    }
    std::ofstream out(path);
    if (!out) {
        throw input_error(path + ": cannot open file for writing");
    }
    out << j.dump(2) << '\n';
}

int run_synth_case(char name, std::uint64_t seed, const std::string& out_path,
                   const std::string& truth_path) {
    const auto [series, truth] = synth::generate_case(synth::named_case(name, seed));
    csvio::write_series_csv(out_path, series);
    if (!truth_path.empty()) {
        write_truth_json(truth_path, truth);
    }
    std::cout << "case " << name << " -> " << out_path << " (" << series.size() << " samples)\n";
    return 0;
}

int run_synth_households(std::size_t n, std::size_t years, std::uint64_t seed,
                         const std::string& out_dir) {
    fs::create_directories(out_dir);
    std::vector<pipeline::LabelRow> label_rows;
    for (std::size_t i = 0; i < n; ++i) {
        const auto household = bench::make_labeled_household(seed + i, years);
        const fs::path base = fs::path(out_dir) / household.id;
        csvio::write_series_csv(base.string() + ".csv", household.series);
        for (std::size_t k = 0; k < household.seg.window_count(); ++k) {
            const auto window = household.seg.window(k);
            label_rows.push_back({household.id, household.series.sample_time(window.a),
                                  household.series.sample_time(window.b), household.truth[k]});
        }
    }
    const auto label_path = (fs::path(out_dir) / "labels.csv").string();
    csvio::write_label_csv(label_path, label_rows);
    std::cout << n << " household(s) -> " << out_dir << ", labels in " << label_path << '\n';
    return 0;
}

int run_bench(std::uint64_t seed) {
    const auto results = bench::run_case_benchmark(seed);
    const auto& expectations = bench::case_expectations();

    auto show = [](const std::optional<double>& v) {
        if (!v) return std::string("None");
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.4g", *v);
        return std::string(buf);
    };

    std::printf("%-5s %-12s %-10s %-10s %-10s %-10s %s\n", "case", "true", "pass1", "pass2",
                "nmae1", "nmae2", "status");
    bool all_ok = true;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        const bool ok = bench::case_passes(r, expectations[i]);
        all_ok = all_ok && ok;
        std::string truth = show(r.true_periods.size() > 0 ? std::optional<double>(r.true_periods[0])
                                                           : std::nullopt);
        if (r.true_periods.size() > 1) truth += "," + show(r.true_periods[1]);
        std::printf("%-5c %-12s %-10s %-10s %-10s %-10s %s\n", r.name, truth.c_str(),
                    show(r.first_period).c_str(), show(r.second_period).c_str(),
                    show(r.first_nmae).c_str(), show(r.second_nmae).c_str(),
                    ok ? "ok" : "MISMATCH");
    }
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"holidet: vacancy detection and periodic-appliance extraction "
                 "for 30-minute household meter data"};
    app.require_subcommand(1);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Run the full pipeline on meter CSV files");
    std::vector<std::string> analyze_inputs;
    std::string out_dir = ".";
    bool emit_svg = false, emit_plot = false, with_timestamp = false;
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    ConfigFlags analyze_flags;
    analyze->add_option("inputs", analyze_inputs, "Meter CSV files")->required();
    analyze->add_option("--out-dir", out_dir, "Output directory");
    analyze->add_flag("--svg", emit_svg, "Also write an SVG overview per household");
    analyze->add_flag("--plot-csv", emit_plot, "Also write a per-sample plot table");
    analyze->add_flag("--run-timestamp", with_timestamp,
                      "Stamp reports with the wall-clock run time");
    analyze->add_option("--jobs", jobs, "Concurrent households");
    analyze_flags.attach(analyze);

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "Score reports against a label file");
    std::vector<std::string> report_paths;
    std::string label_path;
    evaluate->add_option("reports", report_paths, "Report JSON files")->required();
    evaluate->add_option("--labels", label_path, "Label CSV")->required();

    // fit-ratio
    auto* fit = app.add_subcommand("fit-ratio", "Cross-validate the classifier ratio");
    std::vector<std::string> fit_inputs;
    std::string fit_labels;
    std::string comparison_name = "full";
    std::string criterion_name = "variance";
    std::size_t folds = 5;
    ConfigFlags fit_flags;
    fit->add_option("inputs", fit_inputs, "Meter CSV files")->required();
    fit->add_option("--labels", fit_labels, "Label CSV")->required();
    fit->add_option("--comparison", comparison_name, "neighbours | full");
    fit->add_option("--criterion", criterion_name, "mean | variance");
    fit->add_option("--folds", folds, "Cross-validation folds");
    fit_flags.attach(fit);

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "Generate synthetic benchmark data");
    std::string case_name;
    std::uint64_t synth_seed = 42;
    std::string synth_out = "case.csv";
    std::string truth_out;
    std::size_t households = 0;
    std::size_t years = 2;
    synth_cmd->add_option("--case", case_name, "Named case A..H");
    synth_cmd->add_option("--seed", synth_seed, "Generator seed");
    synth_cmd->add_option("--out", synth_out, "Output CSV (case mode)");
    synth_cmd->add_option("--truth", truth_out, "Ground-truth JSON sidecar (case mode)");
    synth_cmd->add_option("--households", households, "Generate a labeled household suite");
    synth_cmd->add_option("--years", years, "Household length in years");
    synth_cmd->add_option("--out-dir", out_dir, "Output directory (household mode)");

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "Reproduce the synthetic-case benchmark");
    std::uint64_t bench_seed = 42;
    bench_cmd->add_option("--seed", bench_seed, "Generator seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 3;
    }

    try {
        if (analyze->parsed()) {
            return run_analyze(analyze_inputs, out_dir, analyze_flags.resolve(), emit_svg,
                               emit_plot, with_timestamp, jobs);
        }
        if (evaluate->parsed()) {
            return run_evaluate(report_paths, label_path);
        }
        if (fit->parsed()) {
            return run_fit_ratio(fit_inputs, fit_labels, fit_flags.resolve(), comparison_name,
                                 criterion_name, folds);
        }
        if (synth_cmd->parsed()) {
            if (households > 0) {
                return run_synth_households(households, years, synth_seed, out_dir);
            }
            if (case_name.size() != 1) {
                throw config_error("synth: pass --case A..H or --households N");
            }
            return run_synth_case(case_name[0], synth_seed, synth_out, truth_out);
        }
        if (bench_cmd->parsed()) {
            return run_bench(bench_seed);
        }
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 3;
    } catch (const input_error& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
