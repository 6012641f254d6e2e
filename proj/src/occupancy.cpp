#include "holidet/occupancy.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "holidet/signal.hpp"

namespace holidet::occupancy {

std::string ClassifierSpec::name() const {
    std::string out = comparison == Comparison::neighbours ? "N_" : "F_";
    out += criterion == Criterion::mean ? "mean" : "var";
    return out;
}

namespace {

void check_spec(const ClassifierSpec& spec) {
    if (!(spec.ratio > 0.0) || spec.ratio > 1.0) {
        throw std::invalid_argument("classify_windows: ratio must lie in (0, 1]");
    }
}

double criterion_value(const TimeSeries& series, Subrange range, Criterion criterion) {
    return criterion == Criterion::mean ? signal::mean(series, range)
                                        : signal::variance(series, range);
}

}  // namespace

std::vector<WindowLabel> classify_windows(const TimeSeries& series,
                                          const changepoint::Segmentation& seg,
                                          const ClassifierSpec& spec) {
    check_spec(spec);
    const std::size_t n = seg.window_count();
    if (n == 0) {
        throw std::invalid_argument("classify_windows: empty segmentation");
    }
    if (spec.comparison == Comparison::neighbours && n < 2) {
        throw std::invalid_argument(
            "classify_windows: neighbour comparison needs at least two windows");
    }

    std::vector<double> gamma(n);
    for (std::size_t k = 0; k < n; ++k) {
        gamma[k] = criterion_value(series, seg.window(k), spec.criterion);
    }

    std::vector<WindowLabel> out(n);
    const double r = spec.ratio;
    if (spec.comparison == Comparison::full) {
        const double whole = criterion_value(series, {0, series.size()}, spec.criterion);
        for (std::size_t k = 0; k < n; ++k) {
            bool holiday = gamma[k] <= r * whole;
            if (gamma[k] == 0.0 && whole == 0.0) holiday = false;
            out[k] = {seg.window(k), holiday ? Label::holiday : Label::occupied, gamma[k]};
        }
    } else {
        for (std::size_t k = 0; k < n; ++k) {
            // Boundary windows fall back to their single neighbour.
            const double left = k == 0 ? gamma[1] : gamma[k - 1];
            const double right = k + 1 == n ? gamma[n - 2] : gamma[k + 1];
            bool holiday = gamma[k] <= std::min(left, right) &&
                           gamma[k] <= 0.5 * r * (left + right);
            if (gamma[k] == 0.0 && left == 0.0 && right == 0.0) holiday = false;
            out[k] = {seg.window(k), holiday ? Label::holiday : Label::occupied, gamma[k]};
        }
    }
    return out;
}

std::vector<HolidayInterval> merge_holidays(const TimeSeries& series,
                                            const std::vector<WindowLabel>& labels,
                                            std::int64_t min_duration_seconds) {
    std::vector<HolidayInterval> out;
    std::size_t k = 0;
    while (k < labels.size()) {
        if (labels[k].label != Label::holiday) {
            ++k;
            continue;
        }
        std::size_t run_end = k;
        while (run_end + 1 < labels.size() && labels[run_end + 1].label == Label::holiday &&
               labels[run_end + 1].window.a == labels[run_end].window.b) {
            ++run_end;
        }
        HolidayInterval interval;
        interval.start_sample = labels[k].window.a;
        interval.end_sample = labels[run_end].window.b;
        interval.start_time = series.sample_time(interval.start_sample);
        interval.end_time = series.sample_time(interval.end_sample);
        for (std::size_t w = k; w <= run_end; ++w) interval.source_windows.push_back(w);
        if (interval.end_time - interval.start_time >= min_duration_seconds) {
            out.push_back(std::move(interval));
        }
        k = run_end + 1;
    }
    return out;
}

std::vector<WindowLabel> baseline_random(const changepoint::Segmentation& seg,
                                         double p, std::uint64_t seed) {
    if (p < 0.0 || p > 1.0) {
        throw std::invalid_argument("baseline_random: p must lie in [0, 1]");
    }
    std::mt19937_64 rng(seed);
    std::vector<WindowLabel> out(seg.window_count());
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double u = std::ldexp(static_cast<double>(rng() >> 11), -53);
        out[k] = {seg.window(k), u < p ? Label::holiday : Label::occupied, 0.0};
    }
    return out;
}

MetricsReport metrics_from_counts(std::size_t tp, std::size_t fp, std::size_t fn, std::size_t tn) {
    MetricsReport m;
    m.tp = tp;
    m.fp = fp;
    m.fn = fn;
    m.tn = tn;
    m.precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    m.recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    m.f1 = m.precision + m.recall > 0.0
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    return m;
}

MetricsReport score(const std::vector<Label>& predicted, const std::vector<Label>& truth) {
    if (predicted.size() != truth.size()) {
        throw std::invalid_argument("score: prediction/truth length mismatch (" +
                                    std::to_string(predicted.size()) + " vs " +
                                    std::to_string(truth.size()) + ")");
    }
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
    for (std::size_t k = 0; k < truth.size(); ++k) {
        const bool p = predicted[k] == Label::holiday;
        const bool t = truth[k] == Label::holiday;
        if (p && t) ++tp;
        else if (p && !t) ++fp;
        else if (!p && t) ++fn;
        else ++tn;
    }
    return metrics_from_counts(tp, fp, fn, tn);
}

MetricsReport score(const std::vector<WindowLabel>& predicted, const std::vector<Label>& truth) {
    std::vector<Label> p(predicted.size());
    for (std::size_t k = 0; k < predicted.size(); ++k) p[k] = predicted[k].label;
    return score(p, truth);
}

namespace {

// Pooled counts over a set of households for one ratio.
MetricsReport pooled_score(const std::vector<LabeledHousehold>& dataset,
                           const std::vector<std::size_t>& members,
                           const ClassifierSpec& spec) {
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
    for (const std::size_t idx : members) {
        const auto& hh = dataset[idx];
        const auto labels = classify_windows(hh.series, hh.seg, spec);
        const auto m = score(labels, hh.truth);
        tp += m.tp;
        fp += m.fp;
        fn += m.fn;
        tn += m.tn;
    }
    return metrics_from_counts(tp, fp, fn, tn);
}

}  // namespace

RatioFit fit_ratio(const std::vector<LabeledHousehold>& dataset,
                   Comparison comparison, Criterion criterion,
                   const std::vector<double>& ratio_grid, std::size_t folds) {
    if (dataset.empty()) {
        throw std::invalid_argument("fit_ratio: empty dataset");
    }
    if (ratio_grid.empty()) {
        throw std::invalid_argument("fit_ratio: empty ratio grid");
    }
    if (folds == 0 || folds > dataset.size()) {
        throw std::invalid_argument("fit_ratio: fold count must lie in [1, #households]");
    }

    std::vector<double> grid = ratio_grid;
    std::sort(grid.begin(), grid.end());

    std::vector<std::vector<std::size_t>> groups(folds);
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        groups[i % folds].push_back(i);
    }

    RatioFit fit;
    for (std::size_t f = 0; f < folds; ++f) {
        if (groups[f].empty()) {
            throw std::invalid_argument("fit_ratio: empty fold " + std::to_string(f));
        }
        std::vector<std::size_t> eval_members;
        for (std::size_t g = 0; g < folds; ++g) {
            if (g == f) continue;
            eval_members.insert(eval_members.end(), groups[g].begin(), groups[g].end());
        }
        if (eval_members.empty()) eval_members = groups[f];  // single-fold degenerate case

        double best_r = grid.front();
        double best_f1 = -1.0;
        for (const double r : grid) {
            const auto m = pooled_score(dataset, groups[f], {comparison, criterion, r});
            if (m.f1 > best_f1) {
                best_f1 = m.f1;
                best_r = r;
            }
        }
        fit.fold_ratios.push_back(best_r);
        fit.fold_metrics.push_back(
            pooled_score(dataset, eval_members, {comparison, criterion, best_r}));
    }

    double f1_sum = 0.0;
    for (const auto& m : fit.fold_metrics) f1_sum += m.f1;
    fit.mean_f1 = f1_sum / static_cast<double>(fit.fold_metrics.size());

    // Majority vote over the per-fold ratios, ties to the smaller value.
    double best_ratio = fit.fold_ratios.front();
    std::size_t best_votes = 0;
    for (const double candidate : fit.fold_ratios) {
        std::size_t votes = 0;
        for (const double other : fit.fold_ratios) {
            if (other == candidate) ++votes;
        }
        if (votes > best_votes || (votes == best_votes && candidate < best_ratio)) {
            best_votes = votes;
            best_ratio = candidate;
        }
    }
    fit.best_ratio = best_ratio;
    return fit;
}

}  // namespace holidet::occupancy
