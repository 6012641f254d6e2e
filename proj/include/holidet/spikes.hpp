#pragma once

#include <cstddef>
#include <vector>

#include "holidet/autoperiod.hpp"
#include "holidet/series.hpp"

namespace holidet::spikes {

/// Maximal run of samples strictly above a threshold. The baseline is the
/// mean of the single samples flanking the run (just one of them at a
/// series boundary).
struct Spike {
    std::size_t start = 0;  // [start, end)
    std::size_t end = 0;
    double peak = 0.0;
    double mean_above_baseline = 0.0;
    double baseline = 0.0;
};

struct RetrievalParams {
    double period = 2.0;   // P, samples; >= 2
    double max_error = 2;  // m, samples; 0 <= m < P/2
};

/// One extracted periodic component. component + residue reproduces the
/// input exactly, sample by sample; the component is nonzero only inside
/// the selected spikes.
struct ExtractionResult {
    TimeSeries component;
    TimeSeries residue;
    std::vector<Spike> selected_spikes;
    double period = 0.0;
};

struct ExtractionConfig {
    autoperiod::Config period_detection;
    double max_error = 2;
    int max_iterations = 4;
};

/// Spike/baseline split point of the value distribution: Gaussian KDE
/// (Silverman bandwidth), threshold at the deepest density minimum
/// between the two highest modes; mean + 2*std when unimodal.
/// Throws std::domain_error for a constant series (no spikes exist).
double kde_threshold(const TimeSeries& series);

std::vector<Spike> detect_spikes(const TimeSeries& series, double threshold);

/// Keep the spikes that sit on a periodic grid of spacing P, up to a
/// per-jump alignment error of m samples. The anchor is the spike with
/// the most near-multiple companions; the scan then walks jumps of +-P
/// from each accepted spike, widening the jump on misses, and gives up a
/// direction after floor(D/P) consecutive misses (D = furthest spike
/// offset from the anchor). Returns the sorted selected start indices.
std::vector<std::size_t> retrieve_periodic(const std::vector<std::size_t>& spike_starts,
                                           const RetrievalParams& params);

/// Rebuild the periodic component: each selected spike contributes its
/// mean-above-baseline over its own span, zero elsewhere.
ExtractionResult reconstruct(const TimeSeries& series, const std::vector<Spike>& selected);

/// Iterate period detection -> threshold -> spike detection -> periodic
/// retrieval -> reconstruction on the running residue until no validated
/// period remains (hard cap config.max_iterations).
std::vector<ExtractionResult> extract_all(const TimeSeries& series,
                                          const ExtractionConfig& config = {});

}  // namespace holidet::spikes
