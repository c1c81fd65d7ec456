#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rcd/graph.hpp"
#include "rcd/rcd.hpp"
#include "rcd/simulation.hpp"

namespace rcd {

struct EdgeMetrics {
    std::size_t true_positive = 0;
    std::size_t num_estimated = 0;
    std::size_t num_true = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f_measure = 0.0;
};

/// Precision/recall/F with every zero denominator mapped to 0.
EdgeMetrics make_metrics(std::size_t true_positive, std::size_t num_estimated, std::size_t num_true);

struct GraphScore {
    EdgeMetrics directed;
    EdgeMetrics bidirected;
};

/// Directed arrows match on ordered pairs; bi-directed on unordered pairs.
/// A directed estimate on a truly confounded pair is a plain false positive.
GraphScore score_graph(const CausalGraph& estimated, const CausalGraph& truth);

/// Reference graph that takes every adjacent pair of `truth` (directed or
/// bi-directed) and labels it uniformly at random as i->j, j->i or i<->j.
CausalGraph random_orientation_baseline(const CausalGraph& truth, std::uint64_t seed);

struct TrialResult {
    std::uint64_t seed = 0;
    GraphScore rcd;
    GraphScore baseline;
    int chosen_k = 0;  // 0 unless the alpha sweep ran
};

struct Quartiles {
    double lower = 0.0;
    double median = 0.0;
    double upper = 0.0;
};

/// Linear-interpolation quantile (the usual "type 7" definition).
double quantile(std::vector<double> values, double q);
Quartiles quartiles(const std::vector<double>& values);

struct BenchmarkReport {
    std::vector<TrialResult> trials;
    /// Keyed "directed_precision", "bidirected_f_measure", ... and the same
    /// names prefixed "baseline_".
    std::map<std::string, Quartiles> summary;
};

/// Runs `trials` independent simulate-discover-score rounds; trial t uses
/// seed sim.seed + t. Trials may run concurrently; results are ordered by t.
BenchmarkReport run_benchmark(const SimConfig& sim, const RcdConfig& rcd_config, int trials);

/// Per-trial metric values by summary key.
std::map<std::string, std::vector<double>> metric_columns(const std::vector<TrialResult>& trials);

}  // namespace rcd
