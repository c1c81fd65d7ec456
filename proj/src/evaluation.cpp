#include "rcd/evaluation.hpp"

#include <algorithm>
#include <cmath>

#include "rcd/errors.hpp"
#include "rcd/parallel.hpp"

namespace rcd {

EdgeMetrics make_metrics(std::size_t true_positive, std::size_t num_estimated, std::size_t num_true) {
    EdgeMetrics m{true_positive, num_estimated, num_true, 0.0, 0.0, 0.0};
    if (num_estimated > 0) m.precision = static_cast<double>(true_positive) / static_cast<double>(num_estimated);
    if (num_true > 0) m.recall = static_cast<double>(true_positive) / static_cast<double>(num_true);
    if (m.precision + m.recall > 0.0) m.f_measure = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    return m;
}

GraphScore score_graph(const CausalGraph& estimated, const CausalGraph& truth) {
    const std::size_t n = truth.num_variables();
    if (estimated.num_variables() != n) {
        throw InvalidArgument("score_graph: graphs have different variable counts");
    }
    std::size_t dir_tp = 0, dir_est = 0, dir_true = 0;
    std::size_t bi_tp = 0, bi_est = 0, bi_true = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const bool e = estimated.parents(i, j);
            const bool t = truth.parents(i, j);
            dir_est += e;
            dir_true += t;
            dir_tp += e && t;
            if (j > i) {
                const bool eb = estimated.confounded(i, j);
                const bool tb = truth.confounded(i, j);
                bi_est += eb;
                bi_true += tb;
                bi_tp += eb && tb;
            }
        }
    }
    return {make_metrics(dir_tp, dir_est, dir_true), make_metrics(bi_tp, bi_est, bi_true)};
}

CausalGraph random_orientation_baseline(const CausalGraph& truth, std::uint64_t seed) {
    const std::size_t n = truth.num_variables();
    Rng rng(seed);
    CausalGraph g(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!(truth.parents(i, j) || truth.parents(j, i) || truth.confounded(i, j))) continue;
            switch (rng.index(3)) {
                case 0: g.parents.set(i, j); break;
                case 1: g.parents.set(j, i); break;
                default:
                    g.confounded.set(i, j);
                    g.confounded.set(j, i);
            }
        }
    }
    return g;
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) throw InvalidArgument("quantile: empty input");
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

Quartiles quartiles(const std::vector<double>& values) {
    return {quantile(values, 0.25), quantile(values, 0.5), quantile(values, 0.75)};
}

std::map<std::string, std::vector<double>> metric_columns(const std::vector<TrialResult>& trials) {
    std::map<std::string, std::vector<double>> cols;
    auto add = [&](const std::string& prefix, const EdgeMetrics& m) {
        cols[prefix + "_precision"].push_back(m.precision);
        cols[prefix + "_recall"].push_back(m.recall);
        cols[prefix + "_f_measure"].push_back(m.f_measure);
    };
    for (const auto& t : trials) {
        add("directed", t.rcd.directed);
        add("bidirected", t.rcd.bidirected);
        add("baseline_directed", t.baseline.directed);
        add("baseline_bidirected", t.baseline.bidirected);
    }
    return cols;
}

BenchmarkReport run_benchmark(const SimConfig& sim, const RcdConfig& rcd_config, int trials) {
    if (trials < 1) throw InvalidArgument("run_benchmark: trials must be >= 1");
    sim.validate();
    rcd_config.validate();
    BenchmarkReport report;
    report.trials.resize(static_cast<std::size_t>(trials));
    parallel_for(report.trials.size(), [&](std::size_t t) {
        SimConfig cfg = sim;
        cfg.seed = sim.seed + t;
        const GroundTruthModel model = generate_model(cfg);
        const Dataset data = sample_data(model, cfg.num_samples, derive_seed(cfg.seed, 1));
        const CausalGraph truth = ground_truth_graph(model);

        TrialResult& out = report.trials[t];
        out.seed = cfg.seed;
        if (rcd_config.sweep_enabled) {
            const SweepResult sweep = alpha_sweep(data, rcd_config);
            out.rcd = score_graph(sweep.graph, truth);
            out.chosen_k = sweep.chosen_k;
        } else {
            out.rcd = score_graph(run_rcd(data, rcd_config), truth);
        }
        out.baseline = score_graph(random_orientation_baseline(truth, derive_seed(cfg.seed, 2)), truth);
    });
    for (const auto& [name, values] : metric_columns(report.trials)) report.summary[name] = quartiles(values);
    return report;
}

}  // namespace rcd
