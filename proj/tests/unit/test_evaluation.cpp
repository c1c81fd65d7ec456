#include <doctest.h>

#include "rcd/errors.hpp"
#include "rcd/evaluation.hpp"

using namespace rcd;

namespace {

CausalGraph sample_graph() {
    CausalGraph g(5);
    g.parents.set(1, 0);
    g.parents.set(2, 1);
    g.parents.set(4, 2);
    g.confounded.set(0, 3);
    g.confounded.set(3, 0);
    return g;
}

}  // namespace

TEST_CASE("metrics: identity scores perfectly") {
    const CausalGraph g = sample_graph();
    const GraphScore s = score_graph(g, g);
    for (const EdgeMetrics& m : {s.directed, s.bidirected}) {
        CHECK(m.precision == 1.0);
        CHECK(m.recall == 1.0);
        CHECK(m.f_measure == 1.0);
    }
}

TEST_CASE("metrics: table arithmetic") {
    const EdgeMetrics bi = make_metrics(4, 4, 4);
    CHECK(bi.precision == 1.0);
    const EdgeMetrics dir = make_metrics(4, 5, 6);
    CHECK(dir.precision == 0.8);
    const EdgeMetrics half = make_metrics(1, 2, 2);
    CHECK(half.precision == 0.5);
    CHECK(half.recall == 0.5);
    CHECK(half.f_measure == 0.5);
    const EdgeMetrics none = make_metrics(0, 0, 3);
    CHECK(none.precision == 0.0);
    CHECK(none.recall == 0.0);
    CHECK(none.f_measure == 0.0);
    CHECK(make_metrics(0, 2, 0).recall == 0.0);
}

TEST_CASE("metrics: directed estimate on a confounded pair is a false positive") {
    CausalGraph truth(3);
    truth.confounded.set(0, 1);
    truth.confounded.set(1, 0);
    CausalGraph est(3);
    est.parents.set(1, 0);
    const GraphScore s = score_graph(est, truth);
    CHECK(s.directed.num_estimated == 1);
    CHECK(s.directed.true_positive == 0);
    CHECK(s.bidirected.true_positive == 0);
    CHECK(s.bidirected.num_true == 1);
}

TEST_CASE("metrics: unresolved pairs are not estimates") {
    const CausalGraph truth = sample_graph();
    CausalGraph est(5);
    est.unresolved.insert({0, 1});
    const GraphScore s = score_graph(est, truth);
    CHECK(s.directed.num_estimated == 0);
    CHECK(s.bidirected.num_estimated == 0);
}

TEST_CASE("metrics: relabeling invariance and dimension errors") {
    const CausalGraph truth = sample_graph();
    CausalGraph est(5);
    est.parents.set(1, 0);
    est.parents.set(3, 4);
    est.confounded.set(2, 4);
    est.confounded.set(4, 2);
    const std::vector<std::size_t> perm{3, 0, 4, 1, 2};
    auto relabel = [&](const CausalGraph& g) {
        CausalGraph out(5);
        for (std::size_t i = 0; i < 5; ++i)
            for (std::size_t j = 0; j < 5; ++j) {
                if (g.parents(i, j)) out.parents.set(perm[i], perm[j]);
                if (g.confounded(i, j)) out.confounded.set(perm[i], perm[j]);
            }
        return out;
    };
    const GraphScore a = score_graph(est, truth);
    const GraphScore b = score_graph(relabel(est), relabel(truth));
    CHECK(a.directed.precision == b.directed.precision);
    CHECK(a.directed.recall == b.directed.recall);
    CHECK(a.bidirected.f_measure == b.bidirected.f_measure);
    CHECK(a.directed.true_positive <= std::min(a.directed.num_estimated, a.directed.num_true));
    CHECK_THROWS_AS(score_graph(CausalGraph(4), truth), InvalidArgument);
}

TEST_CASE("quantiles") {
    CHECK(quantile({3.0}, 0.5) == 3.0);
    CHECK(quantile({0, 0, 1, 1}, 0.5) == 0.5);
    const Quartiles q = quartiles({1, 2, 3, 4, 5});
    CHECK(q.lower == 2.0);
    CHECK(q.median == 3.0);
    CHECK(q.upper == 4.0);
    CHECK_THROWS_AS(quantile({}, 0.5), InvalidArgument);
}

TEST_CASE("baseline: labels exactly the true adjacencies") {
    const CausalGraph truth = sample_graph();
    const CausalGraph base = random_orientation_baseline(truth, 5);
    CHECK(validate_graph(base).empty());
    CHECK(base.num_directed() + base.num_bidirected() == 4);
    CHECK(random_orientation_baseline(truth, 5) == base);
}

TEST_CASE("run_benchmark: small deterministic run") {
    SimConfig sim;
    sim.num_observed = 5;
    sim.num_latent = 1;
    sim.num_edges = 4;
    sim.num_samples = 200;
    sim.seed = 100;
    const BenchmarkReport one = run_benchmark(sim, RcdConfig{}, 1);
    REQUIRE(one.trials.size() == 1);
    CHECK(one.summary.at("directed_precision").median == one.trials[0].rcd.directed.precision);
    CHECK(one.trials[0].seed == 100);

    const BenchmarkReport three = run_benchmark(sim, RcdConfig{}, 3);
    REQUIRE(three.trials.size() == 3);
    CHECK(three.trials[2].seed == 102);
    CHECK(three.trials[0].rcd.directed.precision == one.trials[0].rcd.directed.precision);
    for (const auto& [name, q] : three.summary) {
        CHECK(q.lower <= q.median);
        CHECK(q.median <= q.upper);
        CHECK(q.lower >= 0.0);
        CHECK(q.upper <= 1.0);
    }
    CHECK_THROWS_AS(run_benchmark(sim, RcdConfig{}, 0), InvalidArgument);
}
