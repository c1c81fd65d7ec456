#include <doctest.h>

#include <cmath>

#include "rcd/errors.hpp"
#include "rcd/simulation.hpp"
#include "rcd/stat_tests.hpp"
#include "rcd/regression.hpp"

using namespace rcd;

namespace {

// B permuted into causal order must be strictly lower triangular.
bool acyclic_in_order(const GroundTruthModel& m) {
    const std::size_t d = m.num_observed();
    std::vector<std::size_t> pos(d);
    for (std::size_t k = 0; k < d; ++k) pos[m.causal_order[k]] = k;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            if (m.b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) != 0.0 && pos[j] >= pos[i]) return false;
    return true;
}

}  // namespace

TEST_CASE("generate_model: structure of the default configuration") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        SimConfig cfg;
        cfg.seed = seed;
        const GroundTruthModel m = generate_model(cfg);
        CHECK(m.num_observed() == 20);
        CHECK(m.num_latent() == 4);
        CHECK(acyclic_in_order(m));
        CHECK((m.b.array() != 0.0).count() == 40);
        for (Eigen::Index k = 0; k < 4; ++k) CHECK((m.lambda.col(k).array() != 0.0).count() == 2);
        for (Eigen::Index i = 0; i < m.b.size(); ++i) {
            const double v = m.b.data()[i];
            if (v != 0.0) CHECK((std::abs(v) >= 0.5 && std::abs(v) <= 1.0));
        }
        for (Eigen::Index i = 0; i < m.lambda.size(); ++i) {
            const double v = m.lambda.data()[i];
            if (v != 0.0) CHECK((std::abs(v) >= 0.5 && std::abs(v) <= 1.0));
        }
        const CausalGraph g = ground_truth_graph(m);
        CHECK(validate_graph(g).empty());
    }
}

TEST_CASE("generate_model: determinism and errors") {
    SimConfig cfg;
    cfg.seed = 42;
    const GroundTruthModel a = generate_model(cfg), b = generate_model(cfg);
    CHECK(a.b == b.b);
    CHECK(a.lambda == b.lambda);
    CHECK(a.causal_order == b.causal_order);
    cfg.seed = 43;
    CHECK_FALSE(generate_model(cfg).b == a.b);

    SimConfig bad;
    bad.num_observed = 5;
    bad.num_edges = 11;
    CHECK_THROWS_AS(generate_model(bad), InvalidArgument);
    bad.num_edges = 10;
    CHECK_NOTHROW(generate_model(bad));
    bad.children_per_latent = 6;
    CHECK_THROWS_AS(generate_model(bad), InvalidArgument);
}

TEST_CASE("make_model: derives an order and rejects cycles") {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(3, 3);
    b(0, 2) = 0.7;  // x3 -> x1
    b(1, 0) = 0.7;  // x1 -> x2
    const GroundTruthModel m = make_model(b, Eigen::MatrixXd::Zero(3, 0));
    CHECK(m.causal_order == std::vector<std::size_t>{2, 0, 1});
    b(2, 1) = 0.5;
    CHECK_THROWS_AS(make_model(b, Eigen::MatrixXd::Zero(3, 0)), InvalidArgument);
}

TEST_CASE("ground_truth_graph: confounding overrides direct edges") {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(8, 8);
    b(4, 1) = 0.9;  // x2 -> x5, no shared latent
    b(6, 2) = 0.6;  // x3 -> x7, shared latent below
    Eigen::MatrixXd lambda = Eigen::MatrixXd::Zero(8, 1);
    lambda(2, 0) = 0.7;
    lambda(6, 0) = -0.8;
    const CausalGraph g = ground_truth_graph(make_model(b, lambda));
    CHECK(g.confounded(2, 6));
    CHECK(g.confounded(6, 2));
    CHECK(g.num_bidirected() == 1);
    CHECK(g.parents(4, 1));
    CHECK_FALSE(g.parents(6, 2));
    CHECK(g.num_directed() == 1);
}

TEST_CASE("sample_data: independent columns when nothing is connected") {
    const GroundTruthModel m = make_model(Eigen::MatrixXd::Zero(4, 4), Eigen::MatrixXd::Zero(4, 0));
    int rejections = 0, tests = 0;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const Dataset d = sample_data(m, 200, seed);
        for (Eigen::Index i = 0; i < 4; ++i) {
            for (Eigen::Index j = i + 1; j < 4; ++j) {
                const Eigen::VectorXd a = d.values.col(i), b = d.values.col(j);
                rejections += hsic_pvalue(as_samples(a), as_samples(b)).p_value < 0.05;
                ++tests;
            }
        }
    }
    CHECK(static_cast<double>(rejections) / tests < 0.1);
}

TEST_CASE("sample_data: regression slope and zero means") {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(2, 2);
    b(1, 0) = 0.8;
    const GroundTruthModel m = make_model(b, Eigen::MatrixXd::Zero(2, 0));
    const Dataset d = sample_data(m, 10000, 5);
    CHECK_FALSE(d.centered);
    const Eigen::VectorXd x1 = d.values.col(0).array() - d.values.col(0).mean();
    const Eigen::VectorXd x2 = d.values.col(1).array() - d.values.col(1).mean();
    CHECK(std::abs(x1.dot(x2) / x1.dot(x1) - 0.8) < 0.1);
    for (Eigen::Index c = 0; c < 2; ++c) {
        const Eigen::VectorXd col = d.values.col(c);
        const double sd = std::sqrt((col.array() - col.mean()).square().mean());
        CHECK(std::abs(col.mean()) < 3 * sd / std::sqrt(10000.0));
    }
}

TEST_CASE("sample_data: determinism per seed") {
    SimConfig cfg;
    cfg.seed = 9;
    const GroundTruthModel m = generate_model(cfg);
    CHECK(sample_data(m, 50, 1).values == sample_data(m, 50, 1).values);
    CHECK_FALSE(sample_data(m, 50, 1).values == sample_data(m, 50, 2).values);
}

TEST_CASE("sample_data: covariance matches the analytic form") {
    SimConfig cfg;
    cfg.num_observed = 4;
    cfg.num_latent = 1;
    cfg.num_edges = 3;
    cfg.seed = 13;
    const GroundTruthModel m = generate_model(cfg);
    const Dataset d = sample_data(m, 100000, 17);
    const Eigen::MatrixXd centered = d.values.rowwise() - d.values.colwise().mean();
    const Eigen::MatrixXd sample_cov = centered.transpose() * centered / (d.values.rows() - 1.0);
    const Eigen::MatrixXd expected = analytic_covariance(m);
    // Cubed Gaussians are heavy tailed; allow 10% of the diagonal scale.
    const double scale = expected.diagonal().maxCoeff();
    CHECK((sample_cov - expected).cwiseAbs().maxCoeff() < 0.1 * scale);
}

TEST_CASE("rng: uniform range and index bounds") {
    Rng rng(1);
    for (int i = 0; i < 1000; ++i) {
        const double u = rng.uniform();
        CHECK((u >= 0.0 && u < 1.0));
        CHECK(rng.index(7) < 7);
    }
    CHECK_THROWS_AS(rng.index(0), InvalidArgument);
    CHECK(derive_seed(1, 1) != derive_seed(1, 2));
    CHECK(derive_seed(1, 1) == derive_seed(1, 1));
}
