#include "rcd/simulation.hpp"

#include <cmath>
#include <numbers>
#include <limits>
#include <numeric>
#include <string>

#include "rcd/errors.hpp"

namespace rcd {

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal(double mean, double stddev) {
    if (has_spare_) {
        has_spare_ = false;
        return mean + stddev * spare_;
    }
    double u1 = 0.0;
    do {
        u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return mean + stddev * radius * std::cos(angle);
}

std::size_t Rng::index(std::size_t bound) {
    if (bound == 0) throw InvalidArgument("Rng::index: empty range");
    // Rejection keeps the draw unbiased.
    const std::uint64_t b = bound;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % b;
    std::uint64_t v = 0;
    do {
        v = engine_();
    } while (v >= limit);
    return static_cast<std::size_t>(v % b);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 finalizer
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

void SimConfig::validate() const {
    if (num_observed < 1) throw InvalidArgument("SimConfig: num_observed must be positive");
    if (num_latent < 0) throw InvalidArgument("SimConfig: num_latent must be non-negative");
    if (num_edges < 0) throw InvalidArgument("SimConfig: num_edges must be non-negative");
    const long long max_edges = static_cast<long long>(num_observed) * (num_observed - 1) / 2;
    if (num_edges > max_edges) {
        throw InvalidArgument("SimConfig: " + std::to_string(num_edges) + " edges exceed the acyclic maximum " +
                              std::to_string(max_edges));
    }
    if (num_latent > 0 && (children_per_latent < 1 || children_per_latent > num_observed)) {
        throw InvalidArgument("SimConfig: children_per_latent must lie in [1, num_observed]");
    }
    if (num_samples < 1) throw InvalidArgument("SimConfig: num_samples must be positive");
}

namespace {

double random_weight(Rng& rng) {
    const double magnitude = rng.uniform(0.5, 1.0);
    return rng.uniform() < 0.5 ? -magnitude : magnitude;
}

// Partial Fisher-Yates: after the call, the first k entries are a uniform
// random k-subset in random order.
template <typename T>
void partial_shuffle(std::vector<T>& items, std::size_t k, Rng& rng) {
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + rng.index(items.size() - i);
        std::swap(items[i], items[j]);
    }
}

}  // namespace

GroundTruthModel make_model(Eigen::MatrixXd b, Eigen::MatrixXd lambda, std::uint64_t seed) {
    const Eigen::Index d = b.rows();
    if (b.cols() != d) throw InvalidArgument("make_model: B must be square");
    if (lambda.size() == 0) lambda.resize(d, 0);
    if (lambda.rows() != d) throw InvalidArgument("make_model: Lambda rows must match B");

    // Kahn's algorithm, lowest index first among ready nodes.
    std::vector<int> pending(static_cast<std::size_t>(d), 0);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            if (b(i, j) != 0.0) {
                if (i == j) throw InvalidArgument("make_model: self-loop in B");
                ++pending[static_cast<std::size_t>(i)];
            }
        }
    }
    std::vector<std::size_t> order;
    std::vector<bool> placed(static_cast<std::size_t>(d), false);
    while (static_cast<Eigen::Index>(order.size()) < d) {
        bool progressed = false;
        for (Eigen::Index v = 0; v < d; ++v) {
            const auto sv = static_cast<std::size_t>(v);
            if (placed[sv] || pending[sv] != 0) continue;
            placed[sv] = true;
            order.push_back(sv);
            for (Eigen::Index i = 0; i < d; ++i) {
                if (b(i, v) != 0.0) --pending[static_cast<std::size_t>(i)];
            }
            progressed = true;
            break;
        }
        if (!progressed) throw InvalidArgument("make_model: B contains a directed cycle");
    }
    return {std::move(b), std::move(lambda), std::move(order), seed};
}

GroundTruthModel generate_model(const SimConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);
    const auto d = static_cast<std::size_t>(cfg.num_observed);

    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), 0);
    partial_shuffle(order, d, rng);

    // Candidate edges (cause, effect) respecting the order.
    std::vector<std::pair<std::size_t, std::size_t>> candidates;
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t c = a + 1; c < d; ++c) candidates.emplace_back(order[a], order[c]);
    }
    const auto num_edges = static_cast<std::size_t>(cfg.num_edges);
    partial_shuffle(candidates, num_edges, rng);

    GroundTruthModel model;
    model.b = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t e = 0; e < num_edges; ++e) {
        const auto [cause, effect] = candidates[e];
        model.b(static_cast<Eigen::Index>(effect), static_cast<Eigen::Index>(cause)) = random_weight(rng);
    }

    model.lambda = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), cfg.num_latent);
    std::vector<std::size_t> pool(d);
    for (int k = 0; k < cfg.num_latent; ++k) {
        std::iota(pool.begin(), pool.end(), 0);
        const auto kids = static_cast<std::size_t>(cfg.children_per_latent);
        partial_shuffle(pool, kids, rng);
        for (std::size_t c = 0; c < kids; ++c) {
            model.lambda(static_cast<Eigen::Index>(pool[c]), k) = random_weight(rng);
        }
    }
    model.causal_order = std::move(order);
    model.seed = cfg.seed;
    return model;
}

double cubed_gaussian(Rng& rng) {
    const double y = rng.normal(0.0, 0.5);
    return y * y * y;
}

Dataset sample_data(const GroundTruthModel& model, int num_samples, std::uint64_t seed) {
    if (num_samples < 1) throw InvalidArgument("sample_data: num_samples must be positive");
    Rng rng(seed);
    const Eigen::Index n = num_samples;
    const auto d = static_cast<Eigen::Index>(model.num_observed());
    const auto q = static_cast<Eigen::Index>(model.num_latent());

    Eigen::MatrixXd latent(n, q);
    Eigen::MatrixXd noise(n, d);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index k = 0; k < q; ++k) latent(r, k) = cubed_gaussian(rng);
        for (Eigen::Index i = 0; i < d; ++i) noise(r, i) = cubed_gaussian(rng);
    }
    Eigen::MatrixXd x = noise + latent * model.lambda.transpose();
    for (std::size_t v : model.causal_order) {
        const auto i = static_cast<Eigen::Index>(v);
        for (Eigen::Index j = 0; j < d; ++j) {
            if (model.b(i, j) != 0.0) x.col(i) += model.b(i, j) * x.col(j);
        }
    }
    return Dataset{default_names(d), std::move(x), false};
}

CausalGraph ground_truth_graph(const GroundTruthModel& model) {
    const std::size_t d = model.num_observed();
    CausalGraph g(d);
    for (Eigen::Index k = 0; k < model.lambda.cols(); ++k) {
        for (std::size_t i = 0; i < d; ++i) {
            if (model.lambda(static_cast<Eigen::Index>(i), k) == 0.0) continue;
            for (std::size_t j = i + 1; j < d; ++j) {
                if (model.lambda(static_cast<Eigen::Index>(j), k) != 0.0) {
                    g.confounded.set(i, j);
                    g.confounded.set(j, i);
                }
            }
        }
    }
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            if (model.b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) != 0.0 && !g.confounded(i, j)) {
                g.parents.set(i, j);
            }
        }
    }
    return g;
}

Eigen::MatrixXd analytic_covariance(const GroundTruthModel& model) {
    const auto d = static_cast<Eigen::Index>(model.num_observed());
    const Eigen::MatrixXd mix = (Eigen::MatrixXd::Identity(d, d) - model.b).inverse();
    const Eigen::MatrixXd inner =
        kCubedGaussianVariance * (model.lambda * model.lambda.transpose() + Eigen::MatrixXd::Identity(d, d));
    return mix * inner * mix.transpose();
}

}  // namespace rcd
