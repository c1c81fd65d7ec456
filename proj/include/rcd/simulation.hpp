#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "rcd/dataset.hpp"
#include "rcd/graph.hpp"

namespace rcd {

/// Name of the generator recorded alongside exported models.
inline constexpr std::string_view kRngAlgorithm = "mt19937_64+box-muller";

/// 64-bit Mersenne Twister with portable uniform/normal/index draws (no
/// dependence on implementation-defined std:: distributions).
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    double uniform();                         // [0, 1)
    double uniform(double lo, double hi);
    double normal(double mean, double stddev);
    std::size_t index(std::size_t bound);     // [0, bound)

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Mixes a seed into a decorrelated stream seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

struct SimConfig {
    int num_observed = 20;
    int num_latent = 4;
    int num_edges = 40;
    int children_per_latent = 2;
    int num_samples = 300;
    std::uint64_t seed = 0;

    void validate() const;
};

/// x = B x + Lambda f + e. b(i, j) is the effect of x_j on x_i; lambda(i, k)
/// the loading of latent f_k on x_i.
struct GroundTruthModel {
    Eigen::MatrixXd b;
    Eigen::MatrixXd lambda;
    std::vector<std::size_t> causal_order;
    std::uint64_t seed = 0;

    std::size_t num_observed() const { return static_cast<std::size_t>(b.rows()); }
    std::size_t num_latent() const { return static_cast<std::size_t>(lambda.cols()); }
};

/// Wraps explicit coefficient matrices; derives a causal order and throws
/// InvalidArgument if `b` is cyclic or shapes disagree.
GroundTruthModel make_model(Eigen::MatrixXd b, Eigen::MatrixXd lambda, std::uint64_t seed = 0);

/// Random DAG over a uniformly drawn causal order with num_edges distinct
/// order-consistent edges, plus latents each feeding children_per_latent
/// distinct observed variables. Weights are uniform on [-1,-0.5] u [0.5,1].
GroundTruthModel generate_model(const SimConfig& cfg);

/// Draws one sample of the cube of N(0, 0.5) (0.5 is the standard deviation).
double cubed_gaussian(Rng& rng);

/// Samples observed columns with all external effects and latents drawn as
/// cubed Gaussians. The result is not centered.
Dataset sample_data(const GroundTruthModel& model, int num_samples, std::uint64_t seed);

/// Confounded pairs share a latent with nonzero loadings on both; directed
/// arrows are nonzero b(i, j) on pairs that are not confounded.
CausalGraph ground_truth_graph(const GroundTruthModel& model);

/// (I - B)^-1 (var_f Lambda Lambda^T + var_e I) (I - B)^-T for the noise law
/// used by sample_data.
Eigen::MatrixXd analytic_covariance(const GroundTruthModel& model);

/// Variance of the cube of N(0, 0.5): 15 * 0.5^6.
inline constexpr double kCubedGaussianVariance = 15.0 * 0.015625;

}  // namespace rcd
