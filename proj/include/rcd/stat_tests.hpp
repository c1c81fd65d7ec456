#pragma once

#include <span>

#include <Eigen/Dense>

namespace rcd {

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

using Samples = std::span<const double>;

/// Pearson correlation with a two-sided p-value from the t distribution on
/// n - 2 degrees of freedom. Throws DegenerateInput if either input has zero
/// variance.
TestResult pearson_corr_pvalue(Samples x, Samples y);

/// Median of the strictly positive pairwise absolute differences.
/// Throws DegenerateInput if all samples are equal.
double median_bandwidth(Samples x);

/// Gaussian Gram matrix exp(-(x_a - x_b)^2 / (2 sigma^2)).
Eigen::MatrixXd gaussian_gram(Samples x, double sigma);

/// Returns H K H with H = I - 11^T / n, computed without forming H.
Eigen::MatrixXd double_center(const Eigen::MatrixXd& gram);

/// Biased empirical HSIC, (1/n^2) tr(K H L H), Gaussian kernels with
/// median-heuristic bandwidths chosen per input.
double hsic_statistic(Samples x, Samples y);

/// HSIC independence test. The statistic reported is n * HSIC_b; the p-value
/// comes from a gamma distribution whose mean and variance match the
/// closed-form permutation-null moments.
TestResult hsic_pvalue(Samples x, Samples y);

/// Same test on precomputed Gram matrices (uncentered).
TestResult hsic_gamma_test(const Eigen::MatrixXd& k, const Eigen::MatrixXd& l);

/// Shapiro-Wilk normality test (Royston's AS R94 approximation).
/// Valid for 3 <= n <= 5000; throws UnsupportedSampleSize otherwise.
TestResult shapiro_wilk_pvalue(Samples x);

}  // namespace rcd
