#pragma once

#include <vector>

#include <Eigen/Dense>

#include "rcd/lbfgs.hpp"
#include "rcd/stat_tests.hpp"

namespace rcd {

inline Samples as_samples(const Eigen::VectorXd& v) {
    return {v.data(), static_cast<std::size_t>(v.size())};
}

/// Linear fit of one response on a set of explanatory columns.
/// residuals = response - intercept - explanatory * coefficients.
struct RegressionFit {
    Eigen::VectorXd coefficients;
    double intercept = 0.0;
    Eigen::VectorXd residuals;
    /// Residual norm is negligible relative to the centered response.
    bool exact_fit = false;
    bool converged = true;
    int iterations = 0;
    /// Objective trace for iterative fits; empty for least squares.
    std::vector<double> objective_history;
};

/// Least squares with intercept. Columns of `explanatory` are regressors and
/// may be empty (zero columns), in which case the centered response is
/// returned. Rank-deficient designs get the minimum-norm solution.
RegressionFit ols_residuals(const Eigen::VectorXd& response, const Eigen::MatrixXd& explanatory);

/// Sum over regressors of the biased Gaussian-kernel HSIC between each
/// regressor and the residual response - explanatory * lambda, with kernel
/// bandwidths held fixed.
class HsicRegressionObjective {
public:
    HsicRegressionObjective(Eigen::VectorXd response, Eigen::MatrixXd explanatory,
                            const std::vector<double>& regressor_bandwidths, double residual_bandwidth);

    double value(const Eigen::VectorXd& lambda) const;
    double value_and_gradient(const Eigen::VectorXd& lambda, Eigen::VectorXd& grad) const;

    double residual_bandwidth() const { return residual_bandwidth_; }

private:
    Eigen::VectorXd response_;
    Eigen::MatrixXd explanatory_;
    Eigen::MatrixXd summed_centered_grams_;
    double residual_bandwidth_;
};

/// Builds the objective with bandwidths taken at the least-squares solution:
/// median heuristic on each regressor and on the least-squares residual.
HsicRegressionObjective make_hsic_regression_objective(const Eigen::VectorXd& response,
                                                       const Eigen::MatrixXd& explanatory);

/// Multilinear HSIC regression: coefficients minimizing the summed HSIC
/// between each regressor and the residual, found by L-BFGS started at the
/// least-squares coefficients. Non-convergence is reported through
/// `converged`, never thrown.
RegressionFit mlhsicr_residuals(const Eigen::VectorXd& response, const Eigen::MatrixXd& explanatory,
                                const LbfgsOptions& options = {});

}  // namespace rcd
