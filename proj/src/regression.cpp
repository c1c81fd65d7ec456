#include "rcd/regression.hpp"

#include <cmath>
#include <string>

#include "rcd/errors.hpp"

namespace rcd {
namespace {

constexpr double kExactFitTolerance = 1e-10;

void check_shapes(const Eigen::VectorXd& response, const Eigen::MatrixXd& explanatory) {
    if (explanatory.cols() > 0 && explanatory.rows() != response.size()) {
        throw InvalidArgument("regression: explanatory rows (" + std::to_string(explanatory.rows()) +
                              ") differ from response length (" + std::to_string(response.size()) + ")");
    }
    if (explanatory.cols() >= response.size()) {
        throw InvalidArgument("regression: explanatory count must be below sample count");
    }
}

}  // namespace

RegressionFit ols_residuals(const Eigen::VectorXd& response, const Eigen::MatrixXd& explanatory) {
    check_shapes(response, explanatory);
    RegressionFit fit;
    const double y_mean = response.mean();
    const Eigen::VectorXd yc = response.array() - y_mean;
    if (explanatory.cols() == 0) {
        fit.coefficients.resize(0);
        fit.intercept = y_mean;
        fit.residuals = yc;
    } else {
        const Eigen::RowVectorXd x_means = explanatory.colwise().mean();
        const Eigen::MatrixXd xc = explanatory.rowwise() - x_means;
        fit.coefficients = xc.completeOrthogonalDecomposition().solve(yc);
        fit.intercept = y_mean - x_means.dot(fit.coefficients);
        fit.residuals = yc - xc * fit.coefficients;
    }
    fit.exact_fit = fit.residuals.norm() <= kExactFitTolerance * yc.norm();
    return fit;
}

HsicRegressionObjective::HsicRegressionObjective(Eigen::VectorXd response, Eigen::MatrixXd explanatory,
                                                 const std::vector<double>& regressor_bandwidths,
                                                 double residual_bandwidth)
    : response_(std::move(response)),
      explanatory_(std::move(explanatory)),
      residual_bandwidth_(residual_bandwidth) {
    if (static_cast<Eigen::Index>(regressor_bandwidths.size()) != explanatory_.cols()) {
        throw InvalidArgument("HsicRegressionObjective: one bandwidth per regressor required");
    }
    const Eigen::Index n = response_.size();
    summed_centered_grams_ = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index k = 0; k < explanatory_.cols(); ++k) {
        const Eigen::VectorXd col = explanatory_.col(k);
        summed_centered_grams_ += double_center(gaussian_gram(as_samples(col), regressor_bandwidths[k]));
    }
}

double HsicRegressionObjective::value(const Eigen::VectorXd& lambda) const {
    Eigen::VectorXd unused(lambda.size());
    return value_and_gradient(lambda, unused);
}

double HsicRegressionObjective::value_and_gradient(const Eigen::VectorXd& lambda,
                                                   Eigen::VectorXd& grad) const {
    const Eigen::Index n = response_.size();
    const Eigen::Index m = explanatory_.cols();
    const Eigen::VectorXd r = response_ - explanatory_ * lambda;
    const double inv_s2 = 1.0 / (residual_bandwidth_ * residual_bandwidth_);
    const auto& s = summed_centered_grams_;

    // Row-major copy of regressors so the inner loop reads contiguous memory.
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> xr = explanatory_;

    double total = s.diagonal().sum();
    grad.setZero(m);
    Eigen::VectorXd diff(m);
    for (Eigen::Index b = 0; b < n; ++b) {
        for (Eigen::Index a = b + 1; a < n; ++a) {
            const double d = r[a] - r[b];
            const double l = std::exp(-0.5 * inv_s2 * d * d);
            const double w = s(a, b) * l;
            total += 2.0 * w;
            const double coef = 2.0 * w * d * inv_s2;
            for (Eigen::Index k = 0; k < m; ++k) grad[k] += coef * (xr(a, k) - xr(b, k));
        }
    }
    const double nn = static_cast<double>(n) * static_cast<double>(n);
    grad /= nn;
    return total / nn;
}

namespace {

HsicRegressionObjective objective_at(const Eigen::VectorXd& response, const Eigen::MatrixXd& explanatory,
                                     const RegressionFit& init) {
    std::vector<double> widths;
    for (Eigen::Index k = 0; k < explanatory.cols(); ++k) {
        const Eigen::VectorXd col = explanatory.col(k);
        widths.push_back(median_bandwidth(as_samples(col)));
    }
    return HsicRegressionObjective(response, explanatory, widths, median_bandwidth(as_samples(init.residuals)));
}

}  // namespace

HsicRegressionObjective make_hsic_regression_objective(const Eigen::VectorXd& response,
                                                       const Eigen::MatrixXd& explanatory) {
    return objective_at(response, explanatory, ols_residuals(response, explanatory));
}

RegressionFit mlhsicr_residuals(const Eigen::VectorXd& response, const Eigen::MatrixXd& explanatory,
                                const LbfgsOptions& options) {
    check_shapes(response, explanatory);
    if (explanatory.cols() < 1) throw InvalidArgument("mlhsicr_residuals: at least one regressor required");

    RegressionFit init = ols_residuals(response, explanatory);
    if (init.exact_fit) return init;

    const HsicRegressionObjective objective = objective_at(response, explanatory, init);
    const LbfgsResult opt = minimize_lbfgs(
        [&](const Eigen::VectorXd& lambda, Eigen::VectorXd& grad) {
            return objective.value_and_gradient(lambda, grad);
        },
        init.coefficients, options);

    RegressionFit fit;
    fit.coefficients = opt.x;
    const Eigen::VectorXd raw = response - explanatory * opt.x;
    fit.intercept = raw.mean();
    fit.residuals = raw.array() - fit.intercept;
    fit.exact_fit = fit.residuals.norm() <= kExactFitTolerance * (response.array() - response.mean()).matrix().norm();
    fit.converged = opt.converged;
    fit.iterations = opt.iterations;
    fit.objective_history = opt.history;
    return fit;
}

}  // namespace rcd
