#include <doctest.h>

#include <cmath>

#include "../support/oracles.hpp"
#include "rcd/errors.hpp"
#include "rcd/lbfgs.hpp"
#include "rcd/regression.hpp"
#include "rcd/simulation.hpp"

using namespace rcd;

namespace {

Eigen::MatrixXd random_matrix(Rng& rng, int rows, int cols, bool cubed = false) {
    Eigen::MatrixXd m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m(r, c) = cubed ? cubed_gaussian(rng) : rng.normal(0.0, 1.0);
    return m;
}

Eigen::VectorXd central_difference(const HsicRegressionObjective& f, const Eigen::VectorXd& at, double h) {
    Eigen::VectorXd g(at.size());
    for (Eigen::Index k = 0; k < at.size(); ++k) {
        Eigen::VectorXd up = at, down = at;
        up[k] += h;
        down[k] -= h;
        g[k] = (f.value(up) - f.value(down)) / (2 * h);
    }
    return g;
}

}  // namespace

TEST_CASE("lbfgs: minimizes the Rosenbrock function") {
    const Objective rosen = [](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
        const double a = 1 - x[0], b = x[1] - x[0] * x[0];
        g.resize(2);
        g[0] = -2 * a - 400 * x[0] * b;
        g[1] = 200 * b;
        return a * a + 100 * b * b;
    };
    LbfgsOptions opts;
    opts.max_iterations = 500;
    opts.relative_decrease_tolerance = 0.0;
    const auto res = minimize_lbfgs(rosen, Eigen::Vector2d(-1.2, 1.0), opts);
    CHECK(res.converged);
    CHECK(res.x[0] == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(res.x[1] == doctest::Approx(1.0).epsilon(1e-4));
    for (std::size_t k = 1; k < res.history.size(); ++k) CHECK(res.history[k] <= res.history[k - 1]);
}

TEST_CASE("lbfgs: reports non-convergence without throwing") {
    const Objective quad = [](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
        g = 2 * x;
        g[1] *= 1e4;
        return x[0] * x[0] + 1e4 * x[1] * x[1];
    };
    LbfgsOptions opts;
    opts.max_iterations = 1;
    const auto res = minimize_lbfgs(quad, Eigen::Vector2d(3.0, 1.0), opts);
    CHECK_FALSE(res.converged);
    CHECK(res.value < 3.0 * 3.0 + 1e4);
}

TEST_CASE("ols: response on itself") {
    Rng rng(1);
    const Eigen::VectorXd y = random_matrix(rng, 40, 1).col(0);
    const auto fit = ols_residuals(y, y);
    CHECK(fit.coefficients[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.residuals.lpNorm<Eigen::Infinity>() < 1e-10);
    CHECK(fit.exact_fit);
}

TEST_CASE("ols: empty explanatory set centers the response") {
    const Eigen::Vector3d y(1, 2, 3);
    const auto fit = ols_residuals(y, Eigen::MatrixXd(3, 0));
    CHECK(fit.coefficients.size() == 0);
    CHECK(fit.residuals[0] == doctest::Approx(-1.0));
    CHECK(fit.residuals[1] == doctest::Approx(0.0));
    CHECK(fit.residuals[2] == doctest::Approx(1.0));
}

TEST_CASE("ols: matches the normal equations and leaves orthogonal residuals") {
    Rng rng(2);
    for (int rep = 0; rep < 20; ++rep) {
        const Eigen::MatrixXd x = random_matrix(rng, 50, 3);
        const Eigen::Vector3d truth(0.7, -1.3, 2.0);
        const Eigen::VectorXd y = x * truth + 0.3 * random_matrix(rng, 50, 1).col(0);
        const auto fit = ols_residuals(y, x);
        const Eigen::VectorXd ref = oracle::normal_equations(y, x);
        CHECK((fit.coefficients - ref).lpNorm<Eigen::Infinity>() < 1e-8);
        const Eigen::VectorXd rebuilt = y.array() - fit.intercept - (x * fit.coefficients).array();
        CHECK((rebuilt - fit.residuals).lpNorm<Eigen::Infinity>() < 1e-10);
        for (int c = 0; c < 3; ++c) {
            const Eigen::VectorXd col = x.col(c);
            CHECK(std::abs(col.normalized().dot(fit.residuals.normalized())) < 1e-8);
        }
        CHECK(std::abs(fit.residuals.mean()) < 1e-12);
    }
}

TEST_CASE("ols: rank deficiency gives the minimum-norm solution") {
    Rng rng(3);
    Eigen::MatrixXd x(30, 2);
    x.col(0) = random_matrix(rng, 30, 1).col(0);
    x.col(1) = x.col(0);
    const Eigen::VectorXd y = 2.0 * x.col(0);
    const auto fit = ols_residuals(y, x);
    CHECK(fit.coefficients[0] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(fit.coefficients[1] == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("ols: shape errors") {
    CHECK_THROWS_AS(ols_residuals(Eigen::VectorXd::Ones(5), Eigen::MatrixXd::Ones(4, 1)), InvalidArgument);
    CHECK_THROWS_AS(ols_residuals(Eigen::VectorXd::Ones(3), Eigen::MatrixXd::Ones(3, 3)), InvalidArgument);
    CHECK_THROWS_AS(mlhsicr_residuals(Eigen::VectorXd::Ones(5), Eigen::MatrixXd(5, 0)), InvalidArgument);
}

TEST_CASE("mlhsicr: noiseless single regressor") {
    Rng rng(4);
    const Eigen::VectorXd x = random_matrix(rng, 100, 1, true).col(0);
    const auto fit = mlhsicr_residuals(2.0 * x, x);
    CHECK(fit.coefficients[0] == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("mlhsicr: agrees with OLS under independent noise") {
    Rng rng(5);
    const Eigen::VectorXd x = random_matrix(rng, 500, 1, true).col(0);
    const Eigen::VectorXd y = 0.9 * x + random_matrix(rng, 500, 1, true).col(0);
    const auto ols = ols_residuals(y, x);
    const auto fit = mlhsicr_residuals(y, x);
    CHECK(std::abs(fit.coefficients[0] - ols.coefficients[0]) < 0.05);
}

TEST_CASE("mlhsicr: beats OLS on confounded regressors") {
    // Two regressors sharing a latent cause, both feeding the response.
    Rng rng(6);
    const int n = 1000;
    Eigen::MatrixXd x(n, 2);
    Eigen::VectorXd y(n);
    for (int r = 0; r < n; ++r) {
        const double f = cubed_gaussian(rng);
        x(r, 0) = 0.8 * f + cubed_gaussian(rng);
        x(r, 1) = 0.8 * f + cubed_gaussian(rng);
        y[r] = 0.8 * x(r, 0) + 0.8 * x(r, 1) + cubed_gaussian(rng);
    }
    const HsicRegressionObjective objective = make_hsic_regression_objective(y, x);
    const auto ols = ols_residuals(y, x);
    const auto fit = mlhsicr_residuals(y, x);
    CHECK(objective.value(fit.coefficients) < objective.value(ols.coefficients));
    CHECK(fit.objective_history.front() == doctest::Approx(objective.value(ols.coefficients)).epsilon(1e-12));
    for (std::size_t k = 1; k < fit.objective_history.size(); ++k) {
        CHECK(fit.objective_history[k] <= fit.objective_history[k - 1]);
    }
    const Eigen::VectorXd rebuilt = y.array() - fit.intercept - (x * fit.coefficients).array();
    CHECK((rebuilt - fit.residuals).lpNorm<Eigen::Infinity>() < 1e-10);
}

TEST_CASE("mlhsicr: analytic gradient matches central differences") {
    Rng rng(7);
    for (int rep = 0; rep < 5; ++rep) {
        const int m = 1 + rep % 3;
        const Eigen::MatrixXd x = random_matrix(rng, 80, m, true);
        const Eigen::VectorXd y = x.rowwise().sum() + random_matrix(rng, 80, 1, true).col(0);
        const HsicRegressionObjective f = make_hsic_regression_objective(y, x);
        Eigen::VectorXd at = Eigen::VectorXd::Constant(m, 0.6) + 0.1 * random_matrix(rng, m, 1).col(0);
        Eigen::VectorXd grad(m);
        f.value_and_gradient(at, grad);
        const Eigen::VectorXd fd = central_difference(f, at, 1e-5);
        CHECK((grad - fd).norm() <= 1e-3 * std::max(fd.norm(), 1e-8));
    }
}
