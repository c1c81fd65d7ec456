#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace rcd {

struct LbfgsOptions {
    int memory = 10;
    int max_iterations = 200;
    double gradient_tolerance = 1e-6;          // infinity norm
    double relative_decrease_tolerance = 1e-10;
    double armijo_c1 = 1e-4;
    int max_backtracks = 50;
};

struct LbfgsResult {
    Eigen::VectorXd x;
    double value = 0.0;
    Eigen::VectorXd gradient;
    int iterations = 0;
    bool converged = false;
    /// Objective value at the start point and after every accepted step.
    std::vector<double> history;
};

/// Objective callback: returns f(x) and writes the gradient into `grad`.
using Objective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd& grad)>;

/// Limited-memory BFGS with a backtracking line search enforcing sufficient
/// decrease, so the recorded history is non-increasing.
LbfgsResult minimize_lbfgs(const Objective& objective, Eigen::VectorXd x0,
                           const LbfgsOptions& options = {});

}  // namespace rcd
