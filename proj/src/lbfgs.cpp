#include "rcd/lbfgs.hpp"

#include <cmath>
#include <deque>

namespace rcd {

LbfgsResult minimize_lbfgs(const Objective& objective, Eigen::VectorXd x0,
                           const LbfgsOptions& options) {
    LbfgsResult res;
    res.x = std::move(x0);
    res.gradient.resize(res.x.size());
    res.value = objective(res.x, res.gradient);
    res.history.push_back(res.value);

    std::deque<Eigen::VectorXd> s_hist;
    std::deque<Eigen::VectorXd> y_hist;
    std::deque<double> rho_hist;

    Eigen::VectorXd grad_new(res.x.size());
    for (int iter = 0; iter < options.max_iterations; ++iter) {
        if (res.gradient.lpNorm<Eigen::Infinity>() < options.gradient_tolerance) {
            res.converged = true;
            break;
        }

        // Two-loop recursion.
        Eigen::VectorXd q = res.gradient;
        std::vector<double> alpha(s_hist.size());
        for (std::size_t k = s_hist.size(); k-- > 0;) {
            alpha[k] = rho_hist[k] * s_hist[k].dot(q);
            q -= alpha[k] * y_hist[k];
        }
        if (!s_hist.empty()) {
            q *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
        } else {
            // First step: scale so the trial step has unit length.
            const double gn = res.gradient.norm();
            if (gn > 0.0) q /= gn;
        }
        for (std::size_t k = 0; k < s_hist.size(); ++k) {
            const double beta = rho_hist[k] * y_hist[k].dot(q);
            q += (alpha[k] - beta) * s_hist[k];
        }
        Eigen::VectorXd direction = -q;
        double slope = res.gradient.dot(direction);
        if (!(slope < 0.0)) {
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
            direction = -res.gradient;
            slope = -res.gradient.squaredNorm();
        }

        double step = 1.0;
        bool accepted = false;
        Eigen::VectorXd x_new;
        double f_new = 0.0;
        for (int bt = 0; bt < options.max_backtracks; ++bt) {
            x_new = res.x + step * direction;
            f_new = objective(x_new, grad_new);
            if (std::isfinite(f_new) && f_new <= res.value + options.armijo_c1 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;

        const Eigen::VectorXd s = x_new - res.x;
        const Eigen::VectorXd y = grad_new - res.gradient;
        const double prev = res.value;
        res.x = x_new;
        res.value = f_new;
        res.gradient = grad_new;
        res.history.push_back(f_new);
        res.iterations = iter + 1;

        const double sy = s.dot(y);
        if (sy > 1e-16 * s.norm() * y.norm()) {
            s_hist.push_back(s);
            y_hist.push_back(y);
            rho_hist.push_back(1.0 / sy);
            if (static_cast<int>(s_hist.size()) > options.memory) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
        }
        if (prev - f_new <= options.relative_decrease_tolerance * std::max(std::abs(prev), 1e-300)) {
            res.converged = true;
            break;
        }
    }
    if (!res.converged && res.gradient.lpNorm<Eigen::Infinity>() < options.gradient_tolerance) {
        res.converged = true;
    }
    return res;
}

}  // namespace rcd
