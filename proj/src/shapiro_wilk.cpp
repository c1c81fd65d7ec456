// Shapiro-Wilk W test following Royston (1995), Algorithm AS R94.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "rcd/errors.hpp"
#include "rcd/stat_tests.hpp"

namespace rcd {
namespace {

template <std::size_t N>
double poly(const std::array<double, N>& c, double x) {
    double acc = 0.0;
    for (std::size_t k = N; k-- > 0;) acc = acc * x + c[k];
    return acc;
}

constexpr std::array<double, 2> kSmallGamma{-2.273, 0.459};
constexpr std::array<double, 6> kC1{0.0, 0.221157, -0.147981, -2.07119, 4.434685, -2.706056};
constexpr std::array<double, 6> kC2{0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
constexpr std::array<double, 4> kC3{0.544, -0.39978, 0.025054, -6.714e-4};
constexpr std::array<double, 4> kC4{1.3822, -0.77857, 0.062767, -0.0020322};
constexpr std::array<double, 4> kC5{-1.5861, -0.31082, -0.083751, 0.0038915};
constexpr std::array<double, 3> kC6{-0.4803, -0.082676, 0.0030302};

// Coefficients a_1..a_{n/2} for the upper half of the order statistics.
std::vector<double> sw_coefficients(std::size_t n) {
    const std::size_t half = n / 2;
    std::vector<double> a(half);
    if (n == 3) {
        a[0] = std::sqrt(0.5);
        return a;
    }
    const boost::math::normal std_normal;
    const double an = static_cast<double>(n);
    std::vector<double> m(half);
    double summ2 = 0.0;
    for (std::size_t i = 0; i < half; ++i) {
        m[i] = boost::math::quantile(std_normal, (static_cast<double>(i + 1) - 0.375) / (an + 0.25));
        summ2 += m[i] * m[i];
    }
    summ2 *= 2.0;
    const double ssumm2 = std::sqrt(summ2);
    const double rsn = 1.0 / std::sqrt(an);
    const double a1 = poly(kC1, rsn) - m[0] / ssumm2;

    std::size_t first_scaled = 1;
    double fac = 0.0;
    if (n > 5) {
        first_scaled = 2;
        const double a2 = -m[1] / ssumm2 + poly(kC2, rsn);
        fac = std::sqrt((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) /
                        (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
        a[1] = a2;
    } else {
        fac = std::sqrt((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1));
    }
    a[0] = a1;
    for (std::size_t i = first_scaled; i < half; ++i) a[i] = -m[i] / fac;
    return a;
}

}  // namespace

TestResult shapiro_wilk_pvalue(Samples x) {
    const std::size_t n = x.size();
    if (n < 3 || n > 5000) {
        throw UnsupportedSampleSize("shapiro_wilk_pvalue: sample size " + std::to_string(n) +
                                    " outside [3, 5000]");
    }
    std::vector<double> sorted(x.begin(), x.end());
    std::sort(sorted.begin(), sorted.end());
    const double range = sorted.back() - sorted.front();
    const double scale = std::max(std::abs(sorted.front()), std::abs(sorted.back()));
    if (!(range > 1e-14 * scale) || range < 1e-19) {
        throw DegenerateInput("shapiro_wilk_pvalue: all samples are equal");
    }

    const std::vector<double> a = sw_coefficients(n);
    // Work on range-scaled values as the reference algorithm does.
    double mean = 0.0;
    for (double& v : sorted) {
        v /= range;
        mean += v;
    }
    mean /= static_cast<double>(n);
    double ssq = 0.0;
    for (double v : sorted) ssq += (v - mean) * (v - mean);
    double numer = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) numer += a[i] * (sorted[n - 1 - i] - sorted[i]);
    double w = std::min(1.0, numer * numer / ssq);
    const double w1 = 1.0 - w;

    if (n == 3) {
        constexpr double pi6 = 6.0 / std::numbers::pi;
        constexpr double stqr = std::numbers::pi / 3.0;
        w = std::max(w, 0.75);
        const double p = std::max(0.0, pi6 * (std::asin(std::sqrt(w)) - stqr));
        return {w, std::min(p, 1.0)};
    }
    if (w1 <= 0.0) return {w, 1.0};

    const double an = static_cast<double>(n);
    double y = std::log(w1);
    double mu = 0.0;
    double sigma = 0.0;
    if (n <= 11) {
        const double gamma = poly(kSmallGamma, an);
        if (y >= gamma) return {w, 1e-99};
        y = -std::log(gamma - y);
        mu = poly(kC3, an);
        sigma = std::exp(poly(kC4, an));
    } else {
        const double xx = std::log(an);
        mu = poly(kC5, xx);
        sigma = std::exp(poly(kC6, xx));
    }
    const boost::math::normal dist(mu, sigma);
    const double p = boost::math::cdf(boost::math::complement(dist, y));
    return {w, std::clamp(p, 0.0, 1.0)};
}

}  // namespace rcd
