#include "hurst/special_functions.hpp"

#include <cmath>
#include <stdexcept>

namespace hurst {

// Both functions lift the argument above 8 by the standard recurrences and
// finish with the asymptotic Bernoulli expansion truncated at x^-14 (digamma)
// and x^-15 (trigamma). At x = 8 the first dropped term is below 4e-15.

double digamma(double x) {
    if (!(x > 0.0)) {
        throw std::domain_error("digamma: argument must be positive");
    }
    double acc = 0.0;
    while (x < 8.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    const double r2 = 1.0 / (x * x);
    const double tail = r2 * (1.0 / 12.0 +
                        r2 * (-1.0 / 120.0 +
                        r2 * (1.0 / 252.0 +
                        r2 * (-1.0 / 240.0 +
                        r2 * (1.0 / 132.0 +
                        r2 * (-691.0 / 32760.0 +
                        r2 * (1.0 / 12.0)))))));
    return acc + std::log(x) - 0.5 / x - tail;
}

double trigamma(double x) {
    if (!(x > 0.0)) {
        throw std::domain_error("trigamma: argument must be positive");
    }
    double acc = 0.0;
    while (x < 8.0) {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    const double r = 1.0 / x;
    const double r2 = r * r;
    const double tail = r2 * r * (1.0 / 6.0 +
                        r2 * (-1.0 / 30.0 +
                        r2 * (1.0 / 42.0 +
                        r2 * (-1.0 / 30.0 +
                        r2 * (5.0 / 66.0 +
                        r2 * (-691.0 / 2730.0 +
                        r2 * (7.0 / 6.0)))))));
    return acc + r + 0.5 * r2 + tail;
}

LogChiSquaredMoments log_chi2_moments(int dof) {
    if (dof < 1) {
        throw std::domain_error("log_chi2_moments: dof must be >= 1");
    }
    const double half = 0.5 * static_cast<double>(dof);
    return LogChiSquaredMoments{dof, std::log(2.0) + digamma(half), trigamma(half)};
}

}  // namespace hurst
