#pragma once

namespace hurst {

// Mean and variance of W = ln(chi^2_dof) in natural-log units.
struct LogChiSquaredMoments {
    int dof;
    double mean;      // ln 2 + psi(dof/2)
    double variance;  // psi'(dof/2)
};

// Digamma psi(x), x > 0. Absolute error <= 1e-12 for x >= 0.5.
double digamma(double x);

// Trigamma psi'(x), x > 0. Absolute error <= 1e-12 for x >= 0.5.
double trigamma(double x);

LogChiSquaredMoments log_chi2_moments(int dof);

}  // namespace hurst
