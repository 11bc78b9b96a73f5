#pragma once

#include <cstdint>
#include <vector>

#include "hurst/signal.hpp"

namespace hurst {

// Autocovariance of unit-variance fractional Gaussian noise at integer lag:
// gamma(k) = 0.5 (|k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H}).
double fgn_autocovariance(double hurst, std::uint64_t lag);

// Exact fBm sampler by circulant embedding of the fGn covariance (FFT length
// 2(N-1)). Construction cost is one spectrum FFT; each path costs one complex
// FFT. Paths start at zero and have stationary Gaussian increments with the
// fgn_autocovariance law scaled by sigma_x^2.
class FbmGenerator {
public:
    FbmGenerator(std::size_t length, double hurst);

    std::size_t length() const { return n_; }
    double hurst() const { return hurst_; }

    Signal generate(std::uint64_t seed, double sigma_x = 1.0) const;

private:
    std::size_t n_;
    double hurst_;
    std::vector<double> weight_;  // sqrt(lambda_k / M)
};

Signal generate_fbm(const SignalSpec& spec);

// Adds iid N(0, sigma_eps^2) drawn from a stream derived from seed by a fixed
// XOR salt, so fBm and noise streams never collide. sigma_eps = 0 returns the
// input unchanged.
Signal add_noise(const Signal& signal, double sigma_eps, std::uint64_t seed);

// Convenience: generate_fbm followed by add_noise(spec.sigma_eps, spec.seed).
Signal synthesize(const SignalSpec& spec);

}  // namespace hurst
