#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hurst/wavelet.hpp"

namespace hurst {

struct NoiseEstimate {
    double sigma_eps_sq = 0.0;
    int source_level = 0;  // the finest level J-1
};

// Sample variance (mean-centered, divisor n-1) of the finest-level detail
// coefficients.
NoiseEstimate estimate_noise_variance(const WaveletDecomposition& decomp);

struct SpectrumFit {
    double beta0 = 0.0;
    double beta1 = 0.0;  // S(j) = beta0 - j * beta1
    double h_hat = 0.0;  // (beta1 - 1) / 2
    int j_min = 0;
    int j_max = 0;
};

// OLS of S(j) on j over [j_min, j_max]; needs >= 3 non-degenerate levels.
SpectrumFit spectrum_regression(std::span<const LevelEnergy> energies,
                                int j_min, int j_max);

enum class PairInvalidReason {
    none,
    degenerate_energy,      // mean_sq = 0 at one of the levels
    noise_dominates_level,  // bias-corrected energy A_i <= 0
    insufficient_dof,       // n_j <= 4, variance formula undefined
    level_unavailable,      // level absent from the supplied energies
};

std::string to_string(PairInvalidReason reason);

struct PairEstimate {
    int j1 = 0;
    int j2 = 0;
    std::optional<double> h_hat;
    std::optional<double> variance;
    bool valid = false;
    PairInvalidReason reason = PairInvalidReason::none;
};

// ALPHEE: digamma-corrected log-energy difference of two levels; the
// noise-free special case of nc_alphee_pair.
PairEstimate alphee_pair(const LevelEnergy& e1, const LevelEnergy& e2);

// NC-ALPHEE: subtracts the noise contribution 2 sigma_eps^2 e^{psi(n/2)} from
// each level's scaled energy before the log ratio; closed-form variance uses
// the first-order expansion with sigma_j^2 plugged in as the level mean
// square.
PairEstimate nc_alphee_pair(const LevelEnergy& e1, const LevelEnergy& e2,
                            const NoiseEstimate& noise);

enum class PairMethod { alphee, nc_alphee };

// One PairEstimate per unordered pair j1 < j2 in [j_min, j_max], emitted in
// lexicographic (j1, j2) order. Pairs whose levels are missing, degenerate, or
// rejected by the estimator appear with valid = false.
std::vector<PairEstimate> all_pair_estimates(
    std::span<const LevelEnergy> energies, int j_min, int j_max,
    PairMethod method, const std::optional<NoiseEstimate>& noise = std::nullopt);

}  // namespace hurst
