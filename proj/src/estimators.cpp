#include "hurst/estimators.hpp"

#include <cmath>
#include <stdexcept>

#include "hurst/special_functions.hpp"

namespace hurst {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

double scale_factor(int j1, int j2) {
    // 1 / (2 (j1 - j2) ln 2)^2
    const double d = 2.0 * static_cast<double>(j1 - j2) * kLn2;
    return 1.0 / (d * d);
}

PairEstimate invalid_pair(int j1, int j2, PairInvalidReason reason) {
    PairEstimate p;
    p.j1 = j1;
    p.j2 = j2;
    p.valid = false;
    p.reason = reason;
    return p;
}

void check_order(const LevelEnergy& e1, const LevelEnergy& e2) {
    if (e1.level >= e2.level) {
        throw std::domain_error("pair estimator requires j1 < j2");
    }
}

}  // namespace

NoiseEstimate estimate_noise_variance(const WaveletDecomposition& decomp) {
    const int finest = decomp.j_max;
    const std::vector<double>& d = decomp.detail(finest);
    if (d.size() < 2) {
        throw std::invalid_argument("estimate_noise_variance: finest level needs >= 2 coefficients");
    }
    double mean = 0.0;
    for (double v : d) mean += v;
    mean /= static_cast<double>(d.size());
    double ss = 0.0;
    for (double v : d) ss += (v - mean) * (v - mean);
    NoiseEstimate out;
    out.sigma_eps_sq = ss / static_cast<double>(d.size() - 1);
    out.source_level = finest;
    return out;
}

SpectrumFit spectrum_regression(std::span<const LevelEnergy> energies,
                                int j_min, int j_max) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int n = 0;
    for (const LevelEnergy& e : energies) {
        if (e.level < j_min || e.level > j_max || e.degenerate()) continue;
        const double x = static_cast<double>(e.level);
        sx += x;
        sy += e.log2_energy;
        sxx += x * x;
        sxy += x * e.log2_energy;
        ++n;
    }
    if (n < 3) {
        throw std::invalid_argument("spectrum_regression: needs >= 3 usable levels");
    }
    const double denom = n * sxx - sx * sx;
    const double slope = (n * sxy - sx * sy) / denom;
    SpectrumFit fit;
    fit.beta1 = -slope;
    fit.beta0 = (sy - slope * sx) / n;
    fit.h_hat = (fit.beta1 - 1.0) / 2.0;
    fit.j_min = j_min;
    fit.j_max = j_max;
    return fit;
}

std::string to_string(PairInvalidReason reason) {
    switch (reason) {
        case PairInvalidReason::none: return "";
        case PairInvalidReason::degenerate_energy: return "degenerate energy";
        case PairInvalidReason::noise_dominates_level: return "noise dominates level";
        case PairInvalidReason::insufficient_dof: return "insufficient dof";
        case PairInvalidReason::level_unavailable: return "level unavailable";
    }
    return "";
}

PairEstimate alphee_pair(const LevelEnergy& e1, const LevelEnergy& e2) {
    check_order(e1, e2);
    if (e1.degenerate() || e2.degenerate()) {
        return invalid_pair(e1.level, e2.level, PairInvalidReason::degenerate_energy);
    }
    const double n1 = static_cast<double>(e1.count);
    const double n2 = static_cast<double>(e2.count);
    const double dj = static_cast<double>(e1.level - e2.level);

    PairEstimate p;
    p.j1 = e1.level;
    p.j2 = e2.level;
    const double psi_term = (digamma(n1 / 2.0) - digamma(n2 / 2.0)) / kLn2;
    const double energy_term = (std::log(e1.mean_sq) - std::log(e2.mean_sq)) / kLn2;
    p.h_hat = (psi_term - energy_term) / (2.0 * dj) - 1.0;
    p.variance = (trigamma(n1 / 2.0) + trigamma(n2 / 2.0)) * scale_factor(e1.level, e2.level);
    p.valid = true;
    return p;
}

PairEstimate nc_alphee_pair(const LevelEnergy& e1, const LevelEnergy& e2,
                            const NoiseEstimate& noise) {
    check_order(e1, e2);
    if (e1.degenerate() || e2.degenerate()) {
        return invalid_pair(e1.level, e2.level, PairInvalidReason::degenerate_energy);
    }
    if (e1.count <= 4 || e2.count <= 4) {
        return invalid_pair(e1.level, e2.level, PairInvalidReason::insufficient_dof);
    }
    const double s2 = noise.sigma_eps_sq;
    const double dj = static_cast<double>(e1.level - e2.level);

    double corrected[2], exp_psi[2];
    const LevelEnergy* e[2] = {&e1, &e2};
    for (int i = 0; i < 2; ++i) {
        const double n = static_cast<double>(e[i]->count);
        exp_psi[i] = std::exp(digamma(n / 2.0));
        corrected[i] = n * e[i]->mean_sq - 2.0 * s2 * exp_psi[i];
        if (!(corrected[i] > 0.0)) {
            return invalid_pair(e1.level, e2.level, PairInvalidReason::noise_dominates_level);
        }
    }

    PairEstimate p;
    p.j1 = e1.level;
    p.j2 = e2.level;
    const double n1 = static_cast<double>(e1.count);
    const double n2 = static_cast<double>(e2.count);
    const double psi_term = (digamma(n1 / 2.0) - digamma(n2 / 2.0)) / kLn2;
    const double ratio_term = (std::log(corrected[0]) - std::log(corrected[1])) / kLn2;
    p.h_hat = (psi_term - ratio_term) / (2.0 * dj) - 0.5;

    double sum = 0.0;
    for (int i = 0; i < 2; ++i) {
        const double n = static_cast<double>(e[i]->count);
        const double sig_j = e[i]->mean_sq;  // sigma_{j_i}^2 plug-in
        double term = trigamma(n / 2.0);
        term += 8.0 * s2 * s2 * exp_psi[i] * exp_psi[i] /
                (sig_j * sig_j * (n - 2.0) * (n - 2.0) * (n - 4.0));
        term += 8.0 * s2 * exp_psi[i] / (sig_j * (n - 2.0) * n);
        sum += term;
    }
    p.variance = sum * scale_factor(e1.level, e2.level);
    p.valid = true;
    return p;
}

std::vector<PairEstimate> all_pair_estimates(
    std::span<const LevelEnergy> energies, int j_min, int j_max,
    PairMethod method, const std::optional<NoiseEstimate>& noise) {
    if (j_max - j_min < 1) {
        throw std::invalid_argument("all_pair_estimates: range holds no pair");
    }
    if (method == PairMethod::nc_alphee && !noise.has_value()) {
        throw std::invalid_argument("all_pair_estimates: nc_alphee requires a noise estimate");
    }
    std::vector<const LevelEnergy*> by_level(static_cast<std::size_t>(j_max - j_min + 1), nullptr);
    for (const LevelEnergy& e : energies) {
        if (e.level >= j_min && e.level <= j_max) {
            by_level[static_cast<std::size_t>(e.level - j_min)] = &e;
        }
    }
    std::vector<PairEstimate> out;
    out.reserve(static_cast<std::size_t>((j_max - j_min + 1) * (j_max - j_min)) / 2);
    for (int j1 = j_min; j1 < j_max; ++j1) {
        for (int j2 = j1 + 1; j2 <= j_max; ++j2) {
            const LevelEnergy* e1 = by_level[static_cast<std::size_t>(j1 - j_min)];
            const LevelEnergy* e2 = by_level[static_cast<std::size_t>(j2 - j_min)];
            if (e1 == nullptr || e2 == nullptr) {
                out.push_back(invalid_pair(j1, j2, PairInvalidReason::level_unavailable));
                continue;
            }
            out.push_back(method == PairMethod::alphee
                              ? alphee_pair(*e1, *e2)
                              : nc_alphee_pair(*e1, *e2, *noise));
        }
    }
    return out;
}

}  // namespace hurst
