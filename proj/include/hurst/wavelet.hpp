#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hurst/signal.hpp"

namespace hurst {

struct WaveletFilter {
    std::string name;
    std::vector<double> lowpass;   // h, sums to sqrt(2)
    std::vector<double> highpass;  // g_i = (-1)^i h_{L-1-i}
    int vanishing_moments = 0;
};

// Known names: haar, db2..db10 (even lengths), sym4..sym10 (even lengths).
// The number is the filter length; vanishing moments = length/2. Coefficients
// are the standard published tables, revalidated against the orthonormality,
// QMF and moment invariants on every construction.
WaveletFilter make_filter(std::string_view name);

// M > H + 1/2 is required for coefficient decorrelation; haar (M = 1) fails
// this for every H >= 1/2 and should not be used for estimation.
bool decorrelation_ok(const WaveletFilter& f, double hurst);

struct WaveletDecomposition {
    int j0 = 0;     // coarsest retained level, approx has 2^j0 entries
    int j_max = 0;  // finest detail level J-1
    std::vector<double> approx;
    std::vector<std::vector<double>> details;  // details[j - j0], 2^j entries each

    const std::vector<double>& detail(int level) const;
    std::size_t signal_length() const;  // 2^{j_max + 1}
};

struct LevelEnergy {
    int level = 0;
    std::size_t count = 0;       // n_j = 2^j
    double mean_sq = 0.0;        // average squared detail coefficient
    double log2_energy = 0.0;    // log2(mean_sq); -inf when degenerate

    bool degenerate() const { return !(mean_sq > 0.0); }
};

// Periodic-boundary Mallat pyramid; equivalent to multiplying by an
// orthogonal N x N matrix. Levels follow the convention that level j holds
// 2^j coefficients, larger j = finer scale.
WaveletDecomposition dwt(const Signal& signal, const WaveletFilter& filter, int j0);

Signal idwt(const WaveletDecomposition& decomp, const WaveletFilter& filter);

std::vector<LevelEnergy> level_energies(const WaveletDecomposition& decomp,
                                        int j_min, int j_max);

// Binary container (magic "HURSTDWT", uint64 j0, uint64 j_max, blocks of
// little-endian float64) and the (level, count, mean_sq, log2_energy) CSV.
void write_decomposition_binary(const WaveletDecomposition& d, const std::string& path);
WaveletDecomposition read_decomposition_binary(const std::string& path);
void write_energies_csv(const std::vector<LevelEnergy>& energies, const std::string& path);

}  // namespace hurst
