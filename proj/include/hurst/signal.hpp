#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hurst {

struct SignalSpec {
    std::size_t length = 0;     // N, must be a power of two
    double hurst = 0.5;         // H in (0,1)
    double sigma_x = 1.0;       // fBm scale
    double sigma_eps = 0.0;     // additive noise sd
    std::uint64_t seed = 0;

    void validate() const;
};

struct Signal {
    std::vector<double> samples;
    std::optional<SignalSpec> spec;

    std::size_t size() const { return samples.size(); }
};

bool is_power_of_two(std::size_t n);
int log2_exact(std::size_t n);  // throws if n is not a power of two

// One-column CSV with header "value".
void write_signal_csv(const Signal& s, const std::string& path);
Signal read_signal_csv(const std::string& path);

// Little-endian binary container: 8-byte magic "HURSTSIG", uint64 N, N float64.
void write_signal_binary(const Signal& s, const std::string& path);
Signal read_signal_binary(const std::string& path);

// Subtract the line through (0, x_0) and (N-1, x_{N-1}). Interior wavelet
// coefficients of filters with >= 2 vanishing moments are unchanged; the
// circular wrap step of a nonstationary path is removed. The estimation
// pipeline applies this before decomposition.
Signal remove_bridge(const Signal& s);

}  // namespace hurst
