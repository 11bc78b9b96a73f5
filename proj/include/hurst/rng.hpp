#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace hurst::rng {

// splitmix64 step; the workhorse behind seed mixing and the Stream below.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Order-sensitive mix of several 64-bit fields into one seed. Used to derive
// per-replicate streams from (base_seed, indices...) so that adding grid cells
// never reshuffles existing streams.
inline std::uint64_t mix(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t s = 0x8C8F1D9B3779F4A7ULL;
    for (std::uint64_t p : parts) {
        s ^= p + 0x9E3779B97F4A7C15ULL + (s << 6) + (s >> 2);
        (void)splitmix64(s);
    }
    return splitmix64(s);
}

// Counter-based deterministic stream. Gaussians via Box-Muller on 53-bit
// uniforms, so output is identical across platforms with IEEE doubles and
// does not depend on any library distribution implementation.
class Stream {
public:
    explicit Stream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() { return splitmix64(state_); }

    // uniform on (0, 1]; never returns 0, safe for log()
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    void next_normal_pair(double& z0, double& z1) {
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        z0 = r * std::cos(a);
        z1 = r * std::sin(a);
    }

    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double z0, z1;
        next_normal_pair(z0, z1);
        spare_ = z1;
        have_spare_ = true;
        return z0;
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace hurst::rng
