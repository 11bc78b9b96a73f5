#include "hurst/fbm.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <stdexcept>

#include "hurst/rng.hpp"

namespace hurst {

namespace {

constexpr std::uint64_t kNoiseSeedSalt = 0xA5C1E571D0B7ED5EULL;

// FFTW planning is not thread safe; execution on distinct arrays is. Plans are
// created once per size with FFTW_UNALIGNED so they can run on any buffer.
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

fftw_plan plan_for_size(std::size_t m) {
    static std::map<std::size_t, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(plan_mutex());
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    std::vector<std::complex<double>> in(m), out(m);
    fftw_plan p = fftw_plan_dft_1d(
        static_cast<int>(m),
        reinterpret_cast<fftw_complex*>(in.data()),
        reinterpret_cast<fftw_complex*>(out.data()),
        FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (p == nullptr) throw std::runtime_error("fftw plan creation failed");
    cache.emplace(m, p);
    return p;
}

void fft(std::vector<std::complex<double>>& in, std::vector<std::complex<double>>& out) {
    fftw_plan p = plan_for_size(in.size());
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace

double fgn_autocovariance(double hurst, std::uint64_t lag) {
    if (!(hurst > 0.0 && hurst < 1.0)) {
        throw std::domain_error("fgn_autocovariance: hurst must lie in (0,1)");
    }
    const double k = static_cast<double>(lag);
    const double e = 2.0 * hurst;
    return 0.5 * (std::pow(k + 1.0, e) - 2.0 * std::pow(k, e) +
                  std::pow(std::abs(k - 1.0), e));
}

FbmGenerator::FbmGenerator(std::size_t length, double hurst)
    : n_(length), hurst_(hurst) {
    if (!is_power_of_two(length) || length < 4) {
        throw std::invalid_argument("FbmGenerator: length must be a power of two >= 4");
    }
    if (!(hurst > 0.0 && hurst < 1.0)) {
        throw std::domain_error("FbmGenerator: hurst must lie in (0,1)");
    }
    const std::size_t m = 2 * (n_ - 1);
    std::vector<std::complex<double>> row(m), lambda(m);
    for (std::size_t k = 0; k < n_; ++k) {
        row[k] = fgn_autocovariance(hurst, k);
    }
    for (std::size_t k = 1; k + 1 < n_; ++k) {
        row[m - k] = row[k];
    }
    fft(row, lambda);
    double max_ev = 0.0, min_ev = 0.0;
    for (const auto& ev : lambda) {
        max_ev = std::max(max_ev, ev.real());
        min_ev = std::min(min_ev, ev.real());
    }
    if (min_ev < -1e-9 * max_ev) {
        throw std::runtime_error("FbmGenerator: circulant embedding not nonnegative definite");
    }
    weight_.resize(m);
    const double inv_m = 1.0 / static_cast<double>(m);
    for (std::size_t k = 0; k < m; ++k) {
        weight_[k] = std::sqrt(std::max(0.0, lambda[k].real()) * inv_m);
    }
}

Signal FbmGenerator::generate(std::uint64_t seed, double sigma_x) const {
    const std::size_t m = weight_.size();
    rng::Stream stream(seed);
    std::vector<std::complex<double>> v(m), g(m);

    double z0, z1;
    stream.next_normal_pair(z0, z1);
    v[0] = weight_[0] * z0;
    v[m / 2] = weight_[m / 2] * z1;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (std::size_t k = 1; k < m / 2; ++k) {
        stream.next_normal_pair(z0, z1);
        const std::complex<double> zk(z0 * inv_sqrt2, z1 * inv_sqrt2);
        v[k] = weight_[k] * zk;
        v[m - k] = weight_[m - k] * std::conj(zk);
    }
    fft(v, g);

    Signal out;
    out.spec = SignalSpec{n_, hurst_, sigma_x, 0.0, seed};
    out.samples.resize(n_);
    out.samples[0] = 0.0;
    for (std::size_t t = 1; t < n_; ++t) {
        out.samples[t] = out.samples[t - 1] + sigma_x * g[t - 1].real();
    }
    return out;
}

Signal generate_fbm(const SignalSpec& spec) {
    spec.validate();
    FbmGenerator gen(spec.length, spec.hurst);
    Signal s = gen.generate(spec.seed, spec.sigma_x);
    s.spec = spec;
    return s;
}

Signal add_noise(const Signal& signal, double sigma_eps, std::uint64_t seed) {
    if (sigma_eps < 0.0) {
        throw std::domain_error("add_noise: sigma_eps must be nonnegative");
    }
    if (sigma_eps == 0.0) {
        return signal;
    }
    rng::Stream stream(seed ^ kNoiseSeedSalt);
    Signal out = signal;
    for (double& v : out.samples) {
        v += sigma_eps * stream.next_normal();
    }
    return out;
}

Signal synthesize(const SignalSpec& spec) {
    Signal s = generate_fbm(spec);
    s = add_noise(s, spec.sigma_eps, spec.seed);
    s.spec = spec;
    return s;
}

}  // namespace hurst
