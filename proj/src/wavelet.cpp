#include "hurst/wavelet.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>

namespace hurst {

namespace {

// Orthonormal lowpass tables, h_0 first. Daubechies extremal-phase and
// least-asymmetric (symmlet) families, named by filter length.
const std::map<std::string, std::vector<double>, std::less<>> kLowpass = {
    {"haar", {0.70710678118654752, 0.70710678118654752}},
    {"db2", {0.70710678118654752, 0.70710678118654752}},
    {"db4",
     {-0.12940952255126038, 0.22414386804201338, 0.83651630373780791,
      0.48296291314453414}},
    {"db6",
     {0.035226291885709537, -0.085441273882026662, -0.13501102001025459,
      0.45987750211849157, 0.80689150931109258, 0.33267055295008262}},
    {"db8",
     {-0.010597401785069032, 0.032883011666885200, 0.030841381835560764,
      -0.18703481171909308, -0.027983769416859854, 0.63088076792985891,
      0.71484657055291565, 0.23037781330889650}},
    {"db10",
     {0.0033357252854737713, -0.012580751999082000, -0.0062414902127982743,
      0.077571493840045714, -0.032244869584638375, -0.24229488706638203,
      0.13842814590132073, 0.72430852843777293, 0.60382926979718967,
      0.16010239797419291}},
    {"sym4",
     {0.48296291314453414, 0.83651630373780791, 0.22414386804201338,
      -0.12940952255126038}},
    {"sym6",
     {0.035226291885709537, -0.085441273882026662, -0.13501102001025459,
      0.45987750211849157, 0.80689150931109258, 0.33267055295008262}},
    {"sym8",
     {-0.075765714789502213, -0.029635527646002492, 0.49761866763277499,
      0.80373875180513208, 0.29785779560530605, -0.099219543576633533,
      -0.012603967262031304, 0.032223100604051468}},
    {"sym10",
     {0.027333068344998769, 0.029519490925706261, -0.039134249302313844,
      0.19939753397685560, 0.72340769040404079, 0.63397896345679206,
      0.016602105764510848, -0.17532808990805622, -0.021101834024689041,
      0.019538882735249827}},
};

void validate_filter(const WaveletFilter& f) {
    const std::size_t len = f.lowpass.size();
    if (len == 0 || len % 2 != 0 || f.highpass.size() != len) {
        throw std::runtime_error("wavelet filter table is malformed: " + f.name);
    }
    double sum = 0.0, sumsq = 0.0;
    for (double h : f.lowpass) {
        sum += h;
        sumsq += h * h;
    }
    if (std::abs(sum - std::sqrt(2.0)) > 1e-12 || std::abs(sumsq - 1.0) > 1e-12) {
        throw std::runtime_error("wavelet filter fails orthonormality: " + f.name);
    }
    for (std::size_t shift = 2; shift < len; shift += 2) {
        double dot = 0.0;
        for (std::size_t i = 0; i + shift < len; ++i) {
            dot += f.lowpass[i] * f.lowpass[i + shift];
        }
        if (std::abs(dot) > 1e-12) {
            throw std::runtime_error("wavelet filter fails even-shift orthogonality: " + f.name);
        }
    }
    for (int m = 0; m < f.vanishing_moments; ++m) {
        double mom = 0.0;
        for (std::size_t i = 0; i < len; ++i) {
            mom += std::pow(static_cast<double>(i), m) * f.highpass[i];
        }
        if (std::abs(mom) > 1e-8) {
            throw std::runtime_error("wavelet filter fails moment condition: " + f.name);
        }
    }
}

int pyramid_depth(const WaveletDecomposition& d) {
    return d.j_max + 1 - d.j0;
}

}  // namespace

WaveletFilter make_filter(std::string_view name) {
    auto it = kLowpass.find(name);
    if (it == kLowpass.end()) {
        throw std::out_of_range("unknown wavelet filter: " + std::string(name));
    }
    WaveletFilter f;
    f.name = std::string(name);
    f.lowpass = it->second;
    const std::size_t len = f.lowpass.size();
    f.highpass.resize(len);
    for (std::size_t i = 0; i < len; ++i) {
        f.highpass[i] = (i % 2 == 0 ? 1.0 : -1.0) * f.lowpass[len - 1 - i];
    }
    f.vanishing_moments = static_cast<int>(len / 2);
    validate_filter(f);
    return f;
}

bool decorrelation_ok(const WaveletFilter& f, double hurst) {
    return f.vanishing_moments > hurst + 0.5;
}

const std::vector<double>& WaveletDecomposition::detail(int level) const {
    if (level < j0 || level > j_max) {
        throw std::out_of_range("detail level out of range");
    }
    return details[static_cast<std::size_t>(level - j0)];
}

std::size_t WaveletDecomposition::signal_length() const {
    return std::size_t{1} << (j_max + 1);
}

WaveletDecomposition dwt(const Signal& signal, const WaveletFilter& filter, int j0) {
    const std::size_t n = signal.size();
    if (!is_power_of_two(n) || n < 2) {
        throw std::invalid_argument("dwt: signal length must be a power of two >= 2");
    }
    const int bigj = log2_exact(n);
    if (j0 < 0 || j0 > bigj - 1) {
        throw std::domain_error("dwt: j0 must lie in [0, J-1]");
    }
    const std::vector<double>& h = filter.lowpass;
    const std::vector<double>& g = filter.highpass;
    const std::size_t len = h.size();

    WaveletDecomposition out;
    out.j0 = j0;
    out.j_max = bigj - 1;
    out.details.resize(static_cast<std::size_t>(bigj - j0));

    std::vector<double> cur = signal.samples;
    for (int j = bigj - 1; j >= j0; --j) {
        const std::size_t cn = cur.size();
        const std::size_t half = cn / 2;
        std::vector<double> approx(half), detail(half);
        for (std::size_t k = 0; k < half; ++k) {
            double a = 0.0, d = 0.0;
            for (std::size_t m = 0; m < len; ++m) {
                const double x = cur[(2 * k + m) % cn];
                a += h[m] * x;
                d += g[m] * x;
            }
            approx[k] = a;
            detail[k] = d;
        }
        out.details[static_cast<std::size_t>(j - j0)] = std::move(detail);
        cur = std::move(approx);
    }
    out.approx = std::move(cur);
    return out;
}

Signal idwt(const WaveletDecomposition& decomp, const WaveletFilter& filter) {
    const int depth = pyramid_depth(decomp);
    if (depth < 1 || decomp.details.size() != static_cast<std::size_t>(depth)) {
        throw std::invalid_argument("idwt: inconsistent decomposition");
    }
    if (decomp.approx.size() != (std::size_t{1} << decomp.j0)) {
        throw std::invalid_argument("idwt: approx block has wrong size");
    }
    const std::vector<double>& h = filter.lowpass;
    const std::vector<double>& g = filter.highpass;
    const std::size_t len = h.size();

    std::vector<double> cur = decomp.approx;
    for (int j = decomp.j0; j <= decomp.j_max; ++j) {
        const std::vector<double>& detail = decomp.details[static_cast<std::size_t>(j - decomp.j0)];
        if (detail.size() != (std::size_t{1} << j) || detail.size() != cur.size()) {
            throw std::invalid_argument("idwt: detail block has wrong size");
        }
        const std::size_t cn = 2 * cur.size();
        std::vector<double> next(cn, 0.0);
        for (std::size_t k = 0; k < cur.size(); ++k) {
            const double a = cur[k];
            const double d = detail[k];
            for (std::size_t m = 0; m < len; ++m) {
                next[(2 * k + m) % cn] += h[m] * a + g[m] * d;
            }
        }
        cur = std::move(next);
    }
    Signal out;
    out.samples = std::move(cur);
    return out;
}

namespace {
constexpr char kDwtMagic[8] = {'H', 'U', 'R', 'S', 'T', 'D', 'W', 'T'};

void write_block(std::ofstream& out, const std::vector<double>& v) {
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(double)));
}

void read_block(std::ifstream& in, std::vector<double>& v, std::size_t n) {
    v.resize(n);
    in.read(reinterpret_cast<char*>(v.data()),
            static_cast<std::streamsize>(n * sizeof(double)));
}
}  // namespace

void write_decomposition_binary(const WaveletDecomposition& d, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.write(kDwtMagic, 8);
    const std::uint64_t j0 = static_cast<std::uint64_t>(d.j0);
    const std::uint64_t jmax = static_cast<std::uint64_t>(d.j_max);
    out.write(reinterpret_cast<const char*>(&j0), 8);
    out.write(reinterpret_cast<const char*>(&jmax), 8);
    write_block(out, d.approx);
    for (const auto& detail : d.details) write_block(out, detail);
    if (!out) throw std::runtime_error("write failed: " + path);
}

WaveletDecomposition read_decomposition_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    char magic[8];
    std::uint64_t j0 = 0, jmax = 0;
    in.read(magic, 8);
    in.read(reinterpret_cast<char*>(&j0), 8);
    in.read(reinterpret_cast<char*>(&jmax), 8);
    if (!in || std::memcmp(magic, kDwtMagic, 8) != 0 || jmax > 62 || j0 > jmax) {
        throw std::runtime_error("bad decomposition container header in " + path);
    }
    WaveletDecomposition d;
    d.j0 = static_cast<int>(j0);
    d.j_max = static_cast<int>(jmax);
    read_block(in, d.approx, std::size_t{1} << j0);
    d.details.resize(static_cast<std::size_t>(jmax - j0 + 1));
    for (std::uint64_t j = j0; j <= jmax; ++j) {
        read_block(in, d.details[static_cast<std::size_t>(j - j0)], std::size_t{1} << j);
    }
    if (!in) throw std::runtime_error("truncated decomposition container: " + path);
    return d;
}

void write_energies_csv(const std::vector<LevelEnergy>& energies, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "level,count,mean_sq,log2_energy\n";
    char buf[96];
    for (const LevelEnergy& e : energies) {
        std::snprintf(buf, sizeof buf, "%d,%zu,%.17g,%.17g\n", e.level, e.count,
                      e.mean_sq, e.log2_energy);
        out << buf;
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<LevelEnergy> level_energies(const WaveletDecomposition& decomp,
                                        int j_min, int j_max) {
    if (j_min > j_max) {
        throw std::domain_error("level_energies: empty level range");
    }
    if (j_min < decomp.j0 || j_max > decomp.j_max) {
        throw std::domain_error("level_energies: range outside decomposition");
    }
    std::vector<LevelEnergy> out;
    out.reserve(static_cast<std::size_t>(j_max - j_min + 1));
    for (int j = j_min; j <= j_max; ++j) {
        const std::vector<double>& d = decomp.detail(j);
        double sum = 0.0;
        for (double v : d) sum += v * v;
        LevelEnergy e;
        e.level = j;
        e.count = d.size();
        e.mean_sq = sum / static_cast<double>(d.size());
        e.log2_energy = e.mean_sq > 0.0 ? std::log2(e.mean_sq)
                                        : -std::numeric_limits<double>::infinity();
        out.push_back(e);
    }
    return out;
}

}  // namespace hurst
