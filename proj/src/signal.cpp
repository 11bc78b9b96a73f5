#include "hurst/signal.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace hurst {

namespace {
constexpr char kMagic[8] = {'H', 'U', 'R', 'S', 'T', 'S', 'I', 'G'};
}

bool is_power_of_two(std::size_t n) {
    return n != 0 && (n & (n - 1)) == 0;
}

int log2_exact(std::size_t n) {
    if (!is_power_of_two(n)) {
        throw std::invalid_argument("length must be a power of two");
    }
    int j = 0;
    while ((std::size_t{1} << j) != n) ++j;
    return j;
}

void SignalSpec::validate() const {
    if (!is_power_of_two(length)) {
        throw std::invalid_argument("SignalSpec: length must be a power of two");
    }
    if (!(hurst > 0.0 && hurst < 1.0)) {
        throw std::domain_error("SignalSpec: hurst must lie in (0,1)");
    }
    if (!(sigma_x > 0.0)) {
        throw std::domain_error("SignalSpec: sigma_x must be positive");
    }
    if (sigma_eps < 0.0) {
        throw std::domain_error("SignalSpec: sigma_eps must be nonnegative");
    }
}

void write_signal_csv(const Signal& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "value\n";
    char buf[40];
    for (double v : s.samples) {
        std::snprintf(buf, sizeof buf, "%.17g\n", v);
        out << buf;
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

Signal read_signal_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::string line;
    if (!std::getline(in, line) || line.substr(0, 5) != "value") {
        throw std::runtime_error("bad signal CSV header in " + path);
    }
    Signal s;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::size_t pos = 0;
        double v = std::stod(line, &pos);
        if (!std::isfinite(v)) {
            throw std::runtime_error("non-finite sample in " + path);
        }
        s.samples.push_back(v);
    }
    return s;
}

void write_signal_binary(const Signal& s, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.write(kMagic, 8);
    std::uint64_t n = s.samples.size();
    out.write(reinterpret_cast<const char*>(&n), 8);
    out.write(reinterpret_cast<const char*>(s.samples.data()),
              static_cast<std::streamsize>(n * sizeof(double)));
    if (!out) throw std::runtime_error("write failed: " + path);
}

Signal read_signal_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    char magic[8];
    std::uint64_t n = 0;
    in.read(magic, 8);
    in.read(reinterpret_cast<char*>(&n), 8);
    if (!in || std::memcmp(magic, kMagic, 8) != 0) {
        throw std::runtime_error("bad signal container header in " + path);
    }
    Signal s;
    s.samples.resize(n);
    in.read(reinterpret_cast<char*>(s.samples.data()),
            static_cast<std::streamsize>(n * sizeof(double)));
    if (!in) throw std::runtime_error("truncated signal container: " + path);
    return s;
}

Signal remove_bridge(const Signal& s) {
    const std::size_t n = s.size();
    Signal out;
    out.spec = s.spec;
    out.samples.resize(n);
    if (n < 2) {
        out.samples = s.samples;
        return out;
    }
    const double x0 = s.samples.front();
    const double slope = (s.samples.back() - x0) / static_cast<double>(n - 1);
    for (std::size_t t = 0; t < n; ++t) {
        out.samples[t] = s.samples[t] - x0 - slope * static_cast<double>(t);
    }
    return out;
}

}  // namespace hurst
