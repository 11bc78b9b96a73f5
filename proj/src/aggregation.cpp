#include "hurst/aggregation.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace hurst {

WeightedCandidates normalize_weights(std::span<const PairEstimate> pairs) {
    WeightedCandidates c;
    double total = 0.0;
    for (const PairEstimate& p : pairs) {
        if (!p.valid) {
            ++c.excluded_count;
            continue;
        }
        const double w = 1.0 / *p.variance;
        c.estimates.push_back(*p.h_hat);
        c.weights.push_back(w);
        c.pair_ids.emplace_back(p.j1, p.j2);
        total += w;
    }
    if (c.estimates.empty()) {
        throw std::runtime_error("normalize_weights: no valid pair estimate");
    }
    for (double& w : c.weights) w /= total;
    return c;
}

double weighted_mean(const WeightedCandidates& c) {
    double acc = 0.0;
    for (std::size_t i = 0; i < c.estimates.size(); ++i) {
        acc += c.weights[i] * c.estimates[i];
    }
    return acc;
}

double weighted_median(const WeightedCandidates& c) {
    const std::size_t n = c.estimates.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (c.estimates[a] != c.estimates[b]) return c.estimates[a] < c.estimates[b];
        return c.pair_ids[a] < c.pair_ids[b];
    });

    // prefix[k] = sum of weights strictly before position k in sorted order
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        prefix[k + 1] = prefix[k] + c.weights[order[k]];
    }
    const double total = prefix[n];
    constexpr double kHalfTol = 1e-12;

    std::vector<std::size_t> admissible;
    for (std::size_t k = 0; k < n; ++k) {
        const double before = prefix[k];
        const double after = total - prefix[k + 1];
        if (before <= 0.5 + kHalfTol && after <= 0.5 + kHalfTol) {
            admissible.push_back(k);
        }
    }
    if (admissible.size() >= 2) {
        return 0.5 * (c.estimates[order[admissible.front()]] +
                      c.estimates[order[admissible.back()]]);
    }
    return c.estimates[order[admissible.front()]];
}

double arithmetic_aggregate(std::span<const double> estimates, ArithmeticKind kind) {
    if (estimates.empty()) {
        throw std::runtime_error("arithmetic_aggregate: no estimates");
    }
    if (kind == ArithmeticKind::mean) {
        double acc = 0.0;
        for (double v : estimates) acc += v;
        return acc / static_cast<double>(estimates.size());
    }
    std::vector<double> sorted(estimates.begin(), estimates.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    if (n % 2 == 1) return sorted[n / 2];
    return 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

}  // namespace hurst
