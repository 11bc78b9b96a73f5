#pragma once

#include <span>
#include <utility>
#include <vector>

#include "hurst/estimators.hpp"

namespace hurst {

struct WeightedCandidates {
    std::vector<double> estimates;                 // valid h_hat values
    std::vector<double> weights;                   // positive, sum to 1
    std::vector<std::pair<int, int>> pair_ids;     // parallel (j1, j2)
    std::size_t excluded_count = 0;                // invalid pairs dropped
};

// Inverse-variance weights over the valid pairs, normalized to sum 1.
// Throws when no pair is valid.
WeightedCandidates normalize_weights(std::span<const PairEstimate> pairs);

double weighted_mean(const WeightedCandidates& c);

// Order statistic H_(k) with prefix and suffix weight sums both <= 1/2; when
// two adjacent positions qualify (boundary sums exactly 1/2), the midpoint of
// the bracketing estimates is returned. Ties in estimates sort by pair id.
double weighted_median(const WeightedCandidates& c);

enum class ArithmeticKind { mean, median };

double arithmetic_aggregate(std::span<const double> estimates, ArithmeticKind kind);

}  // namespace hurst
