#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hurst/estimators.hpp"
#include "hurst/mlp.hpp"

namespace hurst {

struct LevelRange {
    int j_min = 3;
    int j_max = 13;
};

struct ExperimentConfig {
    std::vector<double> h_grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
    std::vector<double> noise_grid{0.0, 0.1, 0.25, 0.5, 0.75, 1.0};
    int replicates = 200;
    std::size_t signal_length = std::size_t{1} << 14;
    std::string filter = "sym6";
    std::map<std::string, LevelRange> level_range;  // per method; "nn" keys the NN path
    std::vector<std::string> methods{"standard", "alphee", "nc_alphee"};
    std::vector<std::string> aggregates{"wmean", "wmedian"};
    std::uint64_t base_seed = 1;
    bool allow_low_levels = false;  // permit j_min < 3
    bool detrend = true;            // bridge removal before decomposition
    std::optional<double> fixed_noise;  // sigma_eps^2 override for diagnostics
    std::string model_path;             // NN model for aggregate "nn"

    LevelRange range_for(const std::string& method) const;
    void validate() const;
};

ExperimentConfig config_from_json_string(const std::string& text);
ExperimentConfig config_from_json_file(const std::string& path);

// Stable per-replicate seed: adding grid cells never reshuffles existing
// streams.
std::uint64_t replicate_seed(std::uint64_t base_seed, std::size_t h_index,
                             std::size_t sigma_index, int replicate);

struct ResultRecord {
    double h_true = 0.0;
    double sigma_eps = 0.0;
    std::string method;
    std::string aggregate;
    int replicate = 0;
    double h_hat = 0.0;  // NaN when the replicate produced no usable estimate
    int valid_pairs = 0;
    int excluded_pairs = 0;
    std::uint64_t seed = 0;
};

// One record per (cell x replicate x method x aggregate); replicates are
// independent tasks and the output order is deterministic regardless of the
// worker count (HURST_THREADS).
std::vector<ResultRecord> run_sweep(const ExperimentConfig& config);

void write_results_csv(const std::vector<ResultRecord>& records, const std::string& path);
std::vector<ResultRecord> read_results_csv(const std::string& path);

struct CellMetrics {
    double h_true = 0.0;
    double sigma_eps = 0.0;
    std::string method;
    std::string aggregate;
    double mean = 0.0;
    double sd = 0.0;
    double bias = 0.0;
    double mse = 0.0;
    double exclusion_rate = 0.0;
    int n = 0;
};

std::vector<CellMetrics> evaluate_metrics(const std::vector<ResultRecord>& records);
void write_metrics_csv(const std::vector<CellMetrics>& metrics, const std::string& path);

struct TrainingMatrix {
    Eigen::MatrixXd features;  // rows: (H index, replicate) in lexicographic order
    Eigen::VectorXd targets;
    std::vector<std::pair<int, int>> pair_order;
    double sigma_eps = 0.0;
};

// One row per (H, replicate) at the given noise level: the NC-ALPHEE pair
// estimates over the NN level range in lexicographic order, invalid entries
// imputed with the signal's weighted median over its valid pairs.
TrainingMatrix build_training_matrix(const ExperimentConfig& config, double sigma_eps);

struct ReplicateDetail {
    std::vector<PairEstimate> pairs;
    double aggregate = 0.0;
};

struct PairReliabilityMap {
    double h_true = 0.0;
    double band_half_width = 0.0;  // 2 sd of the aggregated predictions
    std::vector<std::pair<std::pair<int, int>, int>> counts;  // (j1,j2) -> in-band count
};

// Band = mean +/- 2 sd of the aggregated predictions; counts how often each
// pair's estimate falls inside the band.
PairReliabilityMap pair_reliability(const std::vector<ReplicateDetail>& details,
                                    double h_true, int j_min, int j_max);

// Runs the replicates of one grid cell keeping per-pair detail.
std::vector<ReplicateDetail> run_cell_detailed(const ExperimentConfig& config,
                                               double h_true, double sigma_eps,
                                               const std::string& method,
                                               const std::string& aggregate);

void write_pairmap_csv(const PairReliabilityMap& map, const std::string& path);

int cli_main(int argc, char** argv);

}  // namespace hurst
