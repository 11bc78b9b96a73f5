#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hurst {

enum class Activation { relu, leaky_relu, tanh };

Activation activation_from_string(std::string_view s);
std::string to_string(Activation a);

struct MlpModel {
    std::vector<int> layer_sizes;          // input, hidden..., 1
    std::vector<Eigen::MatrixXd> weights;  // weights[l] is layer_sizes[l+1] x layer_sizes[l]
    std::vector<Eigen::VectorXd> biases;
    Activation activation = Activation::leaky_relu;
    double leaky_slope = 0.01;
    Eigen::VectorXd scaler_mean;           // per-feature, applied before layer 0
    Eigen::VectorXd scaler_std;
    std::vector<std::pair<int, int>> pair_order;  // feature column -> (j1, j2)
    double trained_noise_level = 0.0;
};

// Standardizes by the stored scaler, propagates through the hidden layers,
// linear output.
double mlp_forward(const MlpModel& model, std::span<const double> features);

// Rows of X are samples in raw (unstandardized) feature space.
Eigen::VectorXd mlp_forward_batch(const MlpModel& model, const Eigen::MatrixXd& X);

struct TrainConfig {
    std::vector<int> hidden_sizes{64, 64};
    Activation activation = Activation::leaky_relu;
    double learning_rate = 1e-3;
    int batch_size = 32;
    double weight_decay = 0.0;     // L2 penalty added to weight gradients
    int max_epochs = 100;
    int patience = 5;
    int folds = 5;
    double train_fraction = 0.85;
    std::uint64_t seed = 0;
    std::uint64_t split_seed = 0;  // 0: derive from seed; search fixes it across trials
    int search_trials = 20;

    void validate() const;
};

struct FoldEpochRecord {
    int fold = 0;
    int epoch = 0;
    double train_mse = 0.0;
    double val_mse = 0.0;
};

struct TrainReport {
    std::vector<FoldEpochRecord> curve;
    std::vector<double> fold_val_mse;
    std::vector<int> fold_best_epoch;
    int final_epochs = 0;
    double cv_mse = 0.0;
    double test_mse = 0.0;
    std::vector<int> test_indices;  // rows of the held-out 15%
};

// MSE loss, Adam (beta1 0.9, beta2 0.999, eps 1e-8), mini-batches, per-fold
// early stopping on validation MSE, final retrain on the full 85% split with
// the epoch budget chosen by cross-validation, evaluation on the 15% test
// split. Deterministic given config.seed.
MlpModel mlp_train(const Eigen::MatrixXd& features, const Eigen::VectorXd& targets,
                   const TrainConfig& config, TrainReport* report = nullptr);

struct TrialOutcome {
    int trial = 0;
    TrainConfig config;
    double cv_mse = 0.0;
    bool diverged = false;
    std::string error;
};

struct SearchResult {
    TrainConfig config;
    MlpModel model;
    TrainReport report;
    std::vector<TrialOutcome> trials;
};

// Seeded random search over the paper's ranges: 2-5 hidden layers, 4-512
// neurons per layer (step 32), activation in {relu, leaky_relu, tanh},
// log-uniform learning rate [1e-4, 1e-2], batch size in {16, 32, 64},
// log-uniform weight decay [1e-6, 1e-4]. Trials may run in parallel; the
// selection is deterministic given (budget, seed).
SearchResult hyperparam_search(const Eigen::MatrixXd& features,
                               const Eigen::VectorXd& targets,
                               int budget, std::uint64_t seed);

// The published per-noise-level network configurations, runnable verbatim.
// Valid noise levels: 0.0, 0.25, 0.5, 0.75, 1.0.
TrainConfig table1_preset(double noise_level);

void model_save(const MlpModel& model, const std::string& path);
MlpModel model_load(const std::string& path);

// Loss (MSE + weight-decay L2 term) and analytic gradients at the current
// parameters. X must already be standardized. Exposed for gradient checking.
double mlp_loss_and_gradients(const MlpModel& model, const Eigen::MatrixXd& X,
                              const Eigen::VectorXd& y, double weight_decay,
                              std::vector<Eigen::MatrixXd>& grad_w,
                              std::vector<Eigen::VectorXd>& grad_b);

}  // namespace hurst
