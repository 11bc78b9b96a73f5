#include "hurst/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "hurst/parallel.hpp"
#include "hurst/rng.hpp"

namespace hurst {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr int kFormatVersion = 1;
constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;

double activate(double z, Activation a, double slope) {
    switch (a) {
        case Activation::relu: return z > 0.0 ? z : 0.0;
        case Activation::leaky_relu: return z > 0.0 ? z : slope * z;
        case Activation::tanh: return std::tanh(z);
    }
    return z;
}

double activate_deriv(double z, Activation a, double slope) {
    switch (a) {
        case Activation::relu: return z > 0.0 ? 1.0 : 0.0;
        case Activation::leaky_relu: return z > 0.0 ? 1.0 : slope;
        case Activation::tanh: {
            const double t = std::tanh(z);
            return 1.0 - t * t;
        }
    }
    return 1.0;
}

// Glorot-uniform parameter initialization, deterministic from the stream.
void init_params(MlpModel& model, rng::Stream& stream) {
    model.weights.clear();
    model.biases.clear();
    for (std::size_t l = 0; l + 1 < model.layer_sizes.size(); ++l) {
        const int fan_in = model.layer_sizes[l];
        const int fan_out = model.layer_sizes[l + 1];
        const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        MatrixXd w(fan_out, fan_in);
        for (int r = 0; r < fan_out; ++r) {
            for (int c = 0; c < fan_in; ++c) {
                w(r, c) = limit * (2.0 * stream.next_uniform() - 1.0);
            }
        }
        model.weights.push_back(std::move(w));
        model.biases.push_back(VectorXd::Zero(fan_out));
    }
}

// Forward pass over standardized rows; returns predictions.
VectorXd forward_std(const MlpModel& model, const MatrixXd& X) {
    MatrixXd a = X;
    const std::size_t layers = model.weights.size();
    for (std::size_t l = 0; l < layers; ++l) {
        MatrixXd z = (a * model.weights[l].transpose()).rowwise() +
                     model.biases[l].transpose();
        if (l + 1 < layers) {
            for (Eigen::Index i = 0; i < z.size(); ++i) {
                z.data()[i] = activate(z.data()[i], model.activation, model.leaky_slope);
            }
        }
        a = std::move(z);
    }
    return a.col(0);
}

double mse(const VectorXd& pred, const VectorXd& y) {
    return (pred - y).squaredNorm() / static_cast<double>(y.size());
}

struct AdamState {
    std::vector<MatrixXd> mw, vw;
    std::vector<VectorXd> mb, vb;
    long t = 0;

    explicit AdamState(const MlpModel& model) {
        for (std::size_t l = 0; l < model.weights.size(); ++l) {
            mw.push_back(MatrixXd::Zero(model.weights[l].rows(), model.weights[l].cols()));
            vw.push_back(MatrixXd::Zero(model.weights[l].rows(), model.weights[l].cols()));
            mb.push_back(VectorXd::Zero(model.biases[l].size()));
            vb.push_back(VectorXd::Zero(model.biases[l].size()));
        }
    }

    void step(MlpModel& model, const std::vector<MatrixXd>& gw,
              const std::vector<VectorXd>& gb, double lr) {
        ++t;
        const double c1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(t));
        const double c2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(t));
        for (std::size_t l = 0; l < model.weights.size(); ++l) {
            mw[l] = kAdamBeta1 * mw[l] + (1.0 - kAdamBeta1) * gw[l];
            vw[l] = kAdamBeta2 * vw[l] + (1.0 - kAdamBeta2) * gw[l].cwiseProduct(gw[l]);
            model.weights[l].noalias() -=
                (lr * (mw[l] / c1).array() / ((vw[l] / c2).array().sqrt() + kAdamEps)).matrix();
            mb[l] = kAdamBeta1 * mb[l] + (1.0 - kAdamBeta1) * gb[l];
            vb[l] = kAdamBeta2 * vb[l] + (1.0 - kAdamBeta2) * gb[l].cwiseProduct(gb[l]);
            model.biases[l] -=
                (lr * (mb[l] / c1).array() / ((vb[l] / c2).array().sqrt() + kAdamEps)).matrix();
        }
    }
};

std::vector<int> shuffled_indices(std::size_t n, rng::Stream& stream) {
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(stream.next_u64() % i);
        std::swap(idx[i - 1], idx[j]);
    }
    return idx;
}

MatrixXd take_rows(const MatrixXd& X, const std::vector<int>& rows) {
    MatrixXd out(static_cast<Eigen::Index>(rows.size()), X.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = X.row(rows[i]);
    return out;
}

VectorXd take_rows(const VectorXd& y, const std::vector<int>& rows) {
    VectorXd out(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) out(static_cast<Eigen::Index>(i)) = y(rows[i]);
    return out;
}

// One training run over already-standardized data. When val is nonempty,
// early-stops on validation MSE with the configured patience and reports the
// best epoch; otherwise runs exactly max_epochs.
struct RunResult {
    double best_val = 0.0;
    int best_epoch = 0;
    int epochs_run = 0;
};

RunResult train_run(MlpModel& model, const MatrixXd& Xtr, const VectorXd& ytr,
                    const MatrixXd& Xval, const VectorXd& yval,
                    const TrainConfig& cfg, int max_epochs, std::uint64_t run_seed,
                    int fold_label, TrainReport* report) {
    rng::Stream stream(run_seed);
    init_params(model, stream);
    AdamState adam(model);

    const std::size_t n = static_cast<std::size_t>(Xtr.rows());
    const bool has_val = yval.size() > 0;
    RunResult res;
    res.best_val = std::numeric_limits<double>::infinity();
    int since_best = 0;

    std::vector<MatrixXd> gw;
    std::vector<VectorXd> gb;
    for (int epoch = 1; epoch <= max_epochs; ++epoch) {
        const std::vector<int> order = shuffled_indices(n, stream);
        for (std::size_t start = 0, batch_index = 0; start < n;
             start += static_cast<std::size_t>(cfg.batch_size), ++batch_index) {
            const std::size_t stop = std::min(n, start + static_cast<std::size_t>(cfg.batch_size));
            std::vector<int> rows(order.begin() + static_cast<std::ptrdiff_t>(start),
                                  order.begin() + static_cast<std::ptrdiff_t>(stop));
            const MatrixXd xb = take_rows(Xtr, rows);
            const VectorXd yb = take_rows(ytr, rows);
            const double loss = mlp_loss_and_gradients(model, xb, yb, cfg.weight_decay, gw, gb);
            if (!std::isfinite(loss)) {
                std::ostringstream msg;
                msg << "mlp_train: non-finite loss at epoch " << epoch
                    << " batch " << batch_index;
                throw std::runtime_error(msg.str());
            }
            adam.step(model, gw, gb, cfg.learning_rate);
        }
        res.epochs_run = epoch;
        const double train_mse = mse(forward_std(model, Xtr), ytr);
        double val_mse = train_mse;
        if (has_val) {
            val_mse = mse(forward_std(model, Xval), yval);
        }
        if (report != nullptr && fold_label >= 1) {
            report->curve.push_back(FoldEpochRecord{fold_label, epoch, train_mse, val_mse});
        }
        if (has_val) {
            if (val_mse < res.best_val) {
                res.best_val = val_mse;
                res.best_epoch = epoch;
                since_best = 0;
            } else if (++since_best >= cfg.patience) {
                break;
            }
        }
    }
    if (!has_val) {
        res.best_epoch = res.epochs_run;
    }
    return res;
}

}  // namespace

Activation activation_from_string(std::string_view s) {
    if (s == "relu") return Activation::relu;
    if (s == "leaky_relu") return Activation::leaky_relu;
    if (s == "tanh") return Activation::tanh;
    throw std::invalid_argument("unknown activation: " + std::string(s));
}

std::string to_string(Activation a) {
    switch (a) {
        case Activation::relu: return "relu";
        case Activation::leaky_relu: return "leaky_relu";
        case Activation::tanh: return "tanh";
    }
    return "leaky_relu";
}

void TrainConfig::validate() const {
    if (hidden_sizes.empty()) throw std::invalid_argument("TrainConfig: no hidden layers");
    for (int h : hidden_sizes) {
        if (h < 1) throw std::invalid_argument("TrainConfig: hidden size must be >= 1");
    }
    if (!(learning_rate > 0.0)) throw std::invalid_argument("TrainConfig: learning_rate must be positive");
    if (batch_size < 1) throw std::invalid_argument("TrainConfig: batch_size must be >= 1");
    if (weight_decay < 0.0) throw std::invalid_argument("TrainConfig: weight_decay must be nonnegative");
    if (max_epochs < 1) throw std::invalid_argument("TrainConfig: max_epochs must be >= 1");
    if (patience < 1 || patience > max_epochs) {
        throw std::invalid_argument("TrainConfig: need 1 <= patience <= max_epochs");
    }
    if (folds < 2) throw std::invalid_argument("TrainConfig: folds must be >= 2");
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw std::invalid_argument("TrainConfig: train_fraction must lie in (0,1)");
    }
}

double mlp_forward(const MlpModel& model, std::span<const double> features) {
    if (static_cast<int>(features.size()) != model.layer_sizes.front()) {
        throw std::invalid_argument("mlp_forward: feature length does not match input layer");
    }
    VectorXd x(static_cast<Eigen::Index>(features.size()));
    for (std::size_t i = 0; i < features.size(); ++i) {
        x(static_cast<Eigen::Index>(i)) = (features[i] - model.scaler_mean(static_cast<Eigen::Index>(i))) /
                                          model.scaler_std(static_cast<Eigen::Index>(i));
    }
    const std::size_t layers = model.weights.size();
    for (std::size_t l = 0; l < layers; ++l) {
        VectorXd z = model.weights[l] * x + model.biases[l];
        if (l + 1 < layers) {
            for (Eigen::Index i = 0; i < z.size(); ++i) {
                z(i) = activate(z(i), model.activation, model.leaky_slope);
            }
        }
        x = std::move(z);
    }
    return x(0);
}

Eigen::VectorXd mlp_forward_batch(const MlpModel& model, const MatrixXd& X) {
    if (X.cols() != model.layer_sizes.front()) {
        throw std::invalid_argument("mlp_forward_batch: feature count does not match input layer");
    }
    MatrixXd xs = X;
    for (Eigen::Index c = 0; c < xs.cols(); ++c) {
        xs.col(c) = (xs.col(c).array() - model.scaler_mean(c)) / model.scaler_std(c);
    }
    return forward_std(model, xs);
}

double mlp_loss_and_gradients(const MlpModel& model, const MatrixXd& X,
                              const VectorXd& y, double weight_decay,
                              std::vector<MatrixXd>& grad_w,
                              std::vector<VectorXd>& grad_b) {
    const std::size_t layers = model.weights.size();
    std::vector<MatrixXd> zs(layers);       // pre-activations
    std::vector<MatrixXd> as(layers + 1);   // activations, as[0] = input
    as[0] = X;
    for (std::size_t l = 0; l < layers; ++l) {
        zs[l] = (as[l] * model.weights[l].transpose()).rowwise() + model.biases[l].transpose();
        if (l + 1 < layers) {
            as[l + 1] = zs[l];
            for (Eigen::Index i = 0; i < as[l + 1].size(); ++i) {
                as[l + 1].data()[i] = activate(as[l + 1].data()[i], model.activation, model.leaky_slope);
            }
        } else {
            as[l + 1] = zs[l];
        }
    }
    const double b = static_cast<double>(X.rows());
    const VectorXd resid = as[layers].col(0) - y;
    double loss = resid.squaredNorm() / b;

    grad_w.assign(layers, MatrixXd());
    grad_b.assign(layers, VectorXd());

    // delta holds dLoss/dz for the current layer, one row per sample
    MatrixXd delta = (2.0 / b) * resid;
    for (std::size_t li = layers; li-- > 0;) {
        grad_w[li] = delta.transpose() * as[li];
        grad_b[li] = delta.colwise().sum();
        if (weight_decay > 0.0) {
            loss += 0.5 * weight_decay * model.weights[li].squaredNorm();
            grad_w[li] += weight_decay * model.weights[li];
        }
        if (li > 0) {
            MatrixXd up = delta * model.weights[li];
            for (Eigen::Index i = 0; i < up.size(); ++i) {
                up.data()[i] *= activate_deriv(zs[li - 1].data()[i], model.activation,
                                               model.leaky_slope);
            }
            delta = std::move(up);
        }
    }
    return loss;
}

MlpModel mlp_train(const MatrixXd& features, const VectorXd& targets,
                   const TrainConfig& config, TrainReport* report) {
    config.validate();
    const Eigen::Index n = features.rows();
    if (targets.size() != n) {
        throw std::invalid_argument("mlp_train: feature/target row mismatch");
    }
    if (n < 10 * config.folds) {
        throw std::invalid_argument("mlp_train: needs at least 10 samples per fold");
    }

    const std::uint64_t split_seed =
        config.split_seed != 0 ? config.split_seed : rng::mix({config.seed, 0x5917ULL});
    rng::Stream split_stream(split_seed);
    const std::vector<int> order = shuffled_indices(static_cast<std::size_t>(n), split_stream);

    const auto train_n = static_cast<std::size_t>(
        std::floor(config.train_fraction * static_cast<double>(n)));
    std::vector<int> train_rows(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(train_n));
    std::vector<int> test_rows(order.begin() + static_cast<std::ptrdiff_t>(train_n), order.end());

    // standardization from the training split only
    const MatrixXd xtr_raw = take_rows(features, train_rows);
    VectorXd mean = xtr_raw.colwise().mean();
    VectorXd sd(features.cols());
    for (Eigen::Index c = 0; c < features.cols(); ++c) {
        const double var = (xtr_raw.col(c).array() - mean(c)).square().sum() /
                           static_cast<double>(xtr_raw.rows());
        sd(c) = std::sqrt(var);
        if (!(sd(c) > 1e-12)) {
            throw std::invalid_argument("mlp_train: constant feature column " + std::to_string(c));
        }
    }
    MatrixXd xs = features;
    for (Eigen::Index c = 0; c < xs.cols(); ++c) {
        xs.col(c) = (xs.col(c).array() - mean(c)) / sd(c);
    }

    MlpModel proto;
    proto.layer_sizes.push_back(static_cast<int>(features.cols()));
    for (int h : config.hidden_sizes) proto.layer_sizes.push_back(h);
    proto.layer_sizes.push_back(1);
    proto.activation = config.activation;
    proto.scaler_mean = mean;
    proto.scaler_std = sd;

    TrainReport local;
    TrainReport& rep = report != nullptr ? *report : local;
    rep = TrainReport{};

    // k-fold cross-validation over the training split
    const std::size_t fold_count = static_cast<std::size_t>(config.folds);
    for (std::size_t fold = 0; fold < fold_count; ++fold) {
        std::vector<int> val_rows, fit_rows;
        for (std::size_t i = 0; i < train_rows.size(); ++i) {
            if (i % fold_count == fold) val_rows.push_back(train_rows[i]);
            else fit_rows.push_back(train_rows[i]);
        }
        MlpModel m = proto;
        const RunResult r = train_run(m, take_rows(xs, fit_rows), take_rows(targets, fit_rows),
                                      take_rows(xs, val_rows), take_rows(targets, val_rows),
                                      config, config.max_epochs,
                                      rng::mix({config.seed, 0xF01DULL, fold}),
                                      static_cast<int>(fold) + 1, &rep);
        rep.fold_val_mse.push_back(r.best_val);
        rep.fold_best_epoch.push_back(r.best_epoch);
    }
    double mean_epoch = 0.0;
    rep.cv_mse = 0.0;
    for (std::size_t f = 0; f < fold_count; ++f) {
        rep.cv_mse += rep.fold_val_mse[f] / static_cast<double>(fold_count);
        mean_epoch += static_cast<double>(rep.fold_best_epoch[f]) / static_cast<double>(fold_count);
    }
    rep.final_epochs = std::clamp(static_cast<int>(std::lround(mean_epoch)), 1, config.max_epochs);

    // final retrain on the full training split with the CV epoch budget
    MlpModel model = proto;
    train_run(model, take_rows(xs, train_rows), take_rows(targets, train_rows),
              MatrixXd(0, features.cols()), VectorXd(),
              config, rep.final_epochs, rng::mix({config.seed, 0xF17A1ULL}), 0, nullptr);

    rep.test_indices = test_rows;
    rep.test_mse = mse(forward_std(model, take_rows(xs, test_rows)), take_rows(targets, test_rows));
    return model;
}

SearchResult hyperparam_search(const MatrixXd& features, const VectorXd& targets,
                               int budget, std::uint64_t seed) {
    if (budget < 1) {
        throw std::invalid_argument("hyperparam_search: budget must be >= 1");
    }
    const std::uint64_t split_seed = rng::mix({seed, 0x59171ULL});

    // sample all trial configs up front so parallel execution stays deterministic
    rng::Stream sampler(rng::mix({seed, 0x5a3b1e5ULL}));
    std::vector<TrainConfig> configs;
    configs.reserve(static_cast<std::size_t>(budget));
    for (int t = 0; t < budget; ++t) {
        TrainConfig cfg;
        const int layers = 2 + static_cast<int>(sampler.next_u64() % 4);  // 2..5
        cfg.hidden_sizes.clear();
        for (int l = 0; l < layers; ++l) {
            cfg.hidden_sizes.push_back(4 + 32 * static_cast<int>(sampler.next_u64() % 16));
        }
        const std::uint64_t act = sampler.next_u64() % 3;
        cfg.activation = act == 0 ? Activation::relu
                                  : (act == 1 ? Activation::leaky_relu : Activation::tanh);
        cfg.learning_rate = std::pow(10.0, -4.0 + 2.0 * sampler.next_uniform());
        const int batches[3] = {16, 32, 64};
        cfg.batch_size = batches[sampler.next_u64() % 3];
        cfg.weight_decay = std::pow(10.0, -6.0 + 2.0 * sampler.next_uniform());
        cfg.seed = rng::mix({seed, 0x7417A1ULL, static_cast<std::uint64_t>(t)});
        cfg.split_seed = split_seed;
        configs.push_back(cfg);
    }

    std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(budget));
    parallel_for(static_cast<std::size_t>(budget), [&](std::size_t t) {
        TrialOutcome& out = outcomes[t];
        out.trial = static_cast<int>(t);
        out.config = configs[t];
        try {
            TrainReport rep;
            (void)mlp_train(features, targets, configs[t], &rep);
            out.cv_mse = rep.cv_mse;
        } catch (const std::exception& e) {
            out.diverged = true;
            out.error = e.what();
            out.cv_mse = std::numeric_limits<double>::infinity();
        }
    });

    int best = -1;
    for (int t = 0; t < budget; ++t) {
        if (outcomes[static_cast<std::size_t>(t)].diverged) continue;
        if (best < 0 || outcomes[static_cast<std::size_t>(t)].cv_mse <
                            outcomes[static_cast<std::size_t>(best)].cv_mse) {
            best = t;
        }
    }
    if (best < 0) {
        std::ostringstream msg;
        msg << "hyperparam_search: all " << budget << " trials diverged:";
        for (const TrialOutcome& o : outcomes) msg << " [trial " << o.trial << ": " << o.error << "]";
        throw std::runtime_error(msg.str());
    }

    SearchResult result;
    result.config = configs[static_cast<std::size_t>(best)];
    result.trials = std::move(outcomes);
    result.model = mlp_train(features, targets, result.config, &result.report);
    return result;
}

TrainConfig table1_preset(double noise_level) {
    TrainConfig cfg;
    cfg.folds = 5;
    cfg.max_epochs = 100;
    cfg.patience = 5;
    if (noise_level == 0.0) {
        cfg.hidden_sizes = {484, 68, 228, 324, 324};
        cfg.learning_rate = 5.8e-4;
        cfg.activation = Activation::leaky_relu;
        cfg.batch_size = 64;
        cfg.weight_decay = 9.18e-6;
    } else if (noise_level == 0.25) {
        cfg.hidden_sizes = {132, 260, 68, 4, 164};
        cfg.learning_rate = 9.5e-3;
        cfg.activation = Activation::tanh;
        cfg.batch_size = 32;
        cfg.weight_decay = 7.12e-6;
    } else if (noise_level == 0.5) {
        cfg.hidden_sizes = {292, 164, 324, 484};
        cfg.learning_rate = 3.94e-4;
        cfg.activation = Activation::leaky_relu;
        cfg.batch_size = 16;
        cfg.weight_decay = 1.10e-6;
    } else if (noise_level == 0.75) {
        cfg.hidden_sizes = {388, 4, 324, 228, 484};
        cfg.learning_rate = 4.71e-4;
        cfg.activation = Activation::leaky_relu;
        cfg.batch_size = 16;
        cfg.weight_decay = 2.29e-6;
    } else if (noise_level == 1.0) {
        cfg.hidden_sizes = {324, 132, 356, 196};
        cfg.learning_rate = 5.52e-4;
        cfg.activation = Activation::leaky_relu;
        cfg.batch_size = 16;
        cfg.weight_decay = 1.07e-6;
    } else {
        throw std::invalid_argument("table1_preset: no preset for this noise level");
    }
    return cfg;
}

void model_save(const MlpModel& model, const std::string& path) {
    nlohmann::json j;
    j["format_version"] = kFormatVersion;
    j["layer_sizes"] = model.layer_sizes;
    j["activation"] = to_string(model.activation);
    j["leaky_slope"] = model.leaky_slope;
    j["scaler_means"] = std::vector<double>(model.scaler_mean.data(),
                                            model.scaler_mean.data() + model.scaler_mean.size());
    j["scaler_stds"] = std::vector<double>(model.scaler_std.data(),
                                           model.scaler_std.data() + model.scaler_std.size());
    nlohmann::json layers = nlohmann::json::array();
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        nlohmann::json layer;
        std::vector<double> w;  // row-major
        w.reserve(static_cast<std::size_t>(model.weights[l].size()));
        for (Eigen::Index r = 0; r < model.weights[l].rows(); ++r) {
            for (Eigen::Index c = 0; c < model.weights[l].cols(); ++c) {
                w.push_back(model.weights[l](r, c));
            }
        }
        layer["weights"] = w;
        layer["bias"] = std::vector<double>(model.biases[l].data(),
                                            model.biases[l].data() + model.biases[l].size());
        layers.push_back(layer);
    }
    j["layers"] = layers;
    nlohmann::json order = nlohmann::json::array();
    for (const auto& [j1, j2] : model.pair_order) order.push_back({j1, j2});
    j["pair_order"] = order;
    j["trained_noise_level"] = model.trained_noise_level;

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

MlpModel model_load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("model parse error in " + path + " at byte " +
                                 std::to_string(e.byte) + ": " + e.what());
    }
    if (!j.contains("format_version") || j["format_version"].get<int>() != kFormatVersion) {
        throw std::runtime_error("model file " + path + " has incompatible format_version");
    }
    MlpModel m;
    m.layer_sizes = j["layer_sizes"].get<std::vector<int>>();
    m.activation = activation_from_string(j["activation"].get<std::string>());
    m.leaky_slope = j["leaky_slope"].get<double>();
    const auto means = j["scaler_means"].get<std::vector<double>>();
    const auto stds = j["scaler_stds"].get<std::vector<double>>();
    m.scaler_mean = Eigen::Map<const VectorXd>(means.data(), static_cast<Eigen::Index>(means.size()));
    m.scaler_std = Eigen::Map<const VectorXd>(stds.data(), static_cast<Eigen::Index>(stds.size()));
    if (m.layer_sizes.size() < 2 || j["layers"].size() != m.layer_sizes.size() - 1) {
        throw std::runtime_error("model file " + path + " has inconsistent layer data");
    }
    for (std::size_t l = 0; l + 1 < m.layer_sizes.size(); ++l) {
        const auto& layer = j["layers"][l];
        const auto w = layer["weights"].get<std::vector<double>>();
        const auto b = layer["bias"].get<std::vector<double>>();
        const int rows = m.layer_sizes[l + 1];
        const int cols = m.layer_sizes[l];
        if (static_cast<int>(w.size()) != rows * cols || static_cast<int>(b.size()) != rows) {
            throw std::runtime_error("model file " + path + " has mis-sized layer " + std::to_string(l));
        }
        MatrixXd wm(rows, cols);
        for (int r = 0; r < rows; ++r) {
            for (int c = 0; c < cols; ++c) {
                wm(r, c) = w[static_cast<std::size_t>(r) * cols + c];
            }
        }
        m.weights.push_back(std::move(wm));
        m.biases.push_back(Eigen::Map<const VectorXd>(b.data(), rows));
    }
    for (const auto& p : j["pair_order"]) {
        m.pair_order.emplace_back(p[0].get<int>(), p[1].get<int>());
    }
    m.trained_noise_level = j["trained_noise_level"].get<double>();
    return m;
}

}  // namespace hurst
