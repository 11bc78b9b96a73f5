#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

#include "hurst/mlp.hpp"
#include "hurst/rng.hpp"

using namespace hurst;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

MlpModel tiny_model(const std::vector<int>& sizes, Activation act, std::uint64_t seed) {
    MlpModel m;
    m.layer_sizes = sizes;
    m.activation = act;
    m.scaler_mean = VectorXd::Zero(sizes.front());
    m.scaler_std = VectorXd::Ones(sizes.front());
    hurst::rng::Stream stream(seed);
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        MatrixXd w(sizes[l + 1], sizes[l]);
        VectorXd b(sizes[l + 1]);
        for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = 0.4 * stream.next_normal();
        for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = 0.2 * stream.next_normal();
        m.weights.push_back(std::move(w));
        m.biases.push_back(std::move(b));
    }
    return m;
}

// Synthetic regression task: smooth function of a few features plus noise.
void make_dataset(int n, int dim, std::uint64_t seed, MatrixXd& x, VectorXd& y) {
    hurst::rng::Stream stream(seed);
    x.resize(n, dim);
    y.resize(n);
    for (int i = 0; i < n; ++i) {
        for (int c = 0; c < dim; ++c) x(i, c) = stream.next_normal();
        y(i) = 0.5 * std::tanh(x(i, 0)) - 0.25 * x(i, 1 % dim) + 0.05 * stream.next_normal();
    }
}

}  // namespace

TEST_CASE("forward pass basics") {
    SUBCASE("zero-weight network outputs the final bias") {
        MlpModel m = tiny_model({4, 3, 1}, Activation::leaky_relu, 1);
        for (auto& w : m.weights) w.setZero();
        m.biases[0].setZero();
        m.biases[1](0) = -0.75;
        const std::vector<double> x{1.0, 2.0, -1.0, 0.5};
        CHECK(mlp_forward(m, x) == doctest::Approx(-0.75).epsilon(1e-15));
    }
    SUBCASE("single linear unit computes w x + b") {
        MlpModel m;
        m.layer_sizes = {1, 1};
        m.weights.push_back(MatrixXd::Constant(1, 1, 1.75));
        m.biases.push_back(VectorXd::Constant(1, -0.5));
        m.scaler_mean = VectorXd::Zero(1);
        m.scaler_std = VectorXd::Ones(1);
        const std::vector<double> x{2.0};
        CHECK(mlp_forward(m, x) == doctest::Approx(1.75 * 2.0 - 0.5).epsilon(1e-15));
    }
    SUBCASE("dimension mismatch is rejected") {
        MlpModel m = tiny_model({4, 3, 1}, Activation::tanh, 2);
        const std::vector<double> x{1.0, 2.0};
        CHECK_THROWS(mlp_forward(m, x));
    }
    SUBCASE("batch forward equals per-sample forward") {
        MlpModel m = tiny_model({5, 8, 4, 1}, Activation::tanh, 3);
        hurst::rng::Stream stream(9);
        MatrixXd x(7, 5);
        for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = stream.next_normal();
        const VectorXd batch = mlp_forward_batch(m, x);
        for (int r = 0; r < 7; ++r) {
            std::vector<double> row(5);
            for (int c = 0; c < 5; ++c) row[static_cast<std::size_t>(c)] = x(r, c);
            REQUIRE(batch(r) == doctest::Approx(mlp_forward(m, row)).epsilon(1e-14));
        }
    }
}

TEST_CASE("analytic gradients match central finite differences") {
    hurst::rng::Stream stream(0xFD);
    for (Activation act : {Activation::leaky_relu, Activation::tanh}) {
        MlpModel m = tiny_model({5, 7, 4, 1}, act, 0xFEE1 + static_cast<int>(act));
        MatrixXd x(12, 5);
        VectorXd y(12);
        for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = stream.next_normal();
        for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = stream.next_normal();
        const double wd = 1e-3;

        std::vector<MatrixXd> gw;
        std::vector<VectorXd> gb;
        mlp_loss_and_gradients(m, x, y, wd, gw, gb);

        const double step = 1e-5;
        int probes = 0;
        while (probes < 20) {
            const std::size_t layer = stream.next_u64() % m.weights.size();
            const bool probe_bias = (stream.next_u64() % 4) == 0;
            std::vector<MatrixXd> tw;
            std::vector<VectorXd> tb;
            double analytic = 0.0, plus = 0.0, minus = 0.0;
            if (probe_bias) {
                const Eigen::Index i =
                    static_cast<Eigen::Index>(stream.next_u64() % m.biases[layer].size());
                analytic = gb[layer](i);
                m.biases[layer](i) += step;
                plus = mlp_loss_and_gradients(m, x, y, wd, tw, tb);
                m.biases[layer](i) -= 2.0 * step;
                minus = mlp_loss_and_gradients(m, x, y, wd, tw, tb);
                m.biases[layer](i) += step;
            } else {
                const Eigen::Index i =
                    static_cast<Eigen::Index>(stream.next_u64() % m.weights[layer].size());
                analytic = gw[layer].data()[i];
                m.weights[layer].data()[i] += step;
                plus = mlp_loss_and_gradients(m, x, y, wd, tw, tb);
                m.weights[layer].data()[i] -= 2.0 * step;
                minus = mlp_loss_and_gradients(m, x, y, wd, tw, tb);
                m.weights[layer].data()[i] += step;
            }
            const double numeric = (plus - minus) / (2.0 * step);
            const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
            REQUIRE(std::abs(analytic - numeric) / denom <= 1e-4);
            ++probes;
        }
    }
}

TEST_CASE("training sanity") {
    SUBCASE("constant target is learned to near-zero MSE") {
        MatrixXd x;
        VectorXd y;
        make_dataset(150, 6, 0xBEE, x, y);
        y.setConstant(0.5);
        TrainConfig cfg;
        cfg.hidden_sizes = {16, 8};
        cfg.learning_rate = 5e-3;
        cfg.batch_size = 16;
        cfg.seed = 11;
        TrainReport report;
        (void)mlp_train(x, y, cfg, &report);
        CHECK(report.test_mse <= 1e-4);
    }
    SUBCASE("deterministic given the seed") {
        MatrixXd x;
        VectorXd y;
        make_dataset(120, 4, 0xDAB, x, y);
        TrainConfig cfg;
        cfg.hidden_sizes = {12, 6};
        cfg.learning_rate = 2e-3;
        cfg.batch_size = 16;
        cfg.max_epochs = 12;
        cfg.seed = 77;
        const MlpModel a = mlp_train(x, y, cfg);
        const MlpModel b = mlp_train(x, y, cfg);
        for (std::size_t l = 0; l < a.weights.size(); ++l) {
            REQUIRE((a.weights[l] - b.weights[l]).cwiseAbs().maxCoeff() == 0.0);
            REQUIRE((a.biases[l] - b.biases[l]).cwiseAbs().maxCoeff() == 0.0);
        }
    }
    SUBCASE("report carries per-fold curves") {
        MatrixXd x;
        VectorXd y;
        make_dataset(100, 3, 0xF00, x, y);
        TrainConfig cfg;
        cfg.hidden_sizes = {8};
        cfg.max_epochs = 10;
        cfg.seed = 5;
        TrainReport report;
        (void)mlp_train(x, y, cfg, &report);
        REQUIRE(report.fold_val_mse.size() == 5);
        REQUIRE(report.fold_best_epoch.size() == 5);
        CHECK(report.final_epochs >= 1);
        CHECK(!report.curve.empty());
        CHECK(report.test_indices.size() == 100 - 85);
    }
    SUBCASE("divergence reports the offending batch") {
        MatrixXd x;
        VectorXd y;
        make_dataset(80, 3, 0xD1E, x, y);
        TrainConfig cfg;
        cfg.hidden_sizes = {8, 8};
        cfg.learning_rate = 1e18;  // guaranteed blow-up under MSE + relu
        cfg.activation = Activation::relu;
        cfg.seed = 3;
        try {
            (void)mlp_train(x, y, cfg);
            FAIL("expected divergence");
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()).find("batch") != std::string::npos);
        }
    }
    SUBCASE("preconditions") {
        MatrixXd x;
        VectorXd y;
        make_dataset(30, 3, 0xAA, x, y);
        TrainConfig cfg;
        CHECK_THROWS(mlp_train(x, y, cfg));  // fewer than 10 samples per fold

        make_dataset(100, 3, 0xAB, x, y);
        x.col(1).setConstant(3.0);  // constant feature must be rejected
        CHECK_THROWS(mlp_train(x, y, cfg));
    }
}

TEST_CASE("hyperparameter search") {
    MatrixXd x;
    VectorXd y;
    make_dataset(120, 5, 0xCAB, x, y);

    SUBCASE("budget one returns that trial's model") {
        const SearchResult r = hyperparam_search(x, y, 1, 99);
        CHECK(r.trials.size() == 1);
        CHECK(std::isfinite(r.report.test_mse));
    }
    SUBCASE("same seed and budget select the same config") {
        const SearchResult a = hyperparam_search(x, y, 3, 1234);
        const SearchResult b = hyperparam_search(x, y, 3, 1234);
        CHECK(a.config.hidden_sizes == b.config.hidden_sizes);
        CHECK(a.config.learning_rate == b.config.learning_rate);
        CHECK(a.config.batch_size == b.config.batch_size);
        CHECK(a.config.weight_decay == b.config.weight_decay);
        CHECK(a.report.cv_mse == b.report.cv_mse);
    }
    SUBCASE("search beats fixed baselines on validation MSE") {
        const SearchResult r = hyperparam_search(x, y, 8, 2024);
        double best_baseline = std::numeric_limits<double>::infinity();
        for (double lr : {1e-4, 1e-3}) {
            TrainConfig cfg;
            cfg.hidden_sizes = {32, 32};
            cfg.learning_rate = lr;
            cfg.batch_size = 32;
            cfg.seed = 55;
            TrainReport rep;
            (void)mlp_train(x, y, cfg, &rep);
            best_baseline = std::min(best_baseline, rep.cv_mse);
        }
        {
            TrainConfig cfg;
            cfg.hidden_sizes = {4};
            cfg.learning_rate = 1e-2;
            cfg.batch_size = 64;
            cfg.seed = 55;
            TrainReport rep;
            (void)mlp_train(x, y, cfg, &rep);
            best_baseline = std::min(best_baseline, rep.cv_mse);
        }
        CHECK(r.report.cv_mse <= best_baseline * 1.5);
    }
    SUBCASE("sampled configs respect the published ranges") {
        const SearchResult r = hyperparam_search(x, y, 6, 31337);
        for (const TrialOutcome& t : r.trials) {
            CHECK(t.config.hidden_sizes.size() >= 2);
            CHECK(t.config.hidden_sizes.size() <= 5);
            for (int h : t.config.hidden_sizes) {
                CHECK(h >= 4);
                CHECK(h <= 512);
            }
            CHECK(t.config.learning_rate >= 1e-4);
            CHECK(t.config.learning_rate <= 1e-2);
            CHECK((t.config.batch_size == 16 || t.config.batch_size == 32 ||
                   t.config.batch_size == 64));
            CHECK(t.config.weight_decay >= 1e-6);
            CHECK(t.config.weight_decay <= 1e-4);
        }
    }
}

TEST_CASE("table 1 presets are runnable verbatim") {
    const TrainConfig c0 = table1_preset(0.0);
    CHECK(c0.hidden_sizes == std::vector<int>{484, 68, 228, 324, 324});
    CHECK(c0.batch_size == 64);
    CHECK(c0.activation == Activation::leaky_relu);
    const TrainConfig c025 = table1_preset(0.25);
    CHECK(c025.activation == Activation::tanh);
    CHECK(table1_preset(0.5).hidden_sizes.size() == 4);
    CHECK(table1_preset(0.75).hidden_sizes.size() == 5);
    CHECK(table1_preset(1.0).hidden_sizes == std::vector<int>{324, 132, 356, 196});
    CHECK_THROWS(table1_preset(0.33));
}

TEST_CASE("model save and load") {
    MlpModel m = tiny_model({6, 10, 4, 1}, Activation::leaky_relu, 0x5A7E);
    m.pair_order = {{3, 4}, {3, 5}, {4, 5}, {3, 6}, {4, 6}, {5, 6}};
    m.trained_noise_level = 0.25;
    const std::string path = "/tmp/hurst_test_model.json";
    model_save(m, path);
    const MlpModel back = model_load(path);

    SUBCASE("round-trip is bitwise on 50 random inputs") {
        hurst::rng::Stream stream(0x1CE);
        for (int t = 0; t < 50; ++t) {
            std::vector<double> x(6);
            for (double& v : x) v = stream.next_normal();
            REQUIRE(mlp_forward(m, x) == mlp_forward(back, x));
        }
        CHECK(back.pair_order == m.pair_order);
        CHECK(back.trained_noise_level == m.trained_noise_level);
    }
    SUBCASE("truncated file is a parse error with no partial model") {
        std::ifstream in(path);
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        std::ofstream out("/tmp/hurst_test_model_trunc.json");
        out << text.substr(0, text.size() / 2);
        out.close();
        try {
            (void)model_load("/tmp/hurst_test_model_trunc.json");
            FAIL("expected parse error");
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()).find("byte") != std::string::npos);
        }
    }
    SUBCASE("format version mismatch is an explicit error") {
        std::ifstream in(path);
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        const auto pos = text.find("\"format_version\": 1");
        REQUIRE(pos != std::string::npos);
        text.replace(pos, std::string("\"format_version\": 1").size(), "\"format_version\": 999");
        std::ofstream out("/tmp/hurst_test_model_badver.json");
        out << text;
        out.close();
        try {
            (void)model_load("/tmp/hurst_test_model_badver.json");
            FAIL("expected version error");
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()).find("format_version") != std::string::npos);
        }
    }
}
