#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <json.hpp>

#include "hurst/aggregation.hpp"
#include "hurst/fbm.hpp"
#include "hurst/harness.hpp"
#include "hurst/mlp.hpp"
#include "hurst/rng.hpp"

namespace hurst {

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

Signal load_signal(const std::string& path) {
    return ends_with(path, ".bin") ? read_signal_binary(path) : read_signal_csv(path);
}

void store_signal(const Signal& s, const std::string& path) {
    if (ends_with(path, ".bin")) {
        write_signal_binary(s, path);
    } else {
        write_signal_csv(s, path);
    }
}

// "estimate" or "fixed:<value>"
std::optional<double> parse_noise_flag(const std::string& flag) {
    if (flag == "estimate") return std::nullopt;
    if (flag.rfind("fixed:", 0) == 0) {
        const double v = std::stod(flag.substr(6));
        if (v < 0.0) throw std::invalid_argument("--noise fixed value must be >= 0");
        return v;
    }
    throw CLI::ValidationError("--noise must be 'estimate' or 'fixed:<value>'");
}

std::string method_from_flag(const std::string& flag) {
    if (flag == "nc-alphee") return "nc_alphee";
    return flag;
}

nlohmann::json pair_to_json(const PairEstimate& p) {
    nlohmann::json j;
    j["j1"] = p.j1;
    j["j2"] = p.j2;
    j["valid"] = p.valid;
    if (p.valid) {
        j["h_hat"] = *p.h_hat;
        j["variance"] = *p.variance;
        j["reason"] = nullptr;
    } else {
        j["h_hat"] = nullptr;
        j["variance"] = nullptr;
        j["reason"] = to_string(p.reason);
    }
    return j;
}

int run_estimate(const std::string& in, const std::string& method_flag,
                 const std::string& filter_name, int jmin, int jmax,
                 const std::string& noise_flag, const std::string& model_path,
                 bool no_detrend, bool allow_low, const std::string& out_path) {
    if (jmin < 3 && !allow_low) {
        throw CLI::ValidationError("--jmin < 3 requires --allow-low-levels");
    }
    const std::string method = method_from_flag(method_flag);
    Signal x = load_signal(in);
    if (!no_detrend) x = remove_bridge(x);
    const WaveletFilter filter = make_filter(filter_name);
    const int bigj = log2_exact(x.size());
    const int j0 = std::max(0, std::min(jmin, bigj - 1));
    const WaveletDecomposition decomp = dwt(x, filter, j0);
    const std::vector<LevelEnergy> energies = level_energies(decomp, j0, decomp.j_max);

    const std::optional<double> fixed = parse_noise_flag(noise_flag);
    const NoiseEstimate noise = fixed.has_value()
                                    ? NoiseEstimate{*fixed, decomp.j_max}
                                    : estimate_noise_variance(decomp);

    nlohmann::json out;
    out["method"] = method_flag;
    out["filter"] = filter_name;
    out["j_min"] = jmin;
    out["j_max"] = jmax;
    out["noise"] = {{"sigma_eps_sq", noise.sigma_eps_sq},
                    {"source", fixed.has_value() ? "fixed" : "estimate"},
                    {"source_level", noise.source_level}};

    if (method == "standard") {
        const SpectrumFit fit = spectrum_regression(energies, jmin, std::min(jmax, decomp.j_max));
        out["fit"] = {{"beta0", fit.beta0}, {"beta1", fit.beta1}, {"h_hat", fit.h_hat}};
        out["aggregate"] = {{"h_hat", fit.h_hat}};
    } else {
        const std::vector<PairEstimate> pairs = all_pair_estimates(
            energies, jmin, jmax,
            method == "alphee" ? PairMethod::alphee : PairMethod::nc_alphee, noise);
        nlohmann::json jp = nlohmann::json::array();
        for (const PairEstimate& p : pairs) jp.push_back(pair_to_json(p));
        out["pairs"] = jp;

        const WeightedCandidates cand = normalize_weights(pairs);
        nlohmann::json agg;
        agg["wmean"] = weighted_mean(cand);
        agg["wmedian"] = weighted_median(cand);
        agg["mean"] = arithmetic_aggregate(cand.estimates, ArithmeticKind::mean);
        agg["median"] = arithmetic_aggregate(cand.estimates, ArithmeticKind::median);
        agg["valid_pairs"] = cand.estimates.size();
        agg["excluded_pairs"] = cand.excluded_count;
        if (!model_path.empty()) {
            const MlpModel model = model_load(model_path);
            std::vector<double> features;
            features.reserve(model.pair_order.size());
            std::map<std::pair<int, int>, const PairEstimate*> by_id;
            for (const PairEstimate& p : pairs) by_id[{p.j1, p.j2}] = &p;
            const double fill = weighted_median(cand);
            for (const auto& id : model.pair_order) {
                auto it = by_id.find(id);
                features.push_back(it != by_id.end() && it->second->valid
                                       ? *it->second->h_hat
                                       : fill);
            }
            agg["nn"] = mlp_forward(model, features);
        }
        out["aggregate"] = agg;
    }

    if (out_path.empty()) {
        std::cout << out.dump(2) << '\n';
    } else {
        std::ofstream f(out_path);
        if (!f) throw std::runtime_error("cannot open for writing: " + out_path);
        f << out.dump(2) << '\n';
    }
    return 0;
}

void write_train_report_csv(const TrainReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "fold,epoch,train_mse,val_mse\n";
    char buf[96];
    for (const FoldEpochRecord& r : report.curve) {
        std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g\n", r.fold, r.epoch,
                      r.train_mse, r.val_mse);
        out << buf;
    }
}

}  // namespace

int cli_main(int argc, char** argv) {
    CLI::App app{"Level-pairwise wavelet Hurst exponent estimation (ALPHEE / NC-ALPHEE)"};
    app.require_subcommand(1);

    // ---- synth ----
    auto* synth = app.add_subcommand("synth", "Generate an fBm path plus optional noise");
    std::size_t s_length = 1 << 14;
    double s_hurst = 0.5, s_sigma_x = 1.0, s_sigma_eps = 0.0;
    std::uint64_t s_seed = 1;
    std::string s_out;
    synth->add_option("--length", s_length, "sample count (power of two)");
    synth->add_option("--hurst", s_hurst, "Hurst exponent in (0,1)")->required();
    synth->add_option("--sigma-x", s_sigma_x, "fBm scale");
    synth->add_option("--sigma-eps", s_sigma_eps, "noise standard deviation");
    synth->add_option("--seed", s_seed, "RNG stream seed");
    synth->add_option("--out", s_out, "output path (.csv or .bin)")->required();

    // ---- dwt ----
    auto* dwt_cmd = app.add_subcommand("dwt", "Decompose a signal and report level energies");
    std::string d_in, d_filter = "sym6", d_out_decomp, d_out_energies;
    int d_j0 = 3;
    bool d_detrend = false;
    dwt_cmd->add_option("--in", d_in, "input signal (.csv or .bin)")->required();
    dwt_cmd->add_option("--filter", d_filter, "wavelet filter name");
    dwt_cmd->add_option("--j0", d_j0, "coarsest retained level");
    dwt_cmd->add_flag("--detrend", d_detrend, "remove the endpoint bridge first");
    dwt_cmd->add_option("--out-decomp", d_out_decomp, "decomposition container output")->required();
    dwt_cmd->add_option("--out-energies", d_out_energies, "level-energy CSV output")->required();

    // ---- estimate ----
    auto* est = app.add_subcommand("estimate", "Estimate H from a signal file");
    std::string e_in, e_method = "nc-alphee", e_filter = "sym6", e_noise = "estimate";
    std::string e_model, e_out;
    int e_jmin = 3, e_jmax = 13;
    bool e_no_detrend = false, e_allow_low = false;
    est->add_option("--in", e_in, "input signal (.csv or .bin)")->required();
    est->add_option("--method", e_method, "standard | alphee | nc-alphee")
        ->check(CLI::IsMember({"standard", "alphee", "nc-alphee"}));
    est->add_option("--filter", e_filter, "wavelet filter name");
    est->add_option("--jmin", e_jmin, "coarsest level used");
    est->add_option("--jmax", e_jmax, "finest level used");
    est->add_option("--noise", e_noise, "'estimate' or 'fixed:<value>' (sigma_eps^2)");
    est->add_option("--model", e_model, "NN aggregator model file");
    est->add_flag("--no-detrend", e_no_detrend, "skip bridge removal");
    est->add_flag("--allow-low-levels", e_allow_low, "permit jmin < 3");
    est->add_option("--out", e_out, "output JSON path (default: stdout)");

    // ---- simulate ----
    auto* sim = app.add_subcommand("simulate", "Run the Monte Carlo sweep from a config");
    std::string m_config, m_out, m_model;
    sim->add_option("--config", m_config, "experiment config JSON")->required();
    sim->add_option("--out", m_out, "results CSV output")->required();
    sim->add_option("--model", m_model, "NN model (for aggregate 'nn')");

    // ---- train ----
    auto* train = app.add_subcommand("train", "Build a training matrix and fit the NN aggregator");
    std::string t_config, t_model_out, t_report_out;
    double t_sigma = 0.0;
    int t_trials = 20;
    bool t_preset = false;
    std::uint64_t t_seed = 0;
    train->add_option("--config", t_config, "experiment config JSON")->required();
    train->add_option("--sigma", t_sigma, "noise level of the training data");
    train->add_option("--trials", t_trials, "random-search trial budget");
    train->add_flag("--preset", t_preset, "use the published per-noise-level configuration");
    train->add_option("--seed", t_seed, "search seed (default: config base_seed)");
    train->add_option("--model-out", t_model_out, "model JSON output")->required();
    train->add_option("--report-out", t_report_out, "training report CSV output");

    // ---- evaluate ----
    auto* eval = app.add_subcommand("evaluate", "Summarize a results CSV into per-cell metrics");
    std::string v_in, v_out;
    eval->add_option("--in", v_in, "results CSV")->required();
    eval->add_option("--out", v_out, "metrics CSV output")->required();

    // ---- pairmap ----
    auto* pm = app.add_subcommand("pairmap", "Pair-reliability map for one grid cell");
    std::string p_config, p_out, p_method = "nc-alphee", p_aggregate = "wmedian", p_model;
    double p_hurst = 0.6, p_sigma = 0.0;
    pm->add_option("--config", p_config, "experiment config JSON")->required();
    pm->add_option("--hurst", p_hurst, "true H of the cell");
    pm->add_option("--sigma", p_sigma, "noise level of the cell");
    pm->add_option("--method", p_method, "alphee | nc-alphee")
        ->check(CLI::IsMember({"alphee", "nc-alphee"}));
    pm->add_option("--aggregate", p_aggregate, "aggregate defining the band");
    pm->add_option("--model", p_model, "NN model (for aggregate 'nn')");
    pm->add_option("--out", p_out, "pairmap CSV output")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        (void)app.exit(e);
        return 1;
    }

    try {
        if (synth->parsed()) {
            SignalSpec spec{s_length, s_hurst, s_sigma_x, s_sigma_eps, s_seed};
            store_signal(synthesize(spec), s_out);
            return 0;
        }
        if (dwt_cmd->parsed()) {
            Signal x = load_signal(d_in);
            if (d_detrend) x = remove_bridge(x);
            const WaveletFilter filter = make_filter(d_filter);
            const int bigj = log2_exact(x.size());
            const int j0 = std::max(0, std::min(d_j0, bigj - 1));
            const WaveletDecomposition decomp = dwt(x, filter, j0);
            write_decomposition_binary(decomp, d_out_decomp);
            write_energies_csv(level_energies(decomp, j0, decomp.j_max), d_out_energies);
            return 0;
        }
        if (est->parsed()) {
            return run_estimate(e_in, e_method, e_filter, e_jmin, e_jmax, e_noise,
                                e_model, e_no_detrend, e_allow_low, e_out);
        }
        if (sim->parsed()) {
            ExperimentConfig config = config_from_json_file(m_config);
            if (!m_model.empty()) config.model_path = m_model;
            write_results_csv(run_sweep(config), m_out);
            return 0;
        }
        if (train->parsed()) {
            const ExperimentConfig config = config_from_json_file(t_config);
            const TrainingMatrix tm = build_training_matrix(config, t_sigma);
            const std::uint64_t seed = t_seed != 0 ? t_seed : config.base_seed;
            MlpModel model;
            TrainReport report;
            if (t_preset) {
                TrainConfig cfg = table1_preset(t_sigma);
                cfg.seed = seed;
                model = mlp_train(tm.features, tm.targets, cfg, &report);
            } else {
                SearchResult result = hyperparam_search(tm.features, tm.targets, t_trials, seed);
                model = std::move(result.model);
                report = std::move(result.report);
            }
            model.pair_order = tm.pair_order;
            model.trained_noise_level = t_sigma;
            model_save(model, t_model_out);
            if (!t_report_out.empty()) write_train_report_csv(report, t_report_out);
            std::cout << "cv_mse=" << report.cv_mse << " test_mse=" << report.test_mse
                      << " final_epochs=" << report.final_epochs << '\n';
            return 0;
        }
        if (eval->parsed()) {
            write_metrics_csv(evaluate_metrics(read_results_csv(v_in)), v_out);
            return 0;
        }
        if (pm->parsed()) {
            ExperimentConfig config = config_from_json_file(p_config);
            if (!p_model.empty()) config.model_path = p_model;
            const std::string method = method_from_flag(p_method);
            const LevelRange range = p_aggregate == "nn" ? config.range_for("nn")
                                                         : config.range_for(method);
            const std::vector<ReplicateDetail> details =
                run_cell_detailed(config, p_hurst, p_sigma, method, p_aggregate);
            write_pairmap_csv(pair_reliability(details, p_hurst, range.j_min, range.j_max),
                              p_out);
            return 0;
        }
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}

}  // namespace hurst
