#include "hurst/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hurst/aggregation.hpp"
#include "hurst/fbm.hpp"
#include "hurst/parallel.hpp"
#include "hurst/rng.hpp"

namespace hurst {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::set<std::string>& known_methods() {
    static const std::set<std::string> m{"standard", "alphee", "nc_alphee"};
    return m;
}

const std::set<std::string>& known_aggregates() {
    static const std::set<std::string> a{"mean", "median", "wmean", "wmedian", "nn"};
    return a;
}

std::uint64_t double_bits(double v) {
    std::uint64_t bits;
    static_assert(sizeof bits == sizeof v);
    std::memcpy(&bits, &v, sizeof bits);
    return bits;
}

std::size_t grid_index(const std::vector<double>& grid, double value) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] == value) return i;
    }
    return grid.size() + static_cast<std::size_t>(double_bits(value) % 4096);
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Analysis of one synthesized replicate: shared decomposition, energies and
// noise estimate for every method.
struct ReplicateAnalysis {
    std::vector<LevelEnergy> energies;
    NoiseEstimate noise;
    int j_top = 0;  // finest level J-1
};

ReplicateAnalysis analyze(const ExperimentConfig& config, const WaveletFilter& filter,
                          const FbmGenerator& gen, double sigma_eps, std::uint64_t seed,
                          int j0) {
    Signal x = gen.generate(seed);
    x = add_noise(x, sigma_eps, seed);
    if (config.detrend) x = remove_bridge(x);
    const WaveletDecomposition decomp = dwt(x, filter, j0);
    ReplicateAnalysis a;
    a.j_top = decomp.j_max;
    a.energies = level_energies(decomp, j0, decomp.j_max);
    if (config.fixed_noise.has_value()) {
        a.noise = NoiseEstimate{*config.fixed_noise, decomp.j_max};
    } else {
        a.noise = estimate_noise_variance(decomp);
    }
    return a;
}

// NN feature vector in the model's pair order; invalid entries imputed with
// the signal's weighted median over its valid pairs. Returns false when no
// pair is valid.
bool nn_features(const std::vector<PairEstimate>& pairs,
                 const std::vector<std::pair<int, int>>& pair_order,
                 std::vector<double>& out) {
    std::map<std::pair<int, int>, const PairEstimate*> by_id;
    for (const PairEstimate& p : pairs) by_id[{p.j1, p.j2}] = &p;
    WeightedCandidates cand;
    try {
        cand = normalize_weights(pairs);
    } catch (const std::exception&) {
        return false;
    }
    const double fill = weighted_median(cand);
    out.clear();
    out.reserve(pair_order.size());
    for (const auto& id : pair_order) {
        auto it = by_id.find(id);
        if (it != by_id.end() && it->second->valid) {
            out.push_back(*it->second->h_hat);
        } else {
            out.push_back(fill);
        }
    }
    return true;
}

struct AggregateOutcome {
    double h_hat = kNaN;
    int valid = 0;
    int excluded = 0;
};

AggregateOutcome aggregate_pairs(const std::vector<PairEstimate>& pairs,
                                 const std::string& aggregate,
                                 const MlpModel* model) {
    AggregateOutcome out;
    for (const PairEstimate& p : pairs) {
        if (p.valid) ++out.valid; else ++out.excluded;
    }
    try {
        if (aggregate == "wmean") {
            out.h_hat = weighted_mean(normalize_weights(pairs));
        } else if (aggregate == "wmedian") {
            out.h_hat = weighted_median(normalize_weights(pairs));
        } else if (aggregate == "mean" || aggregate == "median") {
            std::vector<double> vals;
            for (const PairEstimate& p : pairs) {
                if (p.valid) vals.push_back(*p.h_hat);
            }
            out.h_hat = arithmetic_aggregate(
                vals, aggregate == "mean" ? ArithmeticKind::mean : ArithmeticKind::median);
        } else if (aggregate == "nn") {
            std::vector<double> features;
            if (model != nullptr && nn_features(pairs, model->pair_order, features)) {
                out.h_hat = mlp_forward(*model, features);
            }
        }
    } catch (const std::exception&) {
        out.h_hat = kNaN;
    }
    return out;
}

}  // namespace

LevelRange ExperimentConfig::range_for(const std::string& method) const {
    auto it = level_range.find(method);
    if (it != level_range.end()) return it->second;
    if (method == "nn") return LevelRange{3, 15};
    return LevelRange{3, 13};
}

void ExperimentConfig::validate() const {
    for (double h : h_grid) {
        if (!(h > 0.0 && h < 1.0)) throw std::invalid_argument("config: every H must lie in (0,1)");
    }
    if (h_grid.empty()) throw std::invalid_argument("config: empty h_grid");
    for (double s : noise_grid) {
        if (s < 0.0) throw std::invalid_argument("config: noise levels must be nonnegative");
    }
    if (noise_grid.empty()) throw std::invalid_argument("config: empty noise_grid");
    if (replicates < 1) throw std::invalid_argument("config: replicates must be >= 1");
    if (!is_power_of_two(signal_length) || signal_length < 8) {
        throw std::invalid_argument("config: signal_length must be a power of two >= 8");
    }
    const WaveletFilter f = make_filter(filter);
    if (f.vanishing_moments < 2) {
        std::cerr << "warning: filter '" << filter
                  << "' has M = " << f.vanishing_moments
                  << "; decorrelation requires M > H + 1/2, this basis should not"
                     " be used for estimation\n";
    }
    if (methods.empty()) throw std::invalid_argument("config: no methods selected");
    for (const std::string& m : methods) {
        if (known_methods().count(m) == 0) throw std::invalid_argument("config: unknown method " + m);
    }
    for (const std::string& a : aggregates) {
        if (known_aggregates().count(a) == 0) {
            throw std::invalid_argument("config: unknown aggregate " + a);
        }
    }
    std::vector<std::string> ranged(methods);
    ranged.push_back("nn");
    for (const std::string& m : ranged) {
        const LevelRange r = range_for(m);
        if (r.j_min < 0 || r.j_min >= r.j_max) {
            throw std::invalid_argument("config: level range needs 0 <= j_min < j_max");
        }
        if (r.j_min < 3 && !allow_low_levels) {
            throw std::invalid_argument(
                "config: j_min < 3 requires allow_low_levels (levels 1 and 2 are excluded)");
        }
    }
}

namespace {

LevelRange range_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2) {
        throw std::invalid_argument("config: level_range entries must be [j_min, j_max]");
    }
    return LevelRange{j[0].get<int>(), j[1].get<int>()};
}

}  // namespace

ExperimentConfig config_from_json_string(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(std::string("config parse error at byte ") +
                                 std::to_string(e.byte) + ": " + e.what());
    }
    ExperimentConfig c;
    if (j.contains("h_grid")) c.h_grid = j["h_grid"].get<std::vector<double>>();
    if (j.contains("noise_grid")) c.noise_grid = j["noise_grid"].get<std::vector<double>>();
    if (j.contains("replicates")) c.replicates = j["replicates"].get<int>();
    if (j.contains("signal_length")) c.signal_length = j["signal_length"].get<std::size_t>();
    if (j.contains("filter")) c.filter = j["filter"].get<std::string>();
    if (j.contains("level_range")) {
        const auto& lr = j["level_range"];
        if (lr.is_array()) {
            const LevelRange r = range_from_json(lr);
            for (const char* m : {"standard", "alphee", "nc_alphee", "nn"}) {
                c.level_range[m] = r;
            }
        } else if (lr.is_object()) {
            for (auto it = lr.begin(); it != lr.end(); ++it) {
                c.level_range[it.key()] = range_from_json(it.value());
            }
        } else {
            throw std::invalid_argument("config: level_range must be array or object");
        }
    }
    if (j.contains("methods")) c.methods = j["methods"].get<std::vector<std::string>>();
    if (j.contains("aggregates")) c.aggregates = j["aggregates"].get<std::vector<std::string>>();
    if (j.contains("base_seed")) c.base_seed = j["base_seed"].get<std::uint64_t>();
    if (j.contains("allow_low_levels")) c.allow_low_levels = j["allow_low_levels"].get<bool>();
    if (j.contains("detrend")) c.detrend = j["detrend"].get<bool>();
    if (j.contains("fixed_noise") && !j["fixed_noise"].is_null()) {
        c.fixed_noise = j["fixed_noise"].get<double>();
    }
    if (j.contains("model_path")) c.model_path = j["model_path"].get<std::string>();
    c.validate();
    return c;
}

ExperimentConfig config_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return config_from_json_string(buf.str());
}

std::uint64_t replicate_seed(std::uint64_t base_seed, std::size_t h_index,
                             std::size_t sigma_index, int replicate) {
    return rng::mix({base_seed, static_cast<std::uint64_t>(h_index),
                     static_cast<std::uint64_t>(sigma_index),
                     static_cast<std::uint64_t>(replicate)});
}

std::vector<ResultRecord> run_sweep(const ExperimentConfig& config) {
    config.validate();
    const WaveletFilter filter = make_filter(config.filter);
    const int bigj = log2_exact(config.signal_length);

    std::optional<MlpModel> model;
    const bool wants_nn =
        std::find(config.aggregates.begin(), config.aggregates.end(), "nn") !=
        config.aggregates.end();
    if (wants_nn) {
        if (config.model_path.empty()) {
            throw std::invalid_argument("config: aggregate 'nn' requires model_path");
        }
        model = model_load(config.model_path);
    }

    int j0 = bigj - 1;
    for (const std::string& m : config.methods) {
        j0 = std::min(j0, config.range_for(m).j_min);
    }
    if (wants_nn && model.has_value() && !model->pair_order.empty()) {
        for (const auto& [j1, j2] : model->pair_order) {
            (void)j2;
            j0 = std::min(j0, j1);
        }
    }
    j0 = std::max(0, std::min(j0, bigj - 1));

    std::vector<FbmGenerator> generators;
    generators.reserve(config.h_grid.size());
    for (double h : config.h_grid) {
        generators.emplace_back(config.signal_length, h);
    }

    const std::size_t n_h = config.h_grid.size();
    const std::size_t n_s = config.noise_grid.size();
    const std::size_t n_r = static_cast<std::size_t>(config.replicates);
    const std::size_t records_per_task = config.methods.size() * config.aggregates.size();
    const std::size_t tasks = n_h * n_s * n_r;

    std::vector<ResultRecord> records(tasks * records_per_task);

    parallel_for(tasks, [&](std::size_t task) {
        const std::size_t hi = task / (n_s * n_r);
        const std::size_t si = (task / n_r) % n_s;
        const int r = static_cast<int>(task % n_r);
        const double h_true = config.h_grid[hi];
        const double sigma = config.noise_grid[si];
        const std::uint64_t seed = replicate_seed(config.base_seed, hi, si, r);

        const ReplicateAnalysis a =
            analyze(config, filter, generators[hi], sigma, seed, j0);

        std::size_t slot = task * records_per_task;
        for (const std::string& method : config.methods) {
            const LevelRange range = config.range_for(method);
            std::vector<PairEstimate> pairs;
            SpectrumFit fit;
            bool fit_ok = false;
            int fit_levels = 0;
            if (method == "standard") {
                try {
                    fit = spectrum_regression(a.energies, range.j_min,
                                              std::min(range.j_max, a.j_top));
                    fit_ok = true;
                    for (const LevelEnergy& e : a.energies) {
                        if (e.level >= range.j_min && e.level <= range.j_max &&
                            !e.degenerate()) {
                            ++fit_levels;
                        }
                    }
                } catch (const std::exception&) {
                    fit_ok = false;
                }
            } else {
                pairs = all_pair_estimates(
                    a.energies, range.j_min, range.j_max,
                    method == "alphee" ? PairMethod::alphee : PairMethod::nc_alphee,
                    a.noise);
            }

            for (const std::string& aggregate : config.aggregates) {
                ResultRecord& rec = records[slot++];
                rec.h_true = h_true;
                rec.sigma_eps = sigma;
                rec.method = method;
                rec.aggregate = aggregate;
                rec.replicate = r;
                rec.seed = seed;
                if (method == "standard") {
                    rec.h_hat = fit_ok ? fit.h_hat : kNaN;
                    rec.valid_pairs = fit_levels;
                    rec.excluded_pairs = 0;
                    continue;
                }
                if (aggregate == "nn") {
                    // NN features come from the model's own pair range
                    std::vector<PairEstimate> nn_pairs = all_pair_estimates(
                        a.energies, config.range_for("nn").j_min, config.range_for("nn").j_max,
                        method == "alphee" ? PairMethod::alphee : PairMethod::nc_alphee,
                        a.noise);
                    const AggregateOutcome out =
                        aggregate_pairs(nn_pairs, aggregate, model.has_value() ? &*model : nullptr);
                    rec.h_hat = out.h_hat;
                    rec.valid_pairs = out.valid;
                    rec.excluded_pairs = out.excluded;
                } else {
                    const AggregateOutcome out = aggregate_pairs(pairs, aggregate, nullptr);
                    rec.h_hat = out.h_hat;
                    rec.valid_pairs = out.valid;
                    rec.excluded_pairs = out.excluded;
                }
            }
        }
    });
    return records;
}

void write_results_csv(const std::vector<ResultRecord>& records, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "h_true,sigma_eps,method,aggregate,replicate,h_hat,valid_pairs,excluded_pairs,seed\n";
    for (const ResultRecord& r : records) {
        out << format_double(r.h_true) << ',' << format_double(r.sigma_eps) << ','
            << r.method << ',' << r.aggregate << ',' << r.replicate << ','
            << format_double(r.h_hat) << ',' << r.valid_pairs << ','
            << r.excluded_pairs << ',' << r.seed << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<ResultRecord> read_results_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty results file: " + path);
    std::vector<ResultRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string field;
        ResultRecord r;
        auto next = [&]() {
            if (!std::getline(ss, field, ',')) {
                throw std::runtime_error("malformed results row in " + path);
            }
            return field;
        };
        r.h_true = std::stod(next());
        r.sigma_eps = std::stod(next());
        r.method = next();
        r.aggregate = next();
        r.replicate = std::stoi(next());
        r.h_hat = std::stod(next());
        r.valid_pairs = std::stoi(next());
        r.excluded_pairs = std::stoi(next());
        r.seed = std::stoull(next());
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<CellMetrics> evaluate_metrics(const std::vector<ResultRecord>& records) {
    using Key = std::tuple<double, double, std::string, std::string>;
    struct Acc {
        std::vector<double> values;
        long valid = 0, excluded = 0;
    };
    std::map<Key, Acc> cells;
    for (const ResultRecord& r : records) {
        Acc& acc = cells[{r.h_true, r.sigma_eps, r.method, r.aggregate}];
        if (std::isfinite(r.h_hat)) acc.values.push_back(r.h_hat);
        acc.valid += r.valid_pairs;
        acc.excluded += r.excluded_pairs;
    }
    std::vector<CellMetrics> out;
    for (const auto& [key, acc] : cells) {
        if (acc.values.size() < 2) {
            std::cerr << "warning: cell (H=" << std::get<0>(key) << ", sigma="
                      << std::get<1>(key) << ", " << std::get<2>(key) << ", "
                      << std::get<3>(key) << ") has fewer than 2 usable records; omitted\n";
            continue;
        }
        CellMetrics m;
        m.h_true = std::get<0>(key);
        m.sigma_eps = std::get<1>(key);
        m.method = std::get<2>(key);
        m.aggregate = std::get<3>(key);
        m.n = static_cast<int>(acc.values.size());
        double mean = 0.0;
        for (double v : acc.values) mean += v;
        mean /= static_cast<double>(m.n);
        double ss = 0.0, mse = 0.0;
        for (double v : acc.values) {
            ss += (v - mean) * (v - mean);
            mse += (v - m.h_true) * (v - m.h_true);
        }
        m.mean = mean;
        m.sd = std::sqrt(ss / static_cast<double>(m.n - 1));
        m.bias = mean - m.h_true;
        m.mse = mse / static_cast<double>(m.n);
        const long total = acc.valid + acc.excluded;
        m.exclusion_rate = total > 0 ? static_cast<double>(acc.excluded) /
                                           static_cast<double>(total)
                                     : 0.0;
        out.push_back(std::move(m));
    }
    return out;
}

void write_metrics_csv(const std::vector<CellMetrics>& metrics, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "h_true,sigma_eps,method,aggregate,mean,sd,bias,mse,exclusion_rate,n\n";
    for (const CellMetrics& m : metrics) {
        out << format_double(m.h_true) << ',' << format_double(m.sigma_eps) << ','
            << m.method << ',' << m.aggregate << ',' << format_double(m.mean) << ','
            << format_double(m.sd) << ',' << format_double(m.bias) << ','
            << format_double(m.mse) << ',' << format_double(m.exclusion_rate) << ','
            << m.n << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

TrainingMatrix build_training_matrix(const ExperimentConfig& config, double sigma_eps) {
    config.validate();
    if (std::find(config.methods.begin(), config.methods.end(), "nc_alphee") ==
        config.methods.end()) {
        throw std::invalid_argument("build_training_matrix: nc_alphee must be among methods");
    }
    const WaveletFilter filter = make_filter(config.filter);
    const int bigj = log2_exact(config.signal_length);
    const LevelRange range = config.range_for("nn");
    const int j0 = std::max(0, std::min(range.j_min, bigj - 1));

    TrainingMatrix tm;
    tm.sigma_eps = sigma_eps;
    for (int j1 = range.j_min; j1 < range.j_max; ++j1) {
        for (int j2 = j1 + 1; j2 <= range.j_max; ++j2) {
            tm.pair_order.emplace_back(j1, j2);
        }
    }
    const std::size_t n_rows = config.h_grid.size() * static_cast<std::size_t>(config.replicates);
    tm.features.resize(static_cast<Eigen::Index>(n_rows),
                       static_cast<Eigen::Index>(tm.pair_order.size()));
    tm.targets.resize(static_cast<Eigen::Index>(n_rows));

    std::vector<FbmGenerator> generators;
    generators.reserve(config.h_grid.size());
    for (double h : config.h_grid) generators.emplace_back(config.signal_length, h);

    const std::size_t si = grid_index(config.noise_grid, sigma_eps);
    const std::size_t n_r = static_cast<std::size_t>(config.replicates);

    std::vector<std::string> row_errors(n_rows);
    parallel_for(n_rows, [&](std::size_t row) {
        const std::size_t hi = row / n_r;
        const int r = static_cast<int>(row % n_r);
        const std::uint64_t seed = replicate_seed(config.base_seed, hi, si, r);
        const ReplicateAnalysis a =
            analyze(config, filter, generators[hi], sigma_eps, seed, j0);
        const std::vector<PairEstimate> pairs = all_pair_estimates(
            a.energies, range.j_min, range.j_max, PairMethod::nc_alphee, a.noise);
        std::vector<double> features;
        if (!nn_features(pairs, tm.pair_order, features)) {
            row_errors[row] = "no valid pair for H=" + format_double(config.h_grid[hi]) +
                              " replicate " + std::to_string(r);
            return;
        }
        for (std::size_t c = 0; c < features.size(); ++c) {
            tm.features(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(c)) =
                features[c];
        }
        tm.targets(static_cast<Eigen::Index>(row)) = config.h_grid[hi];
    });
    for (const std::string& err : row_errors) {
        if (!err.empty()) {
            throw std::runtime_error("build_training_matrix: " + err);
        }
    }
    return tm;
}

std::vector<ReplicateDetail> run_cell_detailed(const ExperimentConfig& config,
                                               double h_true, double sigma_eps,
                                               const std::string& method,
                                               const std::string& aggregate) {
    config.validate();
    if (known_methods().count(method) == 0 || method == "standard") {
        throw std::invalid_argument("run_cell_detailed: method must be alphee or nc_alphee");
    }
    const WaveletFilter filter = make_filter(config.filter);
    const int bigj = log2_exact(config.signal_length);
    const LevelRange range = aggregate == "nn" ? config.range_for("nn")
                                               : config.range_for(method);
    const int j0 = std::max(0, std::min(range.j_min, bigj - 1));

    std::optional<MlpModel> model;
    if (aggregate == "nn") {
        if (config.model_path.empty()) {
            throw std::invalid_argument("run_cell_detailed: aggregate 'nn' requires model_path");
        }
        model = model_load(config.model_path);
    }

    const FbmGenerator gen(config.signal_length, h_true);
    const std::size_t hi = grid_index(config.h_grid, h_true);
    const std::size_t si = grid_index(config.noise_grid, sigma_eps);
    const std::size_t n_r = static_cast<std::size_t>(config.replicates);

    std::vector<ReplicateDetail> details(n_r);
    parallel_for(n_r, [&](std::size_t r) {
        const std::uint64_t seed = replicate_seed(config.base_seed, hi, si, static_cast<int>(r));
        const ReplicateAnalysis a = analyze(config, filter, gen, sigma_eps, seed, j0);
        ReplicateDetail& d = details[r];
        d.pairs = all_pair_estimates(
            a.energies, range.j_min, range.j_max,
            method == "alphee" ? PairMethod::alphee : PairMethod::nc_alphee, a.noise);
        const AggregateOutcome out =
            aggregate_pairs(d.pairs, aggregate, model.has_value() ? &*model : nullptr);
        d.aggregate = out.h_hat;
    });
    return details;
}

PairReliabilityMap pair_reliability(const std::vector<ReplicateDetail>& details,
                                    double h_true, int j_min, int j_max) {
    std::vector<double> preds;
    for (const ReplicateDetail& d : details) {
        if (std::isfinite(d.aggregate)) preds.push_back(d.aggregate);
    }
    if (preds.size() < 2) {
        throw std::runtime_error("pair_reliability: not enough aggregate predictions");
    }
    double mean = 0.0;
    for (double v : preds) mean += v;
    mean /= static_cast<double>(preds.size());
    double ss = 0.0;
    for (double v : preds) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(preds.size() - 1));
    if (!(sd > 0.0)) {
        throw std::runtime_error("pair_reliability: degenerate band (sd = 0)");
    }

    PairReliabilityMap map;
    map.h_true = h_true;
    map.band_half_width = 2.0 * sd;
    const double lo = mean - map.band_half_width;
    const double hi = mean + map.band_half_width;

    std::map<std::pair<int, int>, int> counts;
    for (int j1 = j_min; j1 < j_max; ++j1) {
        for (int j2 = j1 + 1; j2 <= j_max; ++j2) counts[{j1, j2}] = 0;
    }
    for (const ReplicateDetail& d : details) {
        for (const PairEstimate& p : d.pairs) {
            if (!p.valid) continue;
            auto it = counts.find({p.j1, p.j2});
            if (it == counts.end()) continue;
            if (*p.h_hat >= lo && *p.h_hat <= hi) ++it->second;
        }
    }
    map.counts.assign(counts.begin(), counts.end());
    return map;
}

void write_pairmap_csv(const PairReliabilityMap& map, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "j1,j2,count\n";
    for (const auto& [pair, count] : map.counts) {
        out << pair.first << ',' << pair.second << ',' << count << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace hurst
