#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "hurst/harness.hpp"

using namespace hurst;

namespace {

ExperimentConfig tiny_config() {
    ExperimentConfig c;
    c.h_grid = {0.5};
    c.noise_grid = {0.0};
    c.replicates = 3;
    c.signal_length = 1 << 10;
    c.methods = {"alphee", "nc_alphee"};
    c.aggregates = {"wmean", "wmedian"};
    c.level_range["standard"] = {3, 8};
    c.level_range["alphee"] = {3, 8};
    c.level_range["nc_alphee"] = {3, 8};
    c.level_range["nn"] = {3, 9};
    c.base_seed = 42;
    return c;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

ResultRecord rec(double h, double s, const char* m, const char* a, int rep, double hh,
                 int valid = 10, int excluded = 0) {
    ResultRecord r;
    r.h_true = h;
    r.sigma_eps = s;
    r.method = m;
    r.aggregate = a;
    r.replicate = rep;
    r.h_hat = hh;
    r.valid_pairs = valid;
    r.excluded_pairs = excluded;
    r.seed = 1;
    return r;
}

}  // namespace

TEST_CASE("config json round trip and validation") {
    SUBCASE("defaults") {
        const ExperimentConfig c = config_from_json_string("{}");
        CHECK(c.h_grid.size() == 8);
        CHECK(c.noise_grid.size() == 6);
        CHECK(c.replicates == 200);
        CHECK(c.signal_length == (1u << 14));
        CHECK(c.filter == "sym6");
        CHECK(c.range_for("alphee").j_min == 3);
        CHECK(c.range_for("alphee").j_max == 13);
        CHECK(c.range_for("nn").j_max == 15);
        CHECK(c.detrend);
    }
    SUBCASE("exact field names") {
        const char* text = R"({
            "h_grid": [0.3, 0.6],
            "noise_grid": [0.0, 1.0],
            "replicates": 7,
            "signal_length": 4096,
            "filter": "db4",
            "level_range": {"alphee": [4, 9], "nn": [4, 11]},
            "methods": ["alphee"],
            "aggregates": ["wmedian"],
            "base_seed": 99,
            "detrend": false,
            "fixed_noise": 0.25
        })";
        const ExperimentConfig c = config_from_json_string(text);
        CHECK(c.h_grid == std::vector<double>{0.3, 0.6});
        CHECK(c.replicates == 7);
        CHECK(c.filter == "db4");
        CHECK(c.range_for("alphee").j_max == 9);
        CHECK(c.range_for("nn").j_max == 11);
        CHECK(c.range_for("nc_alphee").j_max == 13);  // untouched default
        CHECK_FALSE(c.detrend);
        REQUIRE(c.fixed_noise.has_value());
        CHECK(*c.fixed_noise == 0.25);
    }
    SUBCASE("array level_range applies everywhere") {
        const ExperimentConfig c = config_from_json_string(R"({"level_range": [4, 10]})");
        CHECK(c.range_for("standard").j_min == 4);
        CHECK(c.range_for("nn").j_max == 10);
    }
    SUBCASE("low levels need the override") {
        CHECK_THROWS(config_from_json_string(R"({"level_range": [1, 10]})"));
        const ExperimentConfig c =
            config_from_json_string(R"({"level_range": [1, 10], "allow_low_levels": true})");
        CHECK(c.range_for("alphee").j_min == 1);
    }
    SUBCASE("rejections") {
        CHECK_THROWS(config_from_json_string(R"({"h_grid": [1.5]})"));
        CHECK_THROWS(config_from_json_string(R"({"signal_length": 1000})"));
        CHECK_THROWS(config_from_json_string(R"({"methods": ["ols"]})"));
        CHECK_THROWS(config_from_json_string(R"({"aggregates": ["max"]})"));
        CHECK_THROWS(config_from_json_string("not json"));
    }
}

TEST_CASE("replicate seeds are stable as grids grow") {
    const std::uint64_t s = replicate_seed(17, 2, 1, 5);
    CHECK(replicate_seed(17, 2, 1, 5) == s);
    // depends only on the indices, never on grid contents
    CHECK(replicate_seed(17, 2, 1, 6) != s);
    CHECK(replicate_seed(17, 3, 1, 5) != s);
    CHECK(replicate_seed(18, 2, 1, 5) != s);
}

TEST_CASE("run_sweep record counting contract") {
    const ExperimentConfig c = tiny_config();
    const auto records = run_sweep(c);
    // 1 H x 1 sigma x 3 replicates x 2 methods x 2 aggregates
    CHECK(records.size() == 12);
    std::size_t finite = 0;
    for (const ResultRecord& r : records) {
        if (std::isfinite(r.h_hat)) ++finite;
    }
    CHECK(finite == 12);
}

TEST_CASE("sweep determinism and worker independence") {
    const ExperimentConfig c = tiny_config();
    const char* saved = std::getenv("HURST_THREADS");
    setenv("HURST_THREADS", "1", 1);
    const auto serial = run_sweep(c);
    setenv("HURST_THREADS", "4", 1);
    const auto parallel = run_sweep(c);
    if (saved != nullptr) {
        setenv("HURST_THREADS", saved, 1);
    } else {
        unsetenv("HURST_THREADS");
    }
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        REQUIRE(serial[i].h_hat == parallel[i].h_hat);
        REQUIRE(serial[i].seed == parallel[i].seed);
        REQUIRE(serial[i].method == parallel[i].method);
    }

    write_results_csv(serial, "/tmp/hurst_results_a.csv");
    write_results_csv(parallel, "/tmp/hurst_results_b.csv");
    CHECK(slurp("/tmp/hurst_results_a.csv") == slurp("/tmp/hurst_results_b.csv"));

    const auto back = read_results_csv("/tmp/hurst_results_a.csv");
    REQUIRE(back.size() == serial.size());
    CHECK(back[5].h_hat == serial[5].h_hat);
    CHECK(back[5].seed == serial[5].seed);
}

TEST_CASE("noise-free sweep: alphee and nc-alphee agree end to end") {
    ExperimentConfig c = tiny_config();
    c.replicates = 4;
    const auto records = run_sweep(c);
    for (int rep = 0; rep < 4; ++rep) {
        for (const char* agg : {"wmean", "wmedian"}) {
            double a = 0.0, n = 0.0;
            for (const ResultRecord& r : records) {
                if (r.replicate != rep || r.aggregate != agg) continue;
                if (r.method == "alphee") a = r.h_hat;
                if (r.method == "nc_alphee") n = r.h_hat;
            }
            // sigma_eps = 0 with estimated noise is NOT exactly zero noise;
            // the estimated-sigma path subtracts the finest-level energy. Use
            // fixed zero noise for the strict reduction identity.
            (void)a;
            (void)n;
        }
    }
    ExperimentConfig fixed = c;
    fixed.fixed_noise = 0.0;
    const auto frecords = run_sweep(fixed);
    for (std::size_t i = 0; i < frecords.size(); i += 4) {
        const ResultRecord& r = frecords[i];
        for (const ResultRecord& other : frecords) {
            if (other.replicate == r.replicate && other.aggregate == r.aggregate &&
                other.method != r.method) {
                REQUIRE(std::abs(other.h_hat - r.h_hat) <= 1e-12);
            }
        }
    }
}

TEST_CASE("evaluate_metrics arithmetic") {
    std::vector<ResultRecord> records;
    for (int i = 0; i < 5; ++i) records.push_back(rec(0.5, 0.0, "alphee", "wmean", i, 0.5));
    records.push_back(rec(0.5, 0.0, "alphee", "wmedian", 0, 0.4, 8, 2));
    records.push_back(rec(0.5, 0.0, "alphee", "wmedian", 1, 0.6, 8, 2));
    const auto metrics = evaluate_metrics(records);
    REQUIRE(metrics.size() == 2);

    const CellMetrics& exact = metrics[0].aggregate == "wmean" ? metrics[0] : metrics[1];
    const CellMetrics& spread = metrics[0].aggregate == "wmean" ? metrics[1] : metrics[0];
    CHECK(exact.bias == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(exact.sd == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(spread.mean == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(spread.sd == doctest::Approx(0.1414213562).epsilon(1e-6));
    CHECK(spread.bias == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(spread.exclusion_rate == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(spread.n == 2);

    write_metrics_csv(metrics, "/tmp/hurst_metrics.csv");
    const std::string text = slurp("/tmp/hurst_metrics.csv");
    CHECK(text.rfind("h_true,sigma_eps,method,aggregate,mean,sd,bias,mse,exclusion_rate,n\n", 0) == 0);
}

TEST_CASE("training matrix shape, imputation and determinism") {
    ExperimentConfig c;
    c.h_grid = {0.4, 0.7};
    c.noise_grid = {0.0};
    c.replicates = 3;
    c.signal_length = 1 << 10;  // levels only reach 9: most NN pairs imputed
    c.methods = {"nc_alphee"};
    c.base_seed = 7;
    const TrainingMatrix tm = build_training_matrix(c, 0.0);
    CHECK(tm.pair_order.size() == 78);
    CHECK(tm.features.rows() == 6);
    CHECK(tm.features.cols() == 78);
    for (Eigen::Index i = 0; i < tm.features.size(); ++i) {
        REQUIRE(std::isfinite(tm.features.data()[i]));
    }
    CHECK(tm.targets(0) == 0.4);
    CHECK(tm.targets(5) == 0.7);
    CHECK(tm.pair_order.front() == std::make_pair(3, 4));
    CHECK(tm.pair_order.back() == std::make_pair(14, 15));

    const TrainingMatrix again = build_training_matrix(c, 0.0);
    CHECK((tm.features - again.features).cwiseAbs().maxCoeff() == 0.0);

    ExperimentConfig bad = c;
    bad.methods = {"alphee"};
    CHECK_THROWS(build_training_matrix(bad, 0.0));
}

TEST_CASE("pair reliability map") {
    SUBCASE("all pairs at the aggregate give full counts") {
        std::vector<ReplicateDetail> details;
        for (int r = 0; r < 10; ++r) {
            ReplicateDetail d;
            d.aggregate = 0.6 + 0.01 * (r % 2 == 0 ? 1 : -1);
            for (int j1 = 3; j1 < 5; ++j1) {
                for (int j2 = j1 + 1; j2 <= 5; ++j2) {
                    PairEstimate p;
                    p.j1 = j1;
                    p.j2 = j2;
                    p.valid = true;
                    p.h_hat = d.aggregate;
                    p.variance = 0.01;
                    d.pairs.push_back(p);
                }
            }
            details.push_back(std::move(d));
        }
        const PairReliabilityMap map = pair_reliability(details, 0.6, 3, 5);
        REQUIRE(map.counts.size() == 3);
        for (const auto& [id, count] : map.counts) CHECK(count == 10);
        CHECK(map.band_half_width > 0.0);
        write_pairmap_csv(map, "/tmp/hurst_pairmap.csv");
        CHECK(slurp("/tmp/hurst_pairmap.csv").rfind("j1,j2,count\n", 0) == 0);
    }
    SUBCASE("far-away estimates count zero") {
        std::vector<ReplicateDetail> details;
        for (int r = 0; r < 6; ++r) {
            ReplicateDetail d;
            d.aggregate = 0.5 + 0.001 * r;
            PairEstimate p;
            p.j1 = 3;
            p.j2 = 4;
            p.valid = true;
            p.h_hat = 50.0;
            p.variance = 1.0;
            d.pairs.push_back(p);
            details.push_back(std::move(d));
        }
        const PairReliabilityMap map = pair_reliability(details, 0.5, 3, 4);
        REQUIRE(map.counts.size() == 1);
        CHECK(map.counts[0].second == 0);
    }
    SUBCASE("degenerate band is an error") {
        std::vector<ReplicateDetail> details(3);
        for (auto& d : details) d.aggregate = 0.5;
        CHECK_THROWS(pair_reliability(details, 0.5, 3, 5));
    }
    SUBCASE("detailed cell run produces usable detail") {
        ExperimentConfig c = tiny_config();
        c.replicates = 8;
        const auto details = run_cell_detailed(c, 0.5, 0.0, "alphee", "wmedian");
        REQUIRE(details.size() == 8);
        const PairReliabilityMap map = pair_reliability(details, 0.5, 3, 8);
        CHECK(map.counts.size() == 15);
        int total = 0;
        for (const auto& [id, count] : map.counts) total += count;
        CHECK(total > 0);
    }
}
