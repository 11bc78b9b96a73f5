#include <pybind11/pybind11.h>
#include <pybind11/numpy.h>
#include <pybind11/stl.h>

#include "hurst/aggregation.hpp"
#include "hurst/estimators.hpp"
#include "hurst/fbm.hpp"
#include "hurst/harness.hpp"
#include "hurst/mlp.hpp"
#include "hurst/signal.hpp"
#include "hurst/special_functions.hpp"
#include "hurst/wavelet.hpp"

namespace py = pybind11;
using namespace hurst;

namespace {

Signal signal_from_array(py::array_t<double, py::array::c_style | py::array::forcecast> a) {
    if (a.ndim() != 1) throw std::invalid_argument("signal must be a 1-d array");
    Signal s;
    s.samples.assign(a.data(), a.data() + a.size());
    return s;
}

py::array_t<double> array_from_vector(const std::vector<double>& v) {
    return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::dict pair_to_dict(const PairEstimate& p) {
    py::dict d;
    d["j1"] = p.j1;
    d["j2"] = p.j2;
    d["valid"] = p.valid;
    d["h_hat"] = p.valid ? py::object(py::float_(*p.h_hat)) : py::none();
    d["variance"] = p.valid ? py::object(py::float_(*p.variance)) : py::none();
    d["reason"] = to_string(p.reason);
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Wavelet level-pairwise Hurst exponent estimation (ALPHEE / NC-ALPHEE)";

    m.def("digamma", &digamma, py::arg("x"));
    m.def("trigamma", &trigamma, py::arg("x"));
    m.def("log_chi2_moments", [](int dof) {
        const LogChiSquaredMoments mo = log_chi2_moments(dof);
        return py::make_tuple(mo.mean, mo.variance);
    }, py::arg("dof"));

    m.def("fgn_autocovariance", &fgn_autocovariance, py::arg("hurst"), py::arg("lag"));

    m.def("generate_fbm",
          [](std::size_t length, double hurst, double sigma_x, std::uint64_t seed) {
              SignalSpec spec{length, hurst, sigma_x, 0.0, seed};
              return array_from_vector(generate_fbm(spec).samples);
          },
          py::arg("length"), py::arg("hurst"), py::arg("sigma_x") = 1.0,
          py::arg("seed") = 0);

    m.def("add_noise",
          [](py::array_t<double, py::array::c_style | py::array::forcecast> x,
             double sigma_eps, std::uint64_t seed) {
              return array_from_vector(add_noise(signal_from_array(x), sigma_eps, seed).samples);
          },
          py::arg("signal"), py::arg("sigma_eps"), py::arg("seed") = 0);

    m.def("remove_bridge",
          [](py::array_t<double, py::array::c_style | py::array::forcecast> x) {
              return array_from_vector(remove_bridge(signal_from_array(x)).samples);
          },
          py::arg("signal"));

    m.def("filter_info", [](const std::string& name) {
        const WaveletFilter f = make_filter(name);
        py::dict d;
        d["name"] = f.name;
        d["lowpass"] = array_from_vector(f.lowpass);
        d["highpass"] = array_from_vector(f.highpass);
        d["vanishing_moments"] = f.vanishing_moments;
        return d;
    }, py::arg("name"));

    m.def("dwt",
          [](py::array_t<double, py::array::c_style | py::array::forcecast> x,
             const std::string& filter_name, int j0) {
              const WaveletDecomposition d =
                  dwt(signal_from_array(x), make_filter(filter_name), j0);
              py::dict details;
              for (int j = d.j0; j <= d.j_max; ++j) {
                  details[py::int_(j)] = array_from_vector(d.detail(j));
              }
              return py::make_tuple(array_from_vector(d.approx), details);
          },
          py::arg("signal"), py::arg("filter") = "sym6", py::arg("j0") = 3);

    m.def("level_energies",
          [](py::array_t<double, py::array::c_style | py::array::forcecast> x,
             const std::string& filter_name, int j_min, int j_max, bool detrend) {
              Signal s = signal_from_array(x);
              if (detrend) s = remove_bridge(s);
              const int bigj = log2_exact(s.size());
              const int top = j_max < 0 ? bigj - 1 : j_max;
              const WaveletDecomposition d = dwt(s, make_filter(filter_name),
                                                 std::min(j_min, bigj - 1));
              py::list out;
              for (const LevelEnergy& e : level_energies(d, j_min, std::min(top, d.j_max))) {
                  py::dict de;
                  de["level"] = e.level;
                  de["count"] = e.count;
                  de["mean_sq"] = e.mean_sq;
                  de["log2_energy"] = e.log2_energy;
                  out.append(de);
              }
              return out;
          },
          py::arg("signal"), py::arg("filter") = "sym6", py::arg("j_min") = 3,
          py::arg("j_max") = -1, py::arg("detrend") = true);

    m.def("estimate",
          [](py::array_t<double, py::array::c_style | py::array::forcecast> x,
             const std::string& method, const std::string& filter_name, int j_min,
             int j_max, py::object fixed_noise, bool detrend) {
              Signal s = signal_from_array(x);
              if (detrend) s = remove_bridge(s);
              const WaveletFilter filter = make_filter(filter_name);
              const int bigj = log2_exact(s.size());
              const int j0 = std::max(0, std::min(j_min, bigj - 1));
              const WaveletDecomposition d = dwt(s, filter, j0);
              const auto energies = level_energies(d, j0, d.j_max);
              const NoiseEstimate noise =
                  fixed_noise.is_none() ? estimate_noise_variance(d)
                                        : NoiseEstimate{fixed_noise.cast<double>(), d.j_max};
              py::dict out;
              out["noise_sigma_eps_sq"] = noise.sigma_eps_sq;
              if (method == "standard") {
                  const SpectrumFit fit =
                      spectrum_regression(energies, j_min, std::min(j_max, d.j_max));
                  out["h_hat"] = fit.h_hat;
                  out["beta0"] = fit.beta0;
                  out["beta1"] = fit.beta1;
                  return out;
              }
              const auto pairs = all_pair_estimates(
                  energies, j_min, j_max,
                  method == "alphee" ? PairMethod::alphee : PairMethod::nc_alphee, noise);
              py::list plist;
              for (const PairEstimate& p : pairs) plist.append(pair_to_dict(p));
              out["pairs"] = plist;
              const WeightedCandidates cand = normalize_weights(pairs);
              out["wmean"] = weighted_mean(cand);
              out["wmedian"] = weighted_median(cand);
              out["mean"] = arithmetic_aggregate(cand.estimates, ArithmeticKind::mean);
              out["median"] = arithmetic_aggregate(cand.estimates, ArithmeticKind::median);
              out["valid_pairs"] = cand.estimates.size();
              out["excluded_pairs"] = cand.excluded_count;
              return out;
          },
          py::arg("signal"), py::arg("method") = "nc_alphee", py::arg("filter") = "sym6",
          py::arg("j_min") = 3, py::arg("j_max") = 13, py::arg("fixed_noise") = py::none(),
          py::arg("detrend") = true);

    m.def("weighted_mean_median",
          [](const std::vector<double>& estimates, const std::vector<double>& variances) {
              if (estimates.size() != variances.size()) {
                  throw std::invalid_argument("estimates/variances length mismatch");
              }
              std::vector<PairEstimate> pairs;
              for (std::size_t i = 0; i < estimates.size(); ++i) {
                  PairEstimate p;
                  p.j1 = static_cast<int>(i);
                  p.j2 = static_cast<int>(i) + 1;
                  p.h_hat = estimates[i];
                  p.variance = variances[i];
                  p.valid = true;
                  pairs.push_back(p);
              }
              const WeightedCandidates cand = normalize_weights(pairs);
              return py::make_tuple(weighted_mean(cand), weighted_median(cand));
          },
          py::arg("estimates"), py::arg("variances"));

    m.def("run_sweep_csv",
          [](const std::string& config_json, const std::string& out_path) {
              write_results_csv(run_sweep(config_from_json_string(config_json)), out_path);
          },
          py::arg("config_json"), py::arg("out_path"));

    m.def("mlp_forward_file",
          [](const std::string& model_path, const std::vector<double>& features) {
              const MlpModel model = model_load(model_path);
              return mlp_forward(model, features);
          },
          py::arg("model_path"), py::arg("features"));
}
