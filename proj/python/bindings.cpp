// Python bindings for the core operations: dataset generation from
// experiment configs, the linear baselines and the Darmois construction,
// evaluation metrics, and the config-driven experiment runner.
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "nlica/darmois.hpp"
#include "nlica/errors.hpp"
#include "nlica/experiment.hpp"
#include "nlica/fastica.hpp"
#include "nlica/hsic.hpp"
#include "nlica/metrics.hpp"

namespace py = pybind11;
using nlica::Tensor;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

py::array_t<double> to_array(const Tensor& t) {
    py::array_t<double> a({t.rows(), t.cols()});
    auto buf = a.mutable_unchecked<2>();
    for (py::ssize_t r = 0; r < t.rows(); ++r) {
        for (py::ssize_t c = 0; c < t.cols(); ++c) {
            buf(r, c) = t(static_cast<int>(r), static_cast<int>(c));
        }
    }
    return a;
}

Tensor to_tensor(const DoubleArray& a) {
    if (a.ndim() != 2) throw nlica::DimensionError("expected a 2-d array");
    auto buf = a.unchecked<2>();
    Tensor t = Tensor::zeros(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)));
    for (py::ssize_t r = 0; r < a.shape(0); ++r) {
        for (py::ssize_t c = 0; c < a.shape(1); ++c) {
            t(static_cast<int>(r), static_cast<int>(c)) = buf(r, c);
        }
    }
    return t;
}

std::vector<double> to_column(const DoubleArray& a) {
    if (a.ndim() != 1) throw nlica::DimensionError("expected a 1-d array");
    auto buf = a.unchecked<1>();
    std::vector<double> v(static_cast<std::size_t>(a.shape(0)));
    for (py::ssize_t i = 0; i < a.shape(0); ++i) v[static_cast<std::size_t>(i)] = buf(i);
    return v;
}

nlica::ExperimentConfig config_from_string(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw nlica::ConfigError("config is not valid JSON: " + std::string(e.what()));
    }
    return nlica::ExperimentConfig::from_json(j);
}

py::dict summary_to_dict(const nlica::RunSummary& s) {
    py::dict out;
    out["out_dir"] = s.out_dir;
    out["config_hash"] = s.config_hash;
    out["failed"] = s.n_failed;
    py::list records;
    for (const nlica::ResultRecord& r : s.records) {
        py::dict rec;
        rec["seed_index"] = r.seed_index;
        rec["seed"] = r.seed;
        rec["method"] = r.method;
        rec["mcc"] = r.mcc;
        rec["pretext"] = r.pretext;
        rec["ok"] = r.ok;
        rec["status"] = r.status;
        rec["seconds"] = r.seconds;
        records.append(rec);
    }
    out["records"] = records;
    return out;
}

}  // namespace

PYBIND11_MODULE(_nlica, m) {
    m.doc() = "identifiable nonlinear ICA: estimators, baselines, metrics, "
              "and the experiment runner";

    py::register_exception<nlica::Error>(m, "Error");

    m.def(
        "generate",
        [](const std::string& config_json, int seed_index) {
            const nlica::ExperimentConfig cfg = config_from_string(config_json);
            const nlica::Dataset ds = nlica::experiment_dataset(cfg, seed_index);
            py::dict out;
            out["x"] = to_array(ds.x);
            if (ds.has_sources()) out["s"] = to_array(ds.s_true);
            if (ds.has_segments()) out["segments"] = ds.segments;
            if (ds.has_aux()) out["aux"] = to_array(ds.aux);
            out["seed"] = ds.seed;
            return out;
        },
        py::arg("config_json"), py::arg("seed_index") = 0,
        "Dataset (observations, sources, labels) for one seed of an experiment config.");

    m.def(
        "linear_ica",
        [](const DoubleArray& x, int n_components, std::uint64_t seed) {
            const Tensor xt = to_tensor(x);
            const nlica::IcaResult r =
                nlica::linear_ica(xt, n_components == 0 ? xt.cols() : n_components, seed);
            py::dict out;
            out["z"] = to_array(r.z);
            out["unmixing"] = to_array(r.unmixing);
            out["mean"] = to_array(r.mean);
            out["converged"] = r.converged;
            out["iterations"] = r.iterations;
            return out;
        },
        py::arg("x"), py::arg("n_components") = 0, py::arg("seed") = 0,
        "FastICA with symmetric orthogonalization on PCA-whitened data.");

    m.def(
        "pca",
        [](const DoubleArray& x, int n_components) {
            const Tensor xt = to_tensor(x);
            return to_array(nlica::pca_baseline(xt, n_components == 0 ? xt.cols() : n_components));
        },
        py::arg("x"), py::arg("n_components") = 0,
        "Whitened principal-component projection (rotation-blind baseline).");

    m.def(
        "darmois",
        [](const DoubleArray& x) { return to_array(nlica::darmois_transform(to_tensor(x))); },
        py::arg("x"),
        "Two-dimensional Darmois construction: componentwise-uniform, independent, wrong.");

    m.def(
        "mcc",
        [](const DoubleArray& s_true, const DoubleArray& z, const std::string& mode) {
            nlica::CorrMode cm;
            if (mode == "pearson") {
                cm = nlica::CorrMode::pearson;
            } else if (mode == "spearman") {
                cm = nlica::CorrMode::spearman;
            } else {
                throw nlica::ConfigError("mode must be \"pearson\" or \"spearman\"");
            }
            const nlica::MatchReport r = nlica::mcc_score(to_tensor(s_true), to_tensor(z), cm);
            py::dict out;
            out["mcc"] = r.mcc;
            out["assignment"] = r.assignment;
            out["per_component"] = r.per_component;
            out["mode"] = mode;
            return out;
        },
        py::arg("s_true"), py::arg("z"), py::arg("mode") = "pearson",
        "Mean correlation coefficient under the optimal component assignment.");

    m.def(
        "ks_uniformity",
        [](const DoubleArray& column) { return nlica::ks_uniformity(to_column(column)); },
        py::arg("column"), "Kolmogorov-Smirnov distance to the uniform law on (0, 1).");

    m.def(
        "hsic",
        [](const DoubleArray& a, const DoubleArray& b, int n_permutations, std::uint64_t seed) {
            const nlica::HsicResult r =
                nlica::hsic_independence(to_column(a), to_column(b), n_permutations, seed);
            py::dict out;
            out["statistic"] = r.statistic;
            out["threshold"] = r.threshold;
            out["reject"] = r.reject;
            out["n_used"] = r.n_used;
            out["n_permutations"] = r.n_permutations;
            return out;
        },
        py::arg("a"), py::arg("b"), py::arg("n_permutations") = 200, py::arg("seed") = 0,
        "HSIC independence test with a permutation null.");

    m.def(
        "validate_config",
        [](const std::string& config_json) {
            const nlica::ExperimentConfig cfg = config_from_string(config_json);
            py::dict out;
            out["config_hash"] = cfg.config_hash();
            out["kind"] = nlica::kind_name(cfg.kind);
            out["seeds"] = cfg.n_seeds;
            out["canonical"] = cfg.to_json().dump();
            return out;
        },
        py::arg("config_json"),
        "Strictly validate an experiment config; raises Error listing every violation.");

    m.def(
        "run_experiment",
        [](const std::string& config_json, const std::string& out_dir, int seeds, int jobs) {
            const nlica::ExperimentConfig cfg = config_from_string(config_json);
            nlica::RunOptions opt;
            opt.out_dir = out_dir;
            opt.seeds = seeds;
            opt.jobs = jobs;
            return summary_to_dict(nlica::run_experiment(cfg, opt));
        },
        py::arg("config_json"), py::arg("out_dir") = "", py::arg("seeds") = 0,
        py::arg("jobs") = 1,
        "Run an experiment config across seeds; writes results/report/signal files.");

    m.def(
        "calibrate_experiment",
        [](const std::string& config_json, const std::string& out_dir, int seeds, int jobs) {
            const nlica::ExperimentConfig cfg = config_from_string(config_json);
            nlica::RunOptions opt;
            opt.out_dir = out_dir;
            opt.seeds = seeds;
            opt.jobs = jobs;
            return summary_to_dict(nlica::calibrate_experiment(cfg, opt));
        },
        py::arg("config_json"), py::arg("out_dir") = "", py::arg("seeds") = 0,
        py::arg("jobs") = 1,
        "Run >= 5 seeds and freeze per-metric mean/sd/(mean - 2 sd) into fixtures.json.");
}
