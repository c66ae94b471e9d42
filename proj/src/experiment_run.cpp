#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "nlica/contrastive.hpp"
#include "nlica/darmois.hpp"
#include "nlica/errors.hpp"
#include "nlica/experiment.hpp"
#include "nlica/hsic.hpp"
#include "nlica/mixing.hpp"
#include "nlica/mle.hpp"
#include "nlica/rng.hpp"

namespace nlica {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Stream ids hung off each seed's master stream; the generators themselves
// derive further substreams, so these only need to be mutually distinct.
constexpr std::uint64_t kMixingStream = 0x6d6978;  // "mix"
constexpr std::uint64_t kIcaStream = 0xfa;
constexpr std::uint64_t kHsicStream = 0xda;

Tensor abs_of(const Tensor& a) {
    return a.map([](double v) { return std::fabs(v); });
}

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path.string() + " for writing");
    f << content;
    f.flush();
    if (!f) throw Error("failed writing " + path.string());
}

std::string csv_number(double v) {
    return std::isfinite(v) ? format_double(v) : std::string();
}

// Keeps free-form failure text from breaking the CSV row structure.
std::string sanitize_status(std::string s) {
    for (char& c : s) {
        if (c == ',') c = ';';
        if (c == '\n' || c == '\r') c = ' ';
    }
    return s;
}

struct MethodRun {
    Tensor z;
    double mcc = kNaN;
    double pretext = kNaN;
    bool converged = true;
    std::optional<EstimatorResult> est;
    json detail = json::object();
};

MethodRun execute_method(const std::string& method, const ExperimentConfig& cfg,
                         const Dataset& ds, std::uint64_t seed) {
    MethodRun out;
    const EvalSpec ev = cfg.eval_for(method);
    TrainConfig tc = cfg.train;
    tc.seed = seed;

    if (method == "fastica") {
        IcaResult r = linear_ica(ds.x, ds.x.cols(), derive_stream(seed, kIcaStream));
        out.z = r.z;
        out.converged = r.converged;
        out.detail["iterations"] = r.iterations;
    } else if (method == "pca") {
        out.z = pca_baseline(ds.x, ds.x.cols());
    } else if (method == "darmois") {
        out.z = darmois_transform(ds.x);
        std::vector<double> ks;
        for (int j = 0; j < out.z.cols(); ++j) {
            std::vector<double> column(static_cast<std::size_t>(out.z.rows()));
            for (int t = 0; t < out.z.rows(); ++t) column[static_cast<std::size_t>(t)] = out.z(t, j);
            ks.push_back(ks_uniformity(column));
        }
        out.detail["ks"] = ks;
        std::vector<double> a(static_cast<std::size_t>(out.z.rows()));
        std::vector<double> b(a.size());
        for (int t = 0; t < out.z.rows(); ++t) {
            a[static_cast<std::size_t>(t)] = out.z(t, 0);
            b[static_cast<std::size_t>(t)] = out.z(t, 1);
        }
        HsicResult h = hsic_independence(a, b, 200, derive_stream(seed, kHsicStream));
        out.detail["hsic"] = {{"statistic", h.statistic},
                              {"threshold", h.threshold},
                              {"reject", h.reject},
                              {"n_used", h.n_used},
                              {"n_permutations", h.n_permutations}};
    } else {
        EstimatorResult r;
        if (method == "tcl") {
            r = train_tcl(ds, tc);
        } else if (method == "tcl-untrained") {
            r.extractor = tcl_initial_extractor(ds, tc);
            r.z = r.extractor.forward(ds.x);
            r.method = "tcl-untrained";
            r.pretext_metric = kNaN;
        } else if (method == "pcl") {
            r = train_pcl(ds, tc);
        } else if (method == "gcl") {
            r = train_gcl(ds, tc);
        } else if (method == "mle") {
            r = train_mle(ds, tc);
        } else {
            throw ContractError("unknown method \"" + method + "\"");
        }
        if (ev.compose_ica) r = compose_linear_ica(r, ds, tc.seed);
        out.z = r.z;
        out.pretext = method == "tcl-untrained" ? kNaN : r.pretext_metric;
        out.converged = r.converged;
        out.est = std::move(r);
    }

    if (ds.has_sources()) {
        const Tensor target = ev.abs_target ? abs_of(ds.s_true) : ds.s_true;
        const MatchReport m = mcc_score(target, out.z, ev.mode);
        out.mcc = m.mcc;
        out.detail["match"] = match_report_json(m);
        out.detail["eval_mode"] = corr_mode_name(ev.mode);
        out.detail["eval_target"] = ev.abs_target ? "abs-sources" : "sources";
    }
    return out;
}

void write_signals_csv(const fs::path& path, const Dataset& ds, const Tensor& z) {
    std::string out;
    bool first = true;
    if (ds.has_sources()) {
        for (int j = 1; j <= ds.s_true.cols(); ++j) {
            if (!first) out += ',';
            out += "s" + std::to_string(j);
            first = false;
        }
    }
    for (int j = 1; j <= z.cols(); ++j) {
        if (!first) out += ',';
        out += "z" + std::to_string(j);
        first = false;
    }
    out += '\n';
    for (int t = 0; t < z.rows(); ++t) {
        first = true;
        if (ds.has_sources()) {
            for (int j = 0; j < ds.s_true.cols(); ++j) {
                if (!first) out += ',';
                out += format_double(ds.s_true(t, j));
                first = false;
            }
        }
        for (int j = 0; j < z.cols(); ++j) {
            if (!first) out += ',';
            out += format_double(z(t, j));
            first = false;
        }
        out += '\n';
    }
    write_text_file(path, out);
}

struct SeedOutput {
    std::vector<ResultRecord> records;
};

SeedOutput run_seed(const ExperimentConfig& cfg, int seed_index, const fs::path& dir) {
    const std::uint64_t seed = derive_stream(cfg.master_seed, static_cast<std::uint64_t>(seed_index));
    const std::vector<std::string> methods = cfg.method_list();
    const std::string tag = std::to_string(seed_index);

    SeedOutput out;
    json report;
    report["config_hash"] = cfg.config_hash();
    report["kind"] = kind_name(cfg.kind);
    report["seed_index"] = seed_index;
    report["seed"] = seed;
    json methods_json = json::object();

    Dataset ds;
    std::string data_error;
    try {
        ds = experiment_dataset(cfg, seed_index);
    } catch (const std::exception& e) {
        data_error = e.what();
    }

    bool wrote_signals = false;
    for (const std::string& method : methods) {
        ResultRecord rec;
        rec.seed_index = seed_index;
        rec.seed = seed;
        rec.method = method;
        json mj = json::object();
        const auto t0 = std::chrono::steady_clock::now();
        if (!data_error.empty()) {
            rec.ok = false;
            rec.status = "error: data: " + data_error;
            rec.mcc = kNaN;
            rec.pretext = kNaN;
            mj["error"] = "data: " + data_error;
        } else {
            try {
                MethodRun mr = execute_method(method, cfg, ds, seed);
                rec.mcc = mr.mcc;
                rec.pretext = mr.pretext;
                mj = std::move(mr.detail);
                mj["converged"] = mr.converged;
                if (std::isfinite(mr.mcc)) mj["mcc"] = mr.mcc;
                if (std::isfinite(mr.pretext)) mj["pretext"] = mr.pretext;
                if (mr.est.has_value() && !mr.est->extractor.layers.empty()) {
                    const std::string weights_name = "weights_" + tag + "_" + method + ".json";
                    write_text_file(dir / weights_name,
                                    mlp_weights_json(mr.est->extractor).dump(2) + "\n");
                    mj["weights"] = weights_name;
                    if (!mr.est->curve.empty()) {
                        const std::string curve_name = "curve_" + tag + "_" + method + ".csv";
                        write_curve_csv(mr.est->curve, (dir / curve_name).string());
                        mj["curve"] = curve_name;
                    }
                }
                if (!wrote_signals) {
                    const std::string signals_name = "signals_" + tag + ".csv";
                    write_signals_csv(dir / signals_name, ds, mr.z);
                    report["signals"] = signals_name;
                    report["signals_method"] = method;
                    wrote_signals = true;
                }
            } catch (const std::exception& e) {
                rec.ok = false;
                rec.status = std::string("error: ") + e.what();
                rec.mcc = kNaN;
                rec.pretext = kNaN;
                mj["error"] = e.what();
            }
        }
        rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        mj["seconds"] = rec.seconds;
        methods_json[method] = std::move(mj);
        out.records.push_back(std::move(rec));
    }

    report["methods"] = std::move(methods_json);
    write_text_file(dir / ("report_" + tag + ".json"), report.dump(2) + "\n");
    return out;
}

void write_results_csv(const fs::path& path, const std::string& hash,
                       const std::vector<ResultRecord>& records) {
    std::string out = "config_hash,seed_index,seed,method,mcc,pretext,status,seconds\n";
    for (const ResultRecord& r : records) {
        out += hash;
        out += ',' + std::to_string(r.seed_index);
        out += ',' + std::to_string(r.seed);
        out += ',' + r.method;
        out += ',' + csv_number(r.mcc);
        out += ',' + csv_number(r.pretext);
        out += ',' + sanitize_status(r.status);
        out += ',' + format_double(r.seconds);
        out += '\n';
    }
    write_text_file(path, out);
}

json stat_block(const std::vector<double>& values) {
    const int n = static_cast<int>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double sd = 0.0;
    if (n >= 2) {
        double ss = 0.0;
        for (double v : values) ss += (v - mean) * (v - mean);
        sd = std::sqrt(ss / (n - 1));
    }
    json b;
    b["count"] = n;
    b["values"] = values;
    b["mean"] = mean;
    b["sd"] = sd;
    b["threshold"] = mean - 2.0 * sd;
    return b;
}

}  // namespace

Dataset experiment_dataset(const ExperimentConfig& cfg, int seed_index) {
    const std::uint64_t seed = derive_stream(cfg.master_seed, static_cast<std::uint64_t>(seed_index));
    Dataset ds;
    switch (cfg.data.source) {
        case SourceKind::nonstationary:
            ds = generate_nonstationary_sources(cfg.data.nonstationary, seed);
            break;
        case SourceKind::ar:
            ds = generate_ar_sources(cfg.data.nonstat_ar.ar, seed);
            break;
        case SourceKind::nonstat_ar:
            ds = generate_nonstat_ar_sources(cfg.data.nonstat_ar, seed);
            break;
    }
    if (cfg.mixing.layers > 0) {
        const MixingNetwork net =
            build_mixing(cfg.data.dims(), cfg.mixing.layers, cfg.mixing.condition_bound,
                         derive_stream(seed, kMixingStream), cfg.mixing.alpha);
        ds = apply_mixing(net, ds);
    }
    switch (cfg.data.aux) {
        case AuxChoice::none: break;
        case AuxChoice::segment_label: ds = attach_auxiliary(ds, AuxMode::segment_label); break;
        case AuxChoice::lagged: ds = attach_auxiliary(ds, AuxMode::lagged_observation); break;
    }
    return ds;
}

std::string resolve_out_dir(const ExperimentConfig& cfg, const std::string& override_dir) {
    if (!override_dir.empty()) return override_dir;
    if (!cfg.out_dir.empty()) return cfg.out_dir;
    const char* root = std::getenv(kOutRootEnv);
    const std::string base = (root != nullptr && *root != '\0') ? root : "runs";
    return base + "/" + kind_name(cfg.kind) + "-" + cfg.config_hash().substr(0, 8);
}

RunSummary run_experiment(const ExperimentConfig& cfg, const RunOptions& opt) {
    ExperimentConfig c = cfg;
    if (opt.seeds > 0) c.n_seeds = opt.seeds;
    c.validate();
    if (opt.jobs < 1) throw ConfigError("jobs must be at least 1");

    const fs::path dir = resolve_out_dir(c, opt.out_dir);
    fs::create_directories(dir);

    std::vector<SeedOutput> outputs(static_cast<std::size_t>(c.n_seeds));
    const int jobs = std::min(opt.jobs, c.n_seeds);
    if (jobs <= 1) {
        for (int i = 0; i < c.n_seeds; ++i) outputs[static_cast<std::size_t>(i)] = run_seed(c, i, dir);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> workers;
        workers.reserve(static_cast<std::size_t>(jobs));
        for (int w = 0; w < jobs; ++w) {
            workers.emplace_back([&] {
                for (int i = next.fetch_add(1); i < c.n_seeds; i = next.fetch_add(1)) {
                    outputs[static_cast<std::size_t>(i)] = run_seed(c, i, dir);
                }
            });
        }
        for (std::thread& w : workers) w.join();
    }

    RunSummary summary;
    summary.out_dir = dir.string();
    summary.config_hash = c.config_hash();
    for (const SeedOutput& so : outputs) {
        for (const ResultRecord& r : so.records) {
            if (!r.ok) ++summary.n_failed;
            summary.records.push_back(r);
        }
    }
    write_results_csv(dir / "results.csv", summary.config_hash, summary.records);
    return summary;
}

RunSummary calibrate_experiment(const ExperimentConfig& cfg, const RunOptions& opt) {
    const int seeds = opt.seeds > 0 ? opt.seeds : cfg.n_seeds;
    if (seeds < 5) {
        throw ConfigError("calibration needs at least 5 seeds, got " + std::to_string(seeds));
    }
    RunSummary summary = run_experiment(cfg, opt);

    ExperimentConfig c = cfg;
    c.n_seeds = seeds;
    const std::vector<std::string> methods = c.method_list();

    json metrics = json::object();
    for (const std::string& method : methods) {
        std::vector<double> mccs;
        std::vector<double> pretexts;
        for (const ResultRecord& r : summary.records) {
            if (r.method != method || !r.ok) continue;
            if (std::isfinite(r.mcc)) mccs.push_back(r.mcc);
            if (std::isfinite(r.pretext)) pretexts.push_back(r.pretext);
        }
        if (!mccs.empty()) metrics[method + ".mcc"] = stat_block(mccs);
        if (!pretexts.empty()) metrics[method + ".pretext"] = stat_block(pretexts);
    }

    // Paired separation between the kind's headline method and its control.
    std::string main_method;
    std::string base_method;
    switch (c.kind) {
        case ExperimentKind::linear_bss: main_method = "fastica"; base_method = "pca"; break;
        case ExperimentKind::tcl_pipeline: main_method = "tcl"; base_method = "tcl-untrained"; break;
        case ExperimentKind::pcl_pipeline: main_method = "pcl"; base_method = "pca"; break;
        case ExperimentKind::comparison_grid:
            if (methods.size() >= 2) {
                main_method = methods[0];
                base_method = methods[1];
            }
            break;
        default: break;
    }
    if (!main_method.empty()) {
        std::vector<double> gaps;
        for (int i = 0; i < c.n_seeds; ++i) {
            double main_mcc = kNaN;
            double base_mcc = kNaN;
            for (const ResultRecord& r : summary.records) {
                if (r.seed_index != i || !r.ok) continue;
                if (r.method == main_method) main_mcc = r.mcc;
                if (r.method == base_method) base_mcc = r.mcc;
            }
            if (std::isfinite(main_mcc) && std::isfinite(base_mcc)) {
                gaps.push_back(main_mcc - base_mcc);
            }
        }
        if (!gaps.empty()) {
            metrics["gap." + main_method + "-vs-" + base_method] = stat_block(gaps);
        }
    }

    json fixtures;
    fixtures["version"] = 1;
    fixtures["config_hash"] = summary.config_hash;
    fixtures["kind"] = kind_name(c.kind);
    fixtures["n_seeds"] = seeds;
    fixtures["master_seed"] = c.master_seed;
    fixtures["metrics"] = metrics;
    write_text_file(fs::path(summary.out_dir) / "fixtures.json", fixtures.dump(2) + "\n");
    return summary;
}

}  // namespace nlica
