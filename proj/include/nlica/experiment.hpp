// Config-driven experiment runner: parses a strict JSON experiment
// description, executes it across seeds (optionally in parallel), and
// persists plot-ready CSV/JSON outputs plus calibration fixtures.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "nlica/metrics.hpp"
#include "nlica/sources.hpp"
#include "nlica/train_config.hpp"

namespace nlica {

enum class ExperimentKind {
    linear_bss,       // FastICA vs PCA on (usually linear) mixtures
    tcl_pipeline,     // segment classification + linear ICA, untrained control
    pcl_pipeline,     // temporal-pair discrimination, PCA baseline
    gcl_pipeline,     // aux-variable discrimination
    mle_pipeline,     // relative-gradient likelihood unmixing
    darmois_demo,     // independent-but-wrong construction
    comparison_grid,  // explicit method list on shared data
};

std::string kind_name(ExperimentKind k);

enum class SourceKind { nonstationary, ar, nonstat_ar };
enum class AuxChoice { none, segment_label, lagged };

struct DataSpec {
    SourceKind source = SourceKind::nonstationary;
    NonstationarySpec nonstationary;
    NonstatArSpec nonstat_ar;  // holds the plain ArSpec for source == ar too
    AuxChoice aux = AuxChoice::none;

    int dims() const;
    int length() const;  // T before any aux-induced row drop
};

struct MixingSpec {
    int layers = 0;  // 0 = identity mixing
    double condition_bound = 10.0;
    double alpha = 0.2;
};

struct EvalSpec {
    CorrMode mode = CorrMode::pearson;
    bool abs_target = false;   // score against |s_true| (TCL-family convention)
    bool compose_ica = false;  // rotate features with linear ICA before scoring
};

struct ExperimentConfig {
    int version = 1;
    ExperimentKind kind = ExperimentKind::linear_bss;
    DataSpec data;
    MixingSpec mixing;
    TrainConfig train;
    EvalSpec eval;
    bool eval_explicit = false;  // config carried an eval block; overrides
                                 // the per-kind scoring defaults
    int n_seeds = 1;
    std::uint64_t master_seed = 0;
    std::string out_dir;                // optional; resolution order is
                                        // --out > config > $NLICA_OUT_ROOT
    std::vector<std::string> methods;   // comparison-grid only

    // Strict parse: unknown keys, wrong types, and every cross-field
    // violation are collected and thrown together as one ConfigError.
    static ExperimentConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;  // canonical form (defaults filled)
    void validate() const;
    std::string config_hash() const;  // stable 16-hex-digit digest

    // The method rows this experiment produces per seed.
    std::vector<std::string> method_list() const;
    // Scoring convention for one method, honoring any explicit eval block.
    EvalSpec eval_for(const std::string& method) const;
};

struct ResultRecord {
    int seed_index = 0;
    std::uint64_t seed = 0;
    std::string method;
    double mcc = 0.0;      // NaN when failed
    double pretext = 0.0;  // NaN when not applicable
    bool ok = true;
    std::string status = "ok";
    double seconds = 0.0;
};

struct RunOptions {
    std::string out_dir;  // overrides config/env resolution when set
    int seeds = 0;        // 0 = use config
    int jobs = 1;
};

struct RunSummary {
    std::string out_dir;
    std::string config_hash;
    int n_failed = 0;
    std::vector<ResultRecord> records;  // sorted by (seed_index, method)
};

// Environment variable naming the default output root.
inline constexpr const char* kOutRootEnv = "NLICA_OUT_ROOT";

std::string resolve_out_dir(const ExperimentConfig& cfg, const std::string& override_dir);

// Executes every seed (crash-isolated), writes results.csv,
// report_<seed>.json and signals_<seed>.csv into the resolved directory.
RunSummary run_experiment(const ExperimentConfig& cfg, const RunOptions& opt);

// run_experiment plus fixtures.json with mean / sd / (mean - 2 sd)
// thresholds per metric. Refuses fewer than 5 seeds.
RunSummary calibrate_experiment(const ExperimentConfig& cfg, const RunOptions& opt);

// The dataset a given seed index sees (sources, mixing, aux attached).
Dataset experiment_dataset(const ExperimentConfig& cfg, int seed_index);

}  // namespace nlica
