// Acceptance gate: one PASS/FAIL line per criterion, every tolerance pinned
// below. Exit code 0 only when all twelve hold. Criteria with calibrated
// thresholds read the frozen fixtures committed under tests/fixtures/.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "nlica/contrastive.hpp"
#include "nlica/darmois.hpp"
#include "nlica/errors.hpp"
#include "nlica/experiment.hpp"
#include "nlica/hsic.hpp"
#include "nlica/linalg.hpp"
#include "nlica/mixing.hpp"
#include "nlica/mle.hpp"
#include "nlica/mlp.hpp"
#include "nlica/rng.hpp"
#include "nlica/tape.hpp"

using namespace nlica;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// ---- pinned tolerances ------------------------------------------------------
constexpr double kGradTol = 1e-5;          // criterion 1
constexpr int kGradModels = 20;
constexpr double kRoundTripTol = 1e-8;     // criterion 2
constexpr int kRoundTripNets = 100;
constexpr int kRoundTripPoints = 1000;
constexpr double kLinearMccFloor = 0.98;   // criterion 3
constexpr int kRotationDraws = 500;        // criterion 4
constexpr double kBandLoQuantile = 0.01;
constexpr double kBandHiQuantile = 0.99;
constexpr double kDarmoisKsMax = 0.02;     // criterion 5
constexpr double kDarmoisMccMax = 0.6;
constexpr double kControlGap = 0.15;       // criterion 6
constexpr double kPcaGap = 0.15;           // criterion 7
constexpr double kGclAgreement = 0.1;      // criterion 8
constexpr double kLogDetTol = 1e-4;        // criterion 9
constexpr int kLogDetPoints = 20;
constexpr double kMleRegressionFraction = 0.01;
constexpr double kMleMccFloor = 0.95;
constexpr double kNullSigmas = 3.0;        // criterion 10
constexpr double kMccOracleTol = 1e-12;    // criterion 11
constexpr int kMccInstances = 100;

const fs::path kSourceDir = NLICA_SOURCE_DIR;

// ---- harness ----------------------------------------------------------------
struct Outcome {
    bool pass = false;
    std::string detail;
};

int g_failures = 0;

void run_criterion(int number, const std::string& title,
                   const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out.pass = false;
        out.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!out.pass) ++g_failures;
    std::printf("%s criterion %2d: %s — %s (%.1fs)\n", out.pass ? "PASS" : "FAIL",
                number, title.c_str(), out.detail.c_str(), secs);
    std::fflush(stdout);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

ExperimentConfig load_config(const std::string& name) {
    std::ifstream f(kSourceDir / "configs" / name);
    if (!f) throw ConfigError("missing config file: " + name);
    return ExperimentConfig::from_json(json::parse(f));
}

json load_fixture(const std::string& name) {
    std::ifstream f(kSourceDir / "tests" / "fixtures" / name);
    if (!f) throw ConfigError("missing calibration fixture: " + name +
                              " (run the calibrate verb and freeze its output)");
    return json::parse(f);
}

fs::path scratch_dir(const std::string& leaf) {
    const fs::path dir = fs::temp_directory_path() / ("nlica-acceptance-" + leaf);
    fs::remove_all(dir);
    return dir;
}

// Runs one seed of a config and returns its records keyed by method.
std::vector<ResultRecord> run_one_seed(const ExperimentConfig& cfg, const std::string& leaf) {
    RunOptions opt;
    const fs::path dir = scratch_dir(leaf);
    opt.out_dir = dir.string();
    opt.seeds = 1;
    const RunSummary sum = run_experiment(cfg, opt);
    fs::remove_all(dir);
    for (const ResultRecord& r : sum.records) {
        if (!r.ok) throw NumericError("seed 0 of " + leaf + " failed: " + r.status);
    }
    return sum.records;
}

double record_mcc(const std::vector<ResultRecord>& records, const std::string& method) {
    for (const ResultRecord& r : records) {
        if (r.method == method) return r.mcc;
    }
    throw ContractError("no record for method " + method);
}

double quantile_of(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double pos = q * (static_cast<double>(v.size()) - 1.0);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    const double w = pos - static_cast<double>(lo);
    return v[lo] * (1.0 - w) + v[hi] * w;
}

// ---- criterion bodies --------------------------------------------------------

Outcome criterion_gradients() {
    Rng rng(424243);
    double worst = 0.0;
    for (int model = 0; model < kGradModels; ++model) {
        const int d_in = 2 + static_cast<int>(rng.below(4));
        const int d_out = 1 + static_cast<int>(rng.below(4));
        std::vector<int> hidden;
        const int n_hidden = static_cast<int>(rng.below(3));
        for (int l = 0; l < n_hidden; ++l) hidden.push_back(3 + static_cast<int>(rng.below(6)));
        const Act acts[] = {Act::leaky_relu, Act::tanh_fn, Act::smooth_leaky};
        Mlp mlp = Mlp::make(rng, d_in, hidden, d_out, acts[model % 3]);
        const Tensor x = Tensor::randn(rng, 4, d_in, 1.0);

        // One tape pass for the analytic gradient of sum(outputs).
        Tape tape;
        const Tape::Node xn = tape.input(x);
        const TapeMlp nodes = register_mlp(tape, mlp);
        const Tape::Node loss = tape.sum_all(mlp_forward(tape, nodes, mlp, xn));
        tape.backward(loss);

        std::vector<Tensor*> params = mlp_params(mlp);
        std::vector<const Tensor*> grads = mlp_grads(tape, nodes);
        for (std::size_t p = 0; p < params.size(); ++p) {
            const Tensor& analytic = *grads[p];
            Tensor& w = *params[p];
            for (int i = 0; i < w.rows(); ++i) {
                for (int j = 0; j < w.cols(); ++j) {
                    const double keep = w(i, j);
                    const double h = 1e-4;
                    double f_hi = 0.0;
                    double f_lo = 0.0;
                    w(i, j) = keep + h;
                    f_hi = mlp.forward(x).sum();
                    w(i, j) = keep - h;
                    f_lo = mlp.forward(x).sum();
                    w(i, j) = keep;
                    const double fd = (f_hi - f_lo) / (2.0 * h);
                    const double err =
                        std::fabs(analytic(i, j) - fd) / (1.0 + std::fabs(fd));
                    worst = std::max(worst, err);
                }
            }
        }
    }
    Outcome out;
    out.pass = worst <= kGradTol;
    out.detail = std::to_string(kGradModels) + " models, max relative error " + fmt(worst) +
                 (out.pass ? " <= " : " > ") + fmt(kGradTol);
    return out;
}

Outcome criterion_mixing_round_trip() {
    Rng rng(515151);
    double worst = 0.0;
    for (int net_idx = 0; net_idx < kRoundTripNets; ++net_idx) {
        const int d = 2 + static_cast<int>(rng.below(7));       // 2..8
        const int layers = 1 + static_cast<int>(rng.below(3));  // 1..3
        const MixingNetwork net = build_mixing(d, layers, 10.0, 7000 + net_idx);
        const Tensor s = Tensor::randn(rng, kRoundTripPoints, d, 1.0);
        const Tensor back = net.inverse(net.forward(s));
        for (int t = 0; t < s.rows(); ++t) {
            for (int j = 0; j < s.cols(); ++j) {
                worst = std::max(worst, std::fabs(back(t, j) - s(t, j)));
            }
        }
    }
    Outcome out;
    out.pass = worst <= kRoundTripTol;
    out.detail = std::to_string(kRoundTripNets) + " networks, max round-trip error " +
                 fmt(worst) + (out.pass ? " <= " : " > ") + fmt(kRoundTripTol);
    return out;
}

Outcome criterion_linear_bss() {
    const ExperimentConfig cfg = load_config("linear-bss.json");
    const std::vector<ResultRecord> records = run_one_seed(cfg, "linear");
    const double ica = record_mcc(records, "fastica");
    const double pca = record_mcc(records, "pca");
    Outcome out;
    out.pass = ica >= kLinearMccFloor && pca < ica;
    out.detail = "FastICA MCC " + fmt(ica) + " (floor " + fmt(kLinearMccFloor) +
                 "), PCA " + fmt(pca);
    return out;
}

Outcome criterion_gaussian_band() {
    const ExperimentConfig cfg = load_config("linear-bss-gaussian.json");
    const Dataset ds = experiment_dataset(cfg, 0);
    const IcaResult ica = linear_ica(ds.x, ds.x.cols(), derive_stream(ds.seed, 0xfa));
    const double observed = mcc_score(ds.s_true, ica.z, CorrMode::pearson).mcc;

    // Rotation-ambiguity oracle: the best any method can claim on Gaussian
    // data is a random rotation of the whitened observations.
    const Tensor white = pca_baseline(ds.x, ds.x.cols());
    Rng rot_rng(626262);
    std::vector<double> null_mccs;
    null_mccs.reserve(kRotationDraws);
    for (int k = 0; k < kRotationDraws; ++k) {
        const Tensor q = random_orthogonal(rot_rng, ds.x.cols());
        null_mccs.push_back(mcc_score(ds.s_true, white.matmul(q.transpose()),
                                      CorrMode::pearson).mcc);
    }
    const double lo = quantile_of(null_mccs, kBandLoQuantile);
    const double hi = quantile_of(null_mccs, kBandHiQuantile);
    Outcome out;
    out.pass = observed >= lo && observed <= hi;
    out.detail = "Gaussian FastICA MCC " + fmt(observed) + " vs rotation band [" +
                 fmt(lo) + ", " + fmt(hi) + "] from " + std::to_string(kRotationDraws) +
                 " draws";
    return out;
}

Outcome criterion_darmois() {
    const ExperimentConfig cfg = load_config("darmois-demo.json");
    const Dataset ds = experiment_dataset(cfg, 0);
    const Tensor z = darmois_transform(ds.x);
    std::vector<double> col0(static_cast<std::size_t>(z.rows()));
    std::vector<double> col1(col0.size());
    for (int t = 0; t < z.rows(); ++t) {
        col0[static_cast<std::size_t>(t)] = z(t, 0);
        col1[static_cast<std::size_t>(t)] = z(t, 1);
    }
    const double ks0 = ks_uniformity(col0);
    const double ks1 = ks_uniformity(col1);
    const HsicResult h = hsic_independence(col0, col1, 200, derive_stream(ds.seed, 0xda));
    const double mcc = mcc_score(ds.s_true, z, CorrMode::pearson).mcc;
    Outcome out;
    out.pass = ks0 < kDarmoisKsMax && ks1 < kDarmoisKsMax && !h.reject &&
               mcc < kDarmoisMccMax;
    out.detail = "KS " + fmt(ks0) + "/" + fmt(ks1) + " (max " + fmt(kDarmoisKsMax) +
                 "), HSIC " + (h.reject ? "rejects" : "accepts") + ", MCC " + fmt(mcc) +
                 " (max " + fmt(kDarmoisMccMax) + ")";
    return out;
}

std::optional<double> g_tcl_mcc;
std::optional<double> g_pcl_mcc;

Outcome criterion_tcl() {
    const json fixture = load_fixture("tcl-pipeline.fixtures.json");
    const ExperimentConfig cfg = load_config("tcl-pipeline.json");
    if (fixture.at("config_hash") != cfg.config_hash()) {
        throw ConfigError("tcl fixture was calibrated for a different config");
    }
    const double threshold = fixture.at("metrics").at("tcl.mcc").at("threshold");
    const std::vector<ResultRecord> records = run_one_seed(cfg, "tcl");
    const double trained = record_mcc(records, "tcl");
    const double control = record_mcc(records, "tcl-untrained");
    g_tcl_mcc = trained;
    Outcome out;
    out.pass = trained >= threshold && control <= trained - kControlGap;
    out.detail = "matched |Spearman| " + fmt(trained) + " (calibrated floor " +
                 fmt(threshold) + "), untrained control " + fmt(control) +
                 " (needs gap >= " + fmt(kControlGap) + ")";
    return out;
}

Outcome criterion_pcl() {
    const json fixture = load_fixture("pcl-pipeline.fixtures.json");
    const ExperimentConfig cfg = load_config("pcl-pipeline.json");
    if (fixture.at("config_hash") != cfg.config_hash()) {
        throw ConfigError("pcl fixture was calibrated for a different config");
    }
    const double threshold = fixture.at("metrics").at("pcl.mcc").at("threshold");
    const std::vector<ResultRecord> records = run_one_seed(cfg, "pcl");
    const double pcl = record_mcc(records, "pcl");
    const double pca = record_mcc(records, "pca");
    g_pcl_mcc = pcl;
    Outcome out;
    out.pass = pcl >= threshold && pca <= pcl - kPcaGap;
    out.detail = "matched MCC " + fmt(pcl) + " (calibrated floor " + fmt(threshold) +
                 "), PCA " + fmt(pca) + " (needs gap >= " + fmt(kPcaGap) + ")";
    return out;
}

Outcome criterion_gcl() {
    if (!g_tcl_mcc.has_value() || !g_pcl_mcc.has_value()) {
        throw ContractError("needs the TCL and PCL scores from criteria 6 and 7");
    }
    const ExperimentConfig seg_cfg = load_config("gcl-segment.json");
    const double seg = record_mcc(run_one_seed(seg_cfg, "gcl-seg"), "gcl");
    const ExperimentConfig lag_cfg = load_config("gcl-lagged.json");
    const double lag = record_mcc(run_one_seed(lag_cfg, "gcl-lag"), "gcl");
    const double seg_dev = std::fabs(seg - *g_tcl_mcc);
    const double lag_dev = std::fabs(lag - *g_pcl_mcc);
    Outcome out;
    out.pass = seg_dev <= kGclAgreement && lag_dev <= kGclAgreement;
    out.detail = "segment aux " + fmt(seg) + " vs TCL " + fmt(*g_tcl_mcc) + " (|diff| " +
                 fmt(seg_dev) + "), lagged aux " + fmt(lag) + " vs PCL " +
                 fmt(*g_pcl_mcc) + " (|diff| " + fmt(lag_dev) + "), bound " +
                 fmt(kGclAgreement);
    return out;
}

Outcome criterion_mle() {
    // (a) analytic log|det J| against a finite-difference Jacobian on a
    // nonlinear two-block model at random points.
    Rng rng(737373);
    const int d = 3;
    Mlp g;
    for (int layer = 0; layer < 2; ++layer) {
        Layer l;
        l.W = Tensor::randn(rng, d, d, 0.2);
        for (int i = 0; i < d; ++i) l.W(i, i) += 1.0;
        l.b = Tensor::zeros(1, d);
        l.act = layer == 0 ? Act::smooth_leaky : Act::identity;
        g.layers.push_back(std::move(l));
    }
    double worst_logdet = 0.0;
    for (int p = 0; p < kLogDetPoints; ++p) {
        const Tensor x = Tensor::randn(rng, 1, d, 1.0);
        const double analytic = mle_logdet_at(g, x);
        Tensor jac = Tensor::zeros(d, d);
        const double h = 1e-5;
        for (int j = 0; j < d; ++j) {
            Tensor hi = x;
            Tensor lo = x;
            hi(0, j) += h;
            lo(0, j) -= h;
            const Tensor out_hi = g.forward(hi);
            const Tensor out_lo = g.forward(lo);
            for (int i = 0; i < d; ++i) jac(i, j) = (out_hi(0, i) - out_lo(0, i)) / (2.0 * h);
        }
        const double numeric = lu_log_abs_det(lu_factor(jac));
        worst_logdet = std::max(worst_logdet, std::fabs(analytic - numeric));
    }

    // (b) + (c) likelihood ascent and recovery on the configured mixture.
    const ExperimentConfig cfg = load_config("mle-pipeline.json");
    const Dataset ds = experiment_dataset(cfg, 0);
    TrainConfig tc = cfg.train;
    tc.seed = derive_stream(cfg.master_seed, 0);
    const EstimatorResult res = train_mle(ds, tc);
    int regressions = 0;
    for (std::size_t e = 1; e < res.curve.size(); ++e) {
        const double prev = res.curve[e - 1].heldout;
        if (res.curve[e].heldout < prev - 1e-9 * (1.0 + std::fabs(prev))) ++regressions;
    }
    const int allowed = static_cast<int>(kMleRegressionFraction *
                                         static_cast<double>(res.curve.size()));
    const double mcc = mcc_score(ds.s_true, res.z, CorrMode::pearson).mcc;

    Outcome out;
    out.pass = worst_logdet <= kLogDetTol && regressions <= allowed && mcc >= kMleMccFloor;
    out.detail = "log-det FD error " + fmt(worst_logdet) + " (max " + fmt(kLogDetTol) +
                 "), " + std::to_string(regressions) + "/" +
                 std::to_string(res.curve.size()) + " LL regressions (allowed " +
                 std::to_string(allowed) + "), MCC " + fmt(mcc) + " (floor " +
                 fmt(kMleMccFloor) + ")";
    return out;
}

Outcome criterion_null_controls() {
    // TCL on stationary segments: held-out accuracy ~ 1/n_segments.
    const ExperimentConfig tcl_cfg = load_config("tcl-null.json");
    const std::vector<ResultRecord> tcl_rec = run_one_seed(tcl_cfg, "tcl-null");
    double acc = 0.0;
    for (const ResultRecord& r : tcl_rec) {
        if (r.method == "tcl") acc = r.pretext;
    }
    const int n_seg = tcl_cfg.data.nonstationary.n_segments;
    const double chance_acc = 1.0 / n_seg;
    const int held_tcl = tcl_cfg.data.length() / 10;  // stratified tenth
    const double se_acc = std::sqrt(chance_acc * (1.0 - chance_acc) / held_tcl);
    const double acc_dev = std::fabs(acc - chance_acc);

    // PCL on iid-in-time data: held-out AUC ~ 1/2.
    const ExperimentConfig pcl_cfg = load_config("pcl-null.json");
    const double auc = run_one_seed(pcl_cfg, "pcl-null")[0].pretext;
    const int held_pcl = (pcl_cfg.data.length() - 1) / 10;  // pairs, trailing tenth
    const double se_auc =
        std::sqrt((2.0 * held_pcl + 1.0) / (12.0 * held_pcl * held_pcl));
    const double auc_dev = std::fabs(auc - 0.5);

    // GCL with an independent auxiliary (lagged aux on iid data): AUC ~ 1/2.
    const ExperimentConfig gcl_cfg = load_config("gcl-null.json");
    const double gauc = run_one_seed(gcl_cfg, "gcl-null")[0].pretext;
    const int held_gcl = (gcl_cfg.data.length() - 1) / 10;  // lag drops one row
    const double se_gauc =
        std::sqrt((2.0 * held_gcl + 1.0) / (12.0 * held_gcl * held_gcl));
    const double gauc_dev = std::fabs(gauc - 0.5);

    Outcome out;
    out.pass = acc_dev <= kNullSigmas * se_acc && auc_dev <= kNullSigmas * se_auc &&
               gauc_dev <= kNullSigmas * se_gauc;
    out.detail = "TCL acc dev " + fmt(acc_dev) + " (3SE " + fmt(kNullSigmas * se_acc) +
                 "), PCL AUC dev " + fmt(auc_dev) + " (3SE " + fmt(kNullSigmas * se_auc) +
                 "), GCL AUC dev " + fmt(gauc_dev) + " (3SE " +
                 fmt(kNullSigmas * se_gauc) + ")";
    return out;
}

double abs_pearson(const Tensor& a, int ca, const Tensor& b, int cb) {
    const int n = a.rows();
    double ma = 0.0, mb = 0.0;
    for (int t = 0; t < n; ++t) {
        ma += a(t, ca);
        mb += b(t, cb);
    }
    ma /= n;
    mb /= n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (int t = 0; t < n; ++t) {
        const double da = a(t, ca) - ma;
        const double db = b(t, cb) - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    return std::fabs(sab / std::sqrt(saa * sbb));
}

Outcome criterion_mcc_oracle() {
    Rng rng(848484);
    double worst_gap = 0.0;
    double worst_invariance = 0.0;
    for (int instance = 0; instance < kMccInstances; ++instance) {
        const int d = 2 + static_cast<int>(rng.below(5));  // 2..6
        const int T = 60;
        const Tensor s = Tensor::randn(rng, T, d, 1.0);
        Tensor z = Tensor::randn(rng, T, d, 0.5);
        // plant signal: z_j ~ +- s_perm(j) + noise
        std::vector<int> perm(static_cast<std::size_t>(d));
        for (int j = 0; j < d; ++j) perm[static_cast<std::size_t>(j)] = j;
        rng.shuffle(perm);
        for (int t = 0; t < T; ++t) {
            for (int j = 0; j < d; ++j) {
                const double sign = (perm[static_cast<std::size_t>(j)] % 2 == 0) ? 1.0 : -1.0;
                z(t, j) += sign * s(t, perm[static_cast<std::size_t>(j)]);
            }
        }
        const MatchReport report = mcc_score(s, z, CorrMode::pearson);

        // Independent oracle: recompute the |corr| matrix from scratch and
        // brute-force every assignment of estimated to true components.
        std::vector<int> assign(static_cast<std::size_t>(d));
        for (int j = 0; j < d; ++j) assign[static_cast<std::size_t>(j)] = j;
        double best = 0.0;
        do {
            double total = 0.0;
            for (int j = 0; j < d; ++j) {
                total += abs_pearson(z, j, s, assign[static_cast<std::size_t>(j)]);
            }
            best = std::max(best, total / d);
        } while (std::next_permutation(assign.begin(), assign.end()));
        worst_gap = std::max(worst_gap, std::fabs(best - report.mcc));

        // Invariance: signed permutation and positive scaling of z.
        Tensor z2 = Tensor::zeros(T, d);
        std::vector<int> shuffle_cols(static_cast<std::size_t>(d));
        for (int j = 0; j < d; ++j) shuffle_cols[static_cast<std::size_t>(j)] = j;
        rng.shuffle(shuffle_cols);
        for (int j = 0; j < d; ++j) {
            const double sign = rng.uniform01() < 0.5 ? -1.0 : 1.0;
            const double scale = 0.1 + 4.0 * rng.uniform01();
            for (int t = 0; t < T; ++t) {
                z2(t, shuffle_cols[static_cast<std::size_t>(j)]) = sign * scale * z(t, j);
            }
        }
        const double mcc2 = mcc_score(s, z2, CorrMode::pearson).mcc;
        worst_invariance = std::max(worst_invariance, std::fabs(mcc2 - report.mcc));
    }
    Outcome out;
    out.pass = worst_gap <= kMccOracleTol && worst_invariance <= kMccOracleTol;
    out.detail = std::to_string(kMccInstances) + " instances, brute-force gap " +
                 fmt(worst_gap) + ", signed-permutation drift " + fmt(worst_invariance) +
                 " (tol " + fmt(kMccOracleTol) + ")";
    return out;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    if (!f) throw Error("cannot read " + p.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string strip_seconds_column(const std::string& csv) {
    std::istringstream in(csv);
    std::string out;
    std::string line;
    while (std::getline(in, line)) {
        const std::size_t cut = line.rfind(',');
        out += line.substr(0, cut);
        out += '\n';
    }
    return out;
}

Outcome criterion_reproducibility() {
    const ExperimentConfig cfg = load_config("tcl-null.json");
    const fs::path dir_a = scratch_dir("repro-a");
    const fs::path dir_b = scratch_dir("repro-b");
    RunOptions opt;
    opt.seeds = 2;
    opt.out_dir = dir_a.string();
    run_experiment(cfg, opt);
    opt.out_dir = dir_b.string();
    run_experiment(cfg, opt);

    int compared = 0;
    bool identical = true;
    std::string first_diff;
    for (const auto& entry : fs::directory_iterator(dir_a)) {
        if (entry.path().extension() != ".csv") continue;
        ++compared;
        std::string a = slurp(entry.path());
        std::string b = slurp(dir_b / entry.path().filename());
        if (entry.path().filename() == "results.csv") {
            a = strip_seconds_column(a);
            b = strip_seconds_column(b);
        }
        if (a != b && identical) {
            identical = false;
            first_diff = entry.path().filename().string();
        }
    }
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
    Outcome out;
    out.pass = identical && compared >= 3;
    out.detail = std::to_string(compared) + " CSVs compared across independent reruns" +
                 (identical ? ", all byte-identical (wall-clock excluded)"
                            : ", first difference in " + first_diff);
    return out;
}

}  // namespace

int main() {
    std::printf("acceptance gate: %d criteria\n", 12);
    run_criterion(1, "tape gradients vs central finite differences", criterion_gradients);
    run_criterion(2, "mixing networks invert exactly", criterion_mixing_round_trip);
    run_criterion(3, "FastICA separates a Laplace linear mixture", criterion_linear_bss);
    run_criterion(4, "Gaussian mixtures stay rotation-ambiguous", criterion_gaussian_band);
    run_criterion(5, "Darmois outputs are independent, uniform, and wrong", criterion_darmois);
    run_criterion(6, "TCL pipeline recovers modulated sources", criterion_tcl);
    run_criterion(7, "PCL recovers temporally dependent sources", criterion_pcl);
    run_criterion(8, "GCL matches TCL and PCL on shared data", criterion_gcl);
    run_criterion(9, "MLE log-det, likelihood ascent, and recovery", criterion_mle);
    run_criterion(10, "null controls sit at chance", criterion_null_controls);
    run_criterion(11, "MCC equals the brute-force assignment optimum", criterion_mcc_oracle);
    run_criterion(12, "reruns are byte-identical", criterion_reproducibility);

    if (g_failures == 0) {
        std::printf("acceptance gate: all 12 criteria passed\n");
        return 0;
    }
    std::printf("acceptance gate: %d criteria FAILED\n", g_failures);
    return 1;
}
