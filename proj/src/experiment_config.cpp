#include <algorithm>
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "nlica/errors.hpp"
#include "nlica/experiment.hpp"

namespace nlica {

namespace {

using nlohmann::json;

std::string join_problems(const std::vector<std::string>& problems) {
    std::string msg = "invalid experiment config:";
    for (const auto& p : problems) msg += "\n  - " + p;
    return msg;
}

// Strict object walker: typed getters record which keys they touched so
// finish() can flag everything unknown; every complaint lands in a shared
// list so one error message covers the whole file.
class Reader {
public:
    Reader(const json& j, std::string path, std::vector<std::string>& problems)
        : j_(j), path_(std::move(path)), problems_(problems) {}

    bool has(const char* key) const { return j_.contains(key); }

    bool require(const char* key) {
        if (j_.contains(key)) return true;
        problems_.push_back(at(key) + " is required");
        return false;
    }

    void get_int(const char* key, int& out) {
        const json* v = find(key);
        if (!v) return;
        if (!v->is_number_integer()) return bad(key, "an integer");
        out = v->get<int>();
    }

    void get_u64(const char* key, std::uint64_t& out) {
        const json* v = find(key);
        if (!v) return;
        if (!v->is_number_unsigned() &&
            !(v->is_number_integer() && v->get<std::int64_t>() >= 0)) {
            return bad(key, "a non-negative integer");
        }
        out = v->get<std::uint64_t>();
    }

    void get_double(const char* key, double& out) {
        const json* v = find(key);
        if (!v) return;
        if (!v->is_number()) return bad(key, "a number");
        out = v->get<double>();
    }

    void get_bool(const char* key, bool& out) {
        const json* v = find(key);
        if (!v) return;
        if (!v->is_boolean()) return bad(key, "a boolean");
        out = v->get<bool>();
    }

    void get_string(const char* key, std::string& out) {
        const json* v = find(key);
        if (!v) return;
        if (!v->is_string()) return bad(key, "a string");
        out = v->get<std::string>();
    }

    void get_int_array(const char* key, std::vector<int>& out) {
        const json* v = find(key);
        if (!v) return;
        if (!v->is_array()) return bad(key, "an array of integers");
        std::vector<int> tmp;
        for (const auto& e : *v) {
            if (!e.is_number_integer()) return bad(key, "an array of integers");
            tmp.push_back(e.get<int>());
        }
        out = std::move(tmp);
    }

    void get_double_array(const char* key, std::vector<double>& out) {
        const json* v = find(key);
        if (!v) return;
        if (!v->is_array()) return bad(key, "an array of numbers");
        std::vector<double> tmp;
        for (const auto& e : *v) {
            if (!e.is_number()) return bad(key, "an array of numbers");
            tmp.push_back(e.get<double>());
        }
        out = std::move(tmp);
    }

    void get_string_array(const char* key, std::vector<std::string>& out) {
        const json* v = find(key);
        if (!v) return;
        if (!v->is_array()) return bad(key, "an array of strings");
        std::vector<std::string> tmp;
        for (const auto& e : *v) {
            if (!e.is_string()) return bad(key, "an array of strings");
            tmp.push_back(e.get<std::string>());
        }
        out = std::move(tmp);
    }

    // Returns the sub-object, or nullptr (with a complaint when the key is
    // present but not an object).
    const json* get_object(const char* key) {
        const json* v = find(key);
        if (!v) return nullptr;
        if (!v->is_object()) {
            bad(key, "an object");
            return nullptr;
        }
        return v;
    }

    void finish() {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (std::find(seen_.begin(), seen_.end(), it.key()) == seen_.end()) {
                problems_.push_back((path_.empty() ? "" : path_ + ".") + it.key() +
                                    " is not a recognized key");
            }
        }
    }

private:
    const json* find(const char* key) {
        seen_.push_back(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    std::string at(const char* key) const {
        return path_.empty() ? std::string(key) : path_ + "." + key;
    }

    void bad(const char* key, const char* want) {
        problems_.push_back(at(key) + " must be " + want);
    }

    const json& j_;
    std::string path_;
    std::vector<std::string>& problems_;
    std::vector<std::string> seen_;
};

const char* kKindNames[] = {"linear-bss",   "tcl-pipeline", "pcl-pipeline",
                            "gcl-pipeline", "mle-pipeline", "darmois-demo",
                            "comparison-grid"};

bool parse_kind(const std::string& s, ExperimentKind& out) {
    for (int i = 0; i < 7; ++i) {
        if (s == kKindNames[i]) {
            out = static_cast<ExperimentKind>(i);
            return true;
        }
    }
    return false;
}

std::string list_names(const char* const* names, int n) {
    std::string out;
    for (int i = 0; i < n; ++i) {
        if (i) out += ", ";
        out += "\"";
        out += names[i];
        out += "\"";
    }
    return out;
}

void parse_data(const json& j, DataSpec& out, std::vector<std::string>& problems) {
    Reader r(j, "data", problems);
    std::string src = "nonstationary";
    if (r.require("source")) r.get_string("source", src);
    if (src == "nonstationary") {
        out.source = SourceKind::nonstationary;
    } else if (src == "ar") {
        out.source = SourceKind::ar;
    } else if (src == "nonstat-ar") {
        out.source = SourceKind::nonstat_ar;
    } else {
        problems.push_back(
            "data.source must be one of \"nonstationary\", \"ar\", \"nonstat-ar\"");
        return;  // the valid key set depends on the source
    }

    std::string aux = "none";
    r.get_string("aux", aux);
    if (aux == "none") {
        out.aux = AuxChoice::none;
    } else if (aux == "segment-label") {
        out.aux = AuxChoice::segment_label;
    } else if (aux == "lagged") {
        out.aux = AuxChoice::lagged;
    } else {
        problems.push_back("data.aux must be one of \"none\", \"segment-label\", \"lagged\"");
    }

    if (out.source == SourceKind::nonstationary) {
        NonstationarySpec& n = out.nonstationary;
        r.get_int("d", n.d);
        r.get_int("n_segments", n.n_segments);
        r.get_int("points_per_segment", n.points_per_segment);
        r.get_double("lambda_min", n.lambda_min);
        r.get_double("lambda_max", n.lambda_max);
    } else {
        ArComponent c;
        int d = 2;
        int T = 1024;
        r.get_int("d", d);
        r.get_int("T", T);
        std::string fn = "linear";
        std::string innov = "gaussian";
        r.get_string("function", fn);
        r.get_string("innovation", innov);
        r.get_double("rho", c.rho);
        r.get_double("amplitude", c.amplitude);
        r.get_double("gain", c.gain);
        r.get_double("scale", c.scale);
        if (fn == "linear") {
            c.r = ArFunction::linear;
        } else if (fn == "tanh") {
            c.r = ArFunction::tanh_saturating;
        } else if (fn == "cubic") {
            c.r = ArFunction::cubic_contraction;
        } else {
            problems.push_back("data.function must be one of \"linear\", \"tanh\", \"cubic\"");
        }
        if (innov == "gaussian") {
            c.innovation = Innovation::gaussian;
        } else if (innov == "laplace") {
            c.innovation = Innovation::laplace;
        } else if (innov == "uniform") {
            c.innovation = Innovation::uniform;
        } else {
            problems.push_back(
                "data.innovation must be one of \"gaussian\", \"laplace\", \"uniform\"");
        }
        ArSpec& ar = out.nonstat_ar.ar;
        ar.d = d;
        ar.T = T;
        ar.components.assign(static_cast<std::size_t>(std::max(d, 0)), c);
        if (out.source == SourceKind::nonstat_ar) {
            NonstatArSpec& ns = out.nonstat_ar;
            r.get_int("sigma_segment_length", ns.sigma_segment_length);
            r.get_double("sigma_min", ns.sigma_min);
            r.get_double("sigma_max", ns.sigma_max);
            r.get_double_array("sigma_cycle", ns.sigma_cycle);
        }
    }
    r.finish();
}

void parse_mixing(const json& j, MixingSpec& out, std::vector<std::string>& problems) {
    Reader r(j, "mixing", problems);
    r.get_int("layers", out.layers);
    r.get_double("condition_bound", out.condition_bound);
    r.get_double("alpha", out.alpha);
    r.finish();
}

void parse_train(const json& j, TrainConfig& out, std::vector<std::string>& problems) {
    Reader r(j, "train", problems);
    r.get_int_array("hidden", out.hidden);
    r.get_int("output_dim", out.output_dim);
    r.get_int("epochs", out.epochs);
    r.get_int("batch_size", out.batch_size);
    r.get_double("learning_rate", out.learning_rate);
    r.get_int("patience", out.patience);
    std::vector<std::string> density_names;
    r.get_string_array("densities", density_names);
    for (const auto& name : density_names) {
        if (name == "laplace") {
            out.densities.push_back(SourceDensity::laplace);
        } else if (name == "gauss-mix") {
            out.densities.push_back(SourceDensity::gauss_mix2);
        } else if (name == "student") {
            out.densities.push_back(SourceDensity::student3);
        } else {
            problems.push_back("train.densities entries must be one of \"laplace\", "
                               "\"gauss-mix\", \"student\"");
            break;
        }
    }
    r.finish();
}

void parse_eval(const json& j, EvalSpec& out, std::vector<std::string>& problems) {
    Reader r(j, "eval", problems);
    std::string mode = "pearson";
    std::string target = "sources";
    bool have_mode = r.has("mode");
    bool have_target = r.has("compare_to");
    r.get_string("mode", mode);
    r.get_string("compare_to", target);
    r.get_bool("compose_ica", out.compose_ica);
    if (have_mode) {
        if (mode == "pearson") {
            out.mode = CorrMode::pearson;
        } else if (mode == "spearman") {
            out.mode = CorrMode::spearman;
        } else {
            problems.push_back("eval.mode must be \"pearson\" or \"spearman\"");
        }
    }
    if (have_target) {
        if (target == "sources") {
            out.abs_target = false;
        } else if (target == "abs-sources") {
            out.abs_target = true;
        } else {
            problems.push_back("eval.compare_to must be \"sources\" or \"abs-sources\"");
        }
    }
    r.finish();
}

const char* kMethodNames[] = {"fastica", "pca", "tcl", "tcl-untrained",
                              "pcl",     "gcl", "mle", "darmois"};

bool known_method(const std::string& m) {
    for (const char* name : kMethodNames) {
        if (m == name) return true;
    }
    return false;
}

void collect_problems(const ExperimentConfig& c, std::vector<std::string>& problems) {
    if (c.version != 1) problems.push_back("version must be 1");
    if (c.n_seeds < 1) problems.push_back("seeds must be at least 1");

    const int d = c.data.dims();
    const int T = c.data.length();
    if (d < 2) problems.push_back("data.d must be at least 2");
    switch (c.data.source) {
        case SourceKind::nonstationary: {
            const NonstationarySpec& n = c.data.nonstationary;
            if (n.n_segments < 1) problems.push_back("data.n_segments must be at least 1");
            if (n.points_per_segment < 1) {
                problems.push_back("data.points_per_segment must be at least 1");
            }
            if (!(n.lambda_min > 0.0) || !(n.lambda_max >= n.lambda_min)) {
                problems.push_back(
                    "data.lambda_min/lambda_max must satisfy 0 < lambda_min <= lambda_max");
            }
            break;
        }
        case SourceKind::ar:
            if (d >= 2) {
                try {
                    c.data.nonstat_ar.ar.validate();
                } catch (const Error& e) {
                    problems.push_back(std::string("data: ") + e.what());
                }
            }
            break;
        case SourceKind::nonstat_ar:
            if (d >= 2) {
                try {
                    c.data.nonstat_ar.validate();
                } catch (const Error& e) {
                    problems.push_back(std::string("data: ") + e.what());
                }
            }
            break;
    }
    if (c.data.aux == AuxChoice::segment_label && c.data.source == SourceKind::ar) {
        problems.push_back("data.aux \"segment-label\" needs a segmented source "
                           "(nonstationary or nonstat-ar)");
    }

    if (c.mixing.layers < 0) problems.push_back("mixing.layers must be non-negative");
    if (c.mixing.layers > 0) {
        if (!(c.mixing.condition_bound >= 1.0)) {
            problems.push_back("mixing.condition_bound must be at least 1");
        }
        if (!(c.mixing.alpha > 0.0 && c.mixing.alpha < 1.0)) {
            problems.push_back("mixing.alpha must lie in (0, 1)");
        }
    }

    if (d >= 1) {
        try {
            c.train.validate(d);
        } catch (const Error& e) {
            problems.push_back(e.what());
        }
    }

    if (c.kind == ExperimentKind::comparison_grid) {
        if (c.methods.empty()) {
            problems.push_back("methods must list at least one method for comparison-grid");
        }
        for (const auto& m : c.methods) {
            if (!known_method(m)) {
                problems.push_back("methods entry \"" + m + "\" is not one of " +
                                   list_names(kMethodNames, 8));
            }
        }
        for (std::size_t i = 0; i + 1 < c.methods.size(); ++i) {
            for (std::size_t k = i + 1; k < c.methods.size(); ++k) {
                if (c.methods[i] == c.methods[k]) {
                    problems.push_back("methods lists \"" + c.methods[i] + "\" twice");
                    k = c.methods.size();
                }
            }
        }
    } else if (!c.methods.empty()) {
        problems.push_back("methods is only valid for kind \"comparison-grid\"");
    }

    for (const auto& m : c.method_list()) {
        if (!known_method(m)) continue;  // already reported above
        if ((m == "tcl" || m == "tcl-untrained") && c.data.source == SourceKind::ar) {
            problems.push_back("method \"" + m +
                               "\" needs a segmented source (nonstationary or nonstat-ar)");
        }
        if (m == "gcl" && c.data.aux == AuxChoice::none) {
            problems.push_back("method \"gcl\" needs data.aux (\"segment-label\" or \"lagged\")");
        }
        if (m == "mle" && c.train.output_dim != 0 && c.train.output_dim != d) {
            problems.push_back("method \"mle\" needs a square unmixing: train.output_dim "
                               "must be 0 or equal to data.d");
        }
        if (m == "darmois") {
            if (d != 2) problems.push_back("method \"darmois\" needs data.d == 2");
            if (T < 1000) {
                problems.push_back("method \"darmois\" needs at least 1000 points, config "
                                   "yields " + std::to_string(T));
            }
        }
        if (m == "pcl" && T < 3) {
            problems.push_back("method \"pcl\" needs at least 3 points, config yields " +
                               std::to_string(T));
        }
    }
    if (c.data.aux == AuxChoice::lagged && T < 2) {
        problems.push_back("data.aux \"lagged\" needs at least 2 points");
    }
}

}  // namespace

std::string kind_name(ExperimentKind k) { return kKindNames[static_cast<int>(k)]; }

int DataSpec::dims() const {
    return source == SourceKind::nonstationary ? nonstationary.d : nonstat_ar.ar.d;
}

int DataSpec::length() const {
    return source == SourceKind::nonstationary
               ? nonstationary.n_segments * nonstationary.points_per_segment
               : nonstat_ar.ar.T;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
    std::vector<std::string> problems;
    ExperimentConfig cfg;
    Reader top(j, "", problems);

    if (top.require("version")) top.get_int("version", cfg.version);
    if (top.require("kind")) {
        std::string kind;
        top.get_string("kind", kind);
        if (!kind.empty() && !parse_kind(kind, cfg.kind)) {
            problems.push_back("kind must be one of " + list_names(kKindNames, 7));
        }
    }
    top.get_int("seeds", cfg.n_seeds);
    top.get_u64("master_seed", cfg.master_seed);
    top.get_string("out_dir", cfg.out_dir);
    top.get_string_array("methods", cfg.methods);

    if (top.require("data")) {
        if (const json* dj = top.get_object("data")) parse_data(*dj, cfg.data, problems);
    }
    if (top.has("mixing")) {
        if (const json* mj = top.get_object("mixing")) parse_mixing(*mj, cfg.mixing, problems);
    }
    if (top.has("train")) {
        if (const json* tj = top.get_object("train")) parse_train(*tj, cfg.train, problems);
    }
    if (top.has("eval")) {
        if (const json* ej = top.get_object("eval")) {
            parse_eval(*ej, cfg.eval, problems);
            cfg.eval_explicit = true;
        }
    }
    top.finish();

    if (!problems.empty()) throw ConfigError(join_problems(problems));
    cfg.validate();
    return cfg;
}

void ExperimentConfig::validate() const {
    std::vector<std::string> problems;
    collect_problems(*this, problems);
    if (!problems.empty()) throw ConfigError(join_problems(problems));
}

nlohmann::json ExperimentConfig::to_json() const {
    json j;
    j["version"] = version;
    j["kind"] = kind_name(kind);
    j["seeds"] = n_seeds;
    j["master_seed"] = master_seed;

    json dj;
    switch (data.source) {
        case SourceKind::nonstationary: {
            const NonstationarySpec& n = data.nonstationary;
            dj["source"] = "nonstationary";
            dj["d"] = n.d;
            dj["n_segments"] = n.n_segments;
            dj["points_per_segment"] = n.points_per_segment;
            dj["lambda_min"] = n.lambda_min;
            dj["lambda_max"] = n.lambda_max;
            break;
        }
        case SourceKind::ar:
        case SourceKind::nonstat_ar: {
            const ArSpec& ar = data.nonstat_ar.ar;
            const ArComponent c = ar.components.empty() ? ArComponent{} : ar.components[0];
            dj["source"] = data.source == SourceKind::ar ? "ar" : "nonstat-ar";
            dj["d"] = ar.d;
            dj["T"] = ar.T;
            switch (c.r) {
                case ArFunction::linear: dj["function"] = "linear"; break;
                case ArFunction::tanh_saturating: dj["function"] = "tanh"; break;
                case ArFunction::cubic_contraction: dj["function"] = "cubic"; break;
            }
            dj["rho"] = c.rho;
            dj["amplitude"] = c.amplitude;
            dj["gain"] = c.gain;
            switch (c.innovation) {
                case Innovation::gaussian: dj["innovation"] = "gaussian"; break;
                case Innovation::laplace: dj["innovation"] = "laplace"; break;
                case Innovation::uniform: dj["innovation"] = "uniform"; break;
            }
            dj["scale"] = c.scale;
            if (data.source == SourceKind::nonstat_ar) {
                dj["sigma_segment_length"] = data.nonstat_ar.sigma_segment_length;
                dj["sigma_min"] = data.nonstat_ar.sigma_min;
                dj["sigma_max"] = data.nonstat_ar.sigma_max;
                if (!data.nonstat_ar.sigma_cycle.empty()) {
                    dj["sigma_cycle"] = data.nonstat_ar.sigma_cycle;
                }
            }
            break;
        }
    }
    switch (data.aux) {
        case AuxChoice::none: dj["aux"] = "none"; break;
        case AuxChoice::segment_label: dj["aux"] = "segment-label"; break;
        case AuxChoice::lagged: dj["aux"] = "lagged"; break;
    }
    j["data"] = dj;

    j["mixing"] = {{"layers", mixing.layers},
                   {"condition_bound", mixing.condition_bound},
                   {"alpha", mixing.alpha}};

    json tj;
    tj["hidden"] = train.hidden;
    tj["output_dim"] = train.output_dim;
    tj["epochs"] = train.epochs;
    tj["batch_size"] = train.batch_size;
    tj["learning_rate"] = train.learning_rate;
    tj["patience"] = train.patience;
    if (!train.densities.empty()) {
        std::vector<std::string> names;
        names.reserve(train.densities.size());
        for (SourceDensity dsty : train.densities) names.push_back(density_name(dsty));
        tj["densities"] = names;
    }
    j["train"] = tj;

    if (eval_explicit) {
        j["eval"] = {{"mode", corr_mode_name(eval.mode)},
                     {"compare_to", eval.abs_target ? "abs-sources" : "sources"},
                     {"compose_ica", eval.compose_ica}};
    }
    if (kind == ExperimentKind::comparison_grid) j["methods"] = methods;
    // out_dir is deliberately left out: it changes where results land, not
    // what the experiment is, so it must not perturb the config hash.
    return j;
}

std::string ExperimentConfig::config_hash() const {
    // The seed budget, like the output directory, affects how much of the
    // experiment is sampled, not what any seed computes — rows produced under
    // a --seeds override must still join against the config's other runs.
    json canonical = to_json();
    canonical.erase("seeds");
    const std::string dump = canonical.dump();
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a 64
    for (unsigned char ch : dump) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return std::string(buf);
}

std::vector<std::string> ExperimentConfig::method_list() const {
    switch (kind) {
        case ExperimentKind::linear_bss: return {"fastica", "pca"};
        case ExperimentKind::tcl_pipeline: return {"tcl", "tcl-untrained"};
        case ExperimentKind::pcl_pipeline: return {"pcl", "pca"};
        case ExperimentKind::gcl_pipeline: return {"gcl"};
        case ExperimentKind::mle_pipeline: return {"mle"};
        case ExperimentKind::darmois_demo: return {"darmois"};
        case ExperimentKind::comparison_grid: return methods;
    }
    return {};
}

EvalSpec ExperimentConfig::eval_for(const std::string& method) const {
    if (eval_explicit) return eval;
    EvalSpec ev;  // pearson vs raw sources, no ICA rotation
    if (method == "tcl" || method == "tcl-untrained" ||
        (method == "gcl" && data.aux == AuxChoice::segment_label)) {
        ev.mode = CorrMode::spearman;
        ev.abs_target = true;
        ev.compose_ica = true;
    }
    return ev;
}

}  // namespace nlica
