// Experiment CLI: run / calibrate / validate a JSON experiment config.
// Prints a single machine-readable JSON summary line on stdout and exits
// 0 on full success, 2 when some seeds failed, 1 on config or I/O errors.
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "nlica/errors.hpp"
#include "nlica/experiment.hpp"

namespace {

nlohmann::json load_config_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw nlica::ConfigError("cannot open config file: " + path);
    try {
        return nlohmann::json::parse(f);
    } catch (const nlohmann::json::parse_error& e) {
        throw nlica::ConfigError("config is not valid JSON: " + std::string(e.what()));
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nonlinear ICA experiment runner"};
    app.require_subcommand(1);

    std::string config_path;
    nlica::RunOptions opt;

    CLI::App* run = app.add_subcommand("run", "execute an experiment config across seeds");
    CLI::App* calibrate =
        app.add_subcommand("calibrate", "run >= 5 seeds and write fixtures.json thresholds");
    CLI::App* validate =
        app.add_subcommand("validate", "check a config and print its stable hash");

    for (CLI::App* sub : {run, calibrate}) {
        sub->add_option("config", config_path, "experiment config JSON file")->required();
        sub->add_option("--out", opt.out_dir,
                        "output directory (default: config out_dir, then $" +
                            std::string(nlica::kOutRootEnv) + "/<kind>-<hash>)");
        sub->add_option("--seeds", opt.seeds, "override the config's seed count")
            ->check(CLI::PositiveNumber);
        sub->add_option("--jobs", opt.jobs, "seeds to run concurrently")
            ->check(CLI::PositiveNumber);
    }
    validate->add_option("config", config_path, "experiment config JSON file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        const nlohmann::json raw = load_config_json(config_path);
        const nlica::ExperimentConfig cfg = nlica::ExperimentConfig::from_json(raw);

        nlohmann::json out;
        if (validate->parsed()) {
            out["status"] = "ok";
            out["config_hash"] = cfg.config_hash();
            out["kind"] = nlica::kind_name(cfg.kind);
            out["seeds"] = cfg.n_seeds;
            std::cout << out.dump() << "\n";
            return 0;
        }

        const nlica::RunSummary summary = run->parsed()
                                              ? nlica::run_experiment(cfg, opt)
                                              : nlica::calibrate_experiment(cfg, opt);
        out["status"] = summary.n_failed == 0 ? "ok" : "partial";
        out["config_hash"] = summary.config_hash;
        out["out_dir"] = summary.out_dir;
        out["records"] = summary.records.size();
        out["failed"] = summary.n_failed;
        if (calibrate->parsed()) out["fixtures"] = summary.out_dir + "/fixtures.json";
        std::cout << out.dump() << "\n";
        return summary.n_failed == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        nlohmann::json err;
        err["status"] = "error";
        err["message"] = e.what();
        std::cout << err.dump() << "\n";
        return 1;
    }
}
