#include "nlica/dataset.hpp"

#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "nlica/errors.hpp"

namespace nlica {

void Dataset::validate() const {
    std::vector<std::string> problems;
    const int t = x.rows();
    if (t <= 0) problems.push_back("x is empty");
    if (has_sources() && s_true.rows() != t)
        problems.push_back("s_true has " + std::to_string(s_true.rows()) + " rows, x has " +
                           std::to_string(t));
    if (has_aux() && aux.rows() != t)
        problems.push_back("aux has " + std::to_string(aux.rows()) + " rows, x has " +
                           std::to_string(t));
    if (has_segments()) {
        if (static_cast<int>(segments.size()) != t)
            problems.push_back("segments has " + std::to_string(segments.size()) +
                               " entries, x has " + std::to_string(t));
        if (n_segments < 1) {
            problems.push_back("segments present but n_segments = " +
                               std::to_string(n_segments));
        } else {
            std::vector<int> count(static_cast<std::size_t>(n_segments), 0);
            bool out_of_range = false;
            for (int lab : segments) {
                if (lab < 1 || lab > n_segments)
                    out_of_range = true;
                else
                    count[static_cast<std::size_t>(lab - 1)]++;
            }
            if (out_of_range)
                problems.push_back("segment label outside {1.." + std::to_string(n_segments) +
                                   "}");
            for (int k = 0; k < n_segments; ++k)
                if (count[static_cast<std::size_t>(k)] == 0)
                    problems.push_back("segment " + std::to_string(k + 1) + " is empty");
        }
    } else if (n_segments != 0) {
        problems.push_back("n_segments = " + std::to_string(n_segments) +
                           " but segments is empty");
    }
    if (!problems.empty()) {
        std::string msg = "invalid dataset:";
        for (const std::string& p : problems) msg += "\n  - " + p;
        throw ContractError(msg);
    }
}

Dataset attach_auxiliary(const Dataset& ds, AuxMode mode) {
    ds.validate();
    Dataset out = ds;
    if (mode == AuxMode::segment_label) {
        if (!ds.has_segments())
            throw ContractError("attach_auxiliary: segment-label mode needs segment labels");
        out.aux = Tensor::zeros(ds.T(), ds.n_segments);
        for (int t = 0; t < ds.T(); ++t)
            out.aux(t, ds.segments[static_cast<std::size_t>(t)] - 1) = 1.0;
        return out;
    }
    // lagged observation: aux(t) = x(t-1); the first time point has no
    // predecessor and is dropped from every per-row field.
    if (ds.T() < 2)
        throw ContractError("attach_auxiliary: lagged mode needs at least two time points");
    const int t_new = ds.T() - 1;
    Dataset lag;
    lag.seed = ds.seed;
    lag.x = Tensor::zeros(t_new, ds.x.cols());
    lag.aux = Tensor::zeros(t_new, ds.x.cols());
    for (int t = 0; t < t_new; ++t) {
        for (int j = 0; j < ds.x.cols(); ++j) {
            lag.x(t, j) = ds.x(t + 1, j);
            lag.aux(t, j) = ds.x(t, j);
        }
    }
    if (ds.has_sources()) {
        lag.s_true = Tensor::zeros(t_new, ds.s_true.cols());
        for (int t = 0; t < t_new; ++t)
            for (int j = 0; j < ds.s_true.cols(); ++j) lag.s_true(t, j) = ds.s_true(t + 1, j);
    }
    if (ds.has_segments()) {
        lag.segments.assign(ds.segments.begin() + 1, ds.segments.end());
        lag.n_segments = ds.n_segments;
    }
    return lag;
}

std::string format_double(double v) {
    char buf[64];
    // %.17g round-trips every double; trim to the shortest representation
    // that still parses back exactly so files stay readable.
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        double back = 0.0;
        std::from_chars(buf, buf + std::strlen(buf), back);
        if (back == v || (v != v && back != back)) break;
    }
    return std::string(buf);
}

void write_dataset_csv(const Dataset& ds, const std::string& csv_path,
                       const nlohmann::json& spec) {
    ds.validate();
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw ConfigError("cannot open " + csv_path + " for writing");

    const int d_src = ds.has_sources() ? ds.s_true.cols() : 0;
    const int d_obs = ds.x.cols();
    const int d_aux = ds.has_aux() ? ds.aux.cols() : 0;

    std::string header;
    for (int j = 0; j < d_src; ++j) header += "s" + std::to_string(j + 1) + ",";
    for (int j = 0; j < d_obs; ++j) header += "x" + std::to_string(j + 1) + ",";
    if (ds.has_segments()) header += "segment,";
    for (int j = 0; j < d_aux; ++j) header += "u" + std::to_string(j + 1) + ",";
    header.pop_back();
    out << header << "\n";

    for (int t = 0; t < ds.T(); ++t) {
        std::string line;
        for (int j = 0; j < d_src; ++j) line += format_double(ds.s_true(t, j)) + ",";
        for (int j = 0; j < d_obs; ++j) line += format_double(ds.x(t, j)) + ",";
        if (ds.has_segments())
            line += std::to_string(ds.segments[static_cast<std::size_t>(t)]) + ",";
        for (int j = 0; j < d_aux; ++j) line += format_double(ds.aux(t, j)) + ",";
        line.pop_back();
        out << line << "\n";
    }
    if (!out) throw ConfigError("failed writing " + csv_path);
    out.close();

    std::string sidecar_path = csv_path;
    const std::string suffix = ".csv";
    if (sidecar_path.size() >= suffix.size() &&
        sidecar_path.compare(sidecar_path.size() - suffix.size(), suffix.size(), suffix) == 0)
        sidecar_path.resize(sidecar_path.size() - suffix.size());
    sidecar_path += ".json";

    nlohmann::json side;
    side["spec"] = spec;
    side["seed"] = ds.seed;
    std::ofstream sout(sidecar_path, std::ios::binary);
    if (!sout) throw ConfigError("cannot open " + sidecar_path + " for writing");
    sout << side.dump(2) << "\n";
}

}  // namespace nlica
