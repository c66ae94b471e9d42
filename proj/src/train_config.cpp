#include "nlica/train_config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "nlica/dataset.hpp"
#include "nlica/errors.hpp"

namespace nlica {

void TrainConfig::validate(int input_dim) const {
    std::string problems;
    auto add = [&](const std::string& p) { problems += "\n  - " + p; };

    if (input_dim < 1) add("input dimension must be >= 1, got " + std::to_string(input_dim));
    if (output_dim < 0 || output_dim > input_dim) {
        add("output_dim must be 0 (= input dim) or in [1, " + std::to_string(input_dim) +
            "], got " + std::to_string(output_dim));
    }
    for (int h : hidden) {
        if (h < 1) add("hidden widths must be >= 1, got " + std::to_string(h));
    }
    if (epochs < 1) add("epochs must be >= 1, got " + std::to_string(epochs));
    if (batch_size < 1) add("batch_size must be >= 1, got " + std::to_string(batch_size));
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        add("learning_rate must be positive and finite");
    }
    if (patience < 0) add("patience must be >= 0, got " + std::to_string(patience));
    if (!densities.empty() && static_cast<int>(densities.size()) != resolved_output_dim(input_dim)) {
        add("densities must be empty or have one entry per output component (" +
            std::to_string(resolved_output_dim(input_dim)) + "), got " +
            std::to_string(densities.size()));
    }
    if (!problems.empty()) throw ConfigError("invalid training config:" + problems);
}

namespace {

nlohmann::json tensor_json(const Tensor& t) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < t.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < t.cols(); ++j) row.push_back(t(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Tensor tensor_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.empty() || !j[0].is_array()) {
        throw ContractError("weight file entry is not a 2-d array");
    }
    const int rows = static_cast<int>(j.size());
    const int cols = static_cast<int>(j[0].size());
    Tensor t(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (static_cast<int>(j[i].size()) != cols) {
            throw ContractError("weight file rows have inconsistent lengths");
        }
        for (int c = 0; c < cols; ++c) t(i, c) = j[i][c].get<double>();
    }
    return t;
}

Act act_from_name(const std::string& name) {
    if (name == "identity") return Act::identity;
    if (name == "leaky-relu") return Act::leaky_relu;
    if (name == "tanh") return Act::tanh_fn;
    if (name == "smooth-leaky") return Act::smooth_leaky;
    throw ContractError("unknown activation name in weight file: " + name);
}

}  // namespace

nlohmann::json mlp_weights_json(const Mlp& mlp) {
    nlohmann::json layers = nlohmann::json::array();
    for (const Layer& l : mlp.layers) {
        layers.push_back({{"W", tensor_json(l.W)},
                          {"b", tensor_json(l.b)},
                          {"act", act_name(l.act)},
                          {"alpha", l.alpha}});
    }
    return {{"format", "mlp-weights-v1"}, {"layers", std::move(layers)}};
}

Mlp mlp_from_weights_json(const nlohmann::json& j) {
    if (!j.contains("layers") || !j["layers"].is_array() || j["layers"].empty()) {
        throw ContractError("weight file has no layers");
    }
    Mlp mlp;
    for (const auto& lj : j["layers"]) {
        Layer l;
        l.W = tensor_from_json(lj.at("W"));
        l.b = tensor_from_json(lj.at("b"));
        l.act = act_from_name(lj.at("act").get<std::string>());
        l.alpha = lj.value("alpha", 0.2);
        mlp.layers.push_back(std::move(l));
    }
    mlp.validate();
    return mlp;
}

void write_matrix_csv(const Tensor& m, const std::string& path, const std::string& col_prefix) {
    std::ofstream out(path);
    if (!out) throw ContractError("cannot open " + path + " for writing");
    for (int j = 0; j < m.cols(); ++j) {
        if (j) out << ',';
        out << col_prefix << (j + 1);
    }
    out << '\n';
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << format_double(m(i, j));
        }
        out << '\n';
    }
}

void write_curve_csv(const std::vector<EpochMetrics>& curve, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ContractError("cannot open " + path + " for writing");
    out << "epoch,loss,heldout\n";
    for (const EpochMetrics& e : curve) {
        out << e.epoch << ',' << format_double(e.loss) << ',' << format_double(e.heldout)
            << '\n';
    }
}

double rank_auc(const std::vector<double>& positive_scores,
                const std::vector<double>& negative_scores) {
    if (positive_scores.empty() || negative_scores.empty()) {
        throw ContractError("AUC needs at least one score from each class");
    }
    std::vector<double> all;
    all.reserve(positive_scores.size() + negative_scores.size());
    all.insert(all.end(), positive_scores.begin(), positive_scores.end());
    all.insert(all.end(), negative_scores.begin(), negative_scores.end());
    const std::vector<double> r = ranks(all);  // 1-based, ties averaged
    double rank_sum = 0.0;
    for (std::size_t i = 0; i < positive_scores.size(); ++i) rank_sum += r[i];
    const double np = static_cast<double>(positive_scores.size());
    const double nn = static_cast<double>(negative_scores.size());
    return (rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

}  // namespace nlica
