#include "nlica/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "nlica/assignment.hpp"
#include "nlica/errors.hpp"

namespace nlica {
namespace {

std::vector<double> column_of(const Tensor& m, int j) {
    std::vector<double> out(static_cast<std::size_t>(m.rows()));
    for (int i = 0; i < m.rows(); ++i) out[static_cast<std::size_t>(i)] = m(i, j);
    return out;
}

void check_variance(const Tensor& m, const char* which) {
    const std::vector<double> sd = m.col_std();
    const std::vector<double> mean = m.col_mean();
    for (std::size_t j = 0; j < sd.size(); ++j)
        // Relative floor: a column of identical values can pick up ~1e-15
        // of rounding noise from the mean subtraction.
        if (!(sd[j] > 1e-12 * (1.0 + std::fabs(mean[j]))))
            throw NumericError(std::string(which) + " component " + std::to_string(j + 1) +
                               " has zero variance");
}

}  // namespace

MatchReport mcc_score(const Tensor& s_true, const Tensor& z, CorrMode mode) {
    if (s_true.rows() != z.rows())
        throw DimensionError("mcc: s_true has " + std::to_string(s_true.rows()) + " rows, z has " +
                             std::to_string(z.rows()));
    if (s_true.rows() < 3) throw DimensionError("mcc: need at least 3 samples");
    if (z.cols() > s_true.cols())
        throw DimensionError("mcc: more estimated components (" + std::to_string(z.cols()) +
                             ") than true ones (" + std::to_string(s_true.cols()) + ")");
    check_variance(s_true, "true");
    check_variance(z, "estimated");

    const int d_est = z.cols();
    const int d_true = s_true.cols();
    std::vector<std::vector<double>> est_cols, true_cols;
    for (int i = 0; i < d_est; ++i) est_cols.push_back(column_of(z, i));
    for (int j = 0; j < d_true; ++j) true_cols.push_back(column_of(s_true, j));
    if (mode == CorrMode::spearman) {
        for (auto& c : est_cols) c = ranks(c);
        for (auto& c : true_cols) c = ranks(c);
    }

    MatchReport rep;
    rep.mode = mode;
    rep.correlation = Tensor::zeros(d_est, d_true);
    for (int i = 0; i < d_est; ++i)
        for (int j = 0; j < d_true; ++j)
            rep.correlation(i, j) = std::fabs(
                pearson(est_cols[static_cast<std::size_t>(i)], true_cols[static_cast<std::size_t>(j)]));

    rep.assignment = max_weight_assignment(rep.correlation);
    double total = 0.0;
    for (int i = 0; i < d_est; ++i) {
        const double c = rep.correlation(i, rep.assignment[static_cast<std::size_t>(i)]);
        rep.per_component.push_back(c);
        total += c;
    }
    rep.mcc = total / d_est;
    return rep;
}

double ks_uniformity(const std::vector<double>& column) {
    if (column.empty()) throw ContractError("ks_uniformity: empty column");
    std::vector<double> v = column;
    std::sort(v.begin(), v.end());
    if (v.front() < 0.0 || v.back() > 1.0)
        throw ContractError("ks_uniformity: values outside [0, 1]");
    const double n = static_cast<double>(v.size());
    double dist = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double lo = v[i] - static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n - v[i];
        dist = std::max({dist, lo, hi});
    }
    return dist;
}

nlohmann::json match_report_json(const MatchReport& r) {
    nlohmann::json corr = nlohmann::json::array();
    for (int i = 0; i < r.correlation.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < r.correlation.cols(); ++j) row.push_back(r.correlation(i, j));
        corr.push_back(row);
    }
    return nlohmann::json{{"mcc", r.mcc},
                          {"mode", corr_mode_name(r.mode)},
                          {"assignment", r.assignment},
                          {"per_component", r.per_component},
                          {"correlation", corr}};
}

}  // namespace nlica
