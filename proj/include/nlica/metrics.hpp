// Source-recovery scoring: matched correlations across the ICA
// indeterminacies (order, sign, scale; monotone transforms in rank mode),
// plus the Kolmogorov-Smirnov uniformity distance.
#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "nlica/tensor.hpp"

namespace nlica {

enum class CorrMode { pearson, spearman };

struct MatchReport {
    Tensor correlation;                 // d_est x d_true, absolute correlations
    std::vector<int> assignment;        // true-component column per estimated component
    double mcc = 0.0;                   // mean matched |correlation|
    std::vector<double> per_component;  // matched |correlation| per estimated component
    CorrMode mode = CorrMode::pearson;
};

// Matches every estimated component (column of z) to a distinct true
// component (column of s_true) by maximum-weight assignment on absolute
// correlations. z may have fewer columns than s_true; the score averages
// over the estimated ones. Zero-variance columns raise NumericError naming
// the column. Spearman mode rank-transforms both sides first.
MatchReport mcc_score(const Tensor& s_true, const Tensor& z, CorrMode mode);

// Sup distance between the empirical CDF of column and the uniform(0,1) CDF.
// ContractError if any value falls outside [0, 1].
double ks_uniformity(const std::vector<double>& column);

nlohmann::json match_report_json(const MatchReport& r);

inline const char* corr_mode_name(CorrMode m) {
    return m == CorrMode::pearson ? "pearson" : "spearman";
}

}  // namespace nlica
