// Shared configuration and result types for the trainable estimators, plus
// serialization of learned models and curves.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "nlica/activations.hpp"
#include "nlica/mlp.hpp"
#include "nlica/tensor.hpp"

namespace nlica {

struct TrainConfig {
    std::vector<int> hidden = {32, 32};  // feature-extractor widths
    int output_dim = 0;                  // d', 0 = same as input dimension
    int epochs = 400;
    int batch_size = 256;
    double learning_rate = 1e-3;
    std::uint64_t seed = 0;
    int patience = 0;  // early stop after this many epochs without held-out
                       // improvement; 0 trains to the last epoch

    // Per-component source densities for the likelihood objective; empty
    // means laplace everywhere. Ignored by the contrastive trainers.
    std::vector<SourceDensity> densities;

    // input_dim lets the validation enforce d' <= d.
    void validate(int input_dim) const;
    int resolved_output_dim(int input_dim) const {
        return output_dim == 0 ? input_dim : output_dim;
    }
};

struct EpochMetrics {
    int epoch = 0;
    double loss = 0.0;      // mean training loss (MLE: negative log-likelihood)
    double heldout = 0.0;   // pretext accuracy / AUC (MLE: exact log-likelihood)
};

struct EstimatorResult {
    Mlp extractor;                    // the learned map; z = extractor(x)
    Tensor z;                         // T x d' recovered components
    std::vector<EpochMetrics> curve;  // one entry per epoch
    double pretext_metric = 0.0;      // final held-out accuracy (TCL) or AUC (PCL/GCL)
    std::string method;
    bool converged = true;
};

// Extractor weights as JSON and back; round-trips exactly (doubles are
// stored losslessly by the JSON library).
nlohmann::json mlp_weights_json(const Mlp& mlp);
Mlp mlp_from_weights_json(const nlohmann::json& j);

// One row per sample with header <prefix>1..<prefix>k.
void write_matrix_csv(const Tensor& m, const std::string& path, const std::string& col_prefix);
// epoch,loss,heldout rows.
void write_curve_csv(const std::vector<EpochMetrics>& curve, const std::string& path);

// Area under the ROC curve from score samples of each class (rank
// statistic, ties averaged).
double rank_auc(const std::vector<double>& positive_scores,
                const std::vector<double>& negative_scores);

}  // namespace nlica
