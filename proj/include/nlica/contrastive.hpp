// Self-supervised estimators that recover nonlinearly mixed sources by
// classification: segment classification (TCL), real-vs-shuffled temporal
// pairs (PCL), and real-vs-shuffled (observation, auxiliary) pairs (GCL).
// Each learns a feature extractor h whose outputs, after the appropriate
// post-processing, match the true sources up to permutation/sign/monotone
// transformation.
#pragma once

#include "nlica/dataset.hpp"
#include "nlica/fastica.hpp"
#include "nlica/train_config.hpp"

namespace nlica {

// Multinomial logistic regression of the segment label on h(x). The
// returned extractor is h alone (the classification head is discarded);
// z = h(x), and pretext_metric is the held-out segment accuracy.
EstimatorResult train_tcl(const Dataset& ds, const TrainConfig& cfg);

// Logistic discrimination of true temporal pairs (x(t), x(t-1)) from
// time-shuffled ones, scored by r(a, b) = sum_i psi_i(h_i(a), h_i(b)).
// pretext_metric is the held-out AUC.
EstimatorResult train_pcl(const Dataset& ds, const TrainConfig& cfg);

// Logistic discrimination of true (x, u) pairs from aux-shuffled ones,
// scored by r(x, u) = sum_i psi_i(h_i(x), u). Requires ds.aux.
// pretext_metric is the held-out AUC.
EstimatorResult train_gcl(const Dataset& ds, const TrainConfig& cfg);

// Appends the linear ICA map fitted on base.z to base.extractor, so the
// composed extractor still satisfies z = extractor(x). Used to rotate
// TCL/GCL features onto the sources.
EstimatorResult compose_linear_ica(const EstimatorResult& base, const Dataset& ds,
                                   std::uint64_t seed);

// train_tcl followed by compose_linear_ica.
EstimatorResult tcl_pipeline(const Dataset& ds, const TrainConfig& cfg);

// The feature extractor exactly as train_tcl initializes it, before any
// update: the training-free control for recovery comparisons. Same
// preconditions as train_tcl.
Mlp tcl_initial_extractor(const Dataset& ds, const TrainConfig& cfg);

}  // namespace nlica
