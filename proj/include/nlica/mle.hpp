// Noise-free maximum-likelihood unmixing. The demixing map g is a stack of
// square linear layers with a smooth strictly-increasing elementwise
// nonlinearity between them, so log|det Jg| splits into per-layer
// log|det W| terms plus elementwise log-derivatives. Linear layers are
// trained with the relative-gradient update W <- W + eps (G W^T + T I) W,
// which folds the Jacobian term in without any matrix inversion; a
// backtracking step size keeps the exact log-likelihood monotone.
#pragma once

#include "nlica/dataset.hpp"
#include "nlica/train_config.hpp"

namespace nlica {

// cfg.hidden.size() sets the number of extra (linear, smooth-leaky) blocks
// in front of the final linear layer (the widths themselves are ignored —
// every layer is square). cfg.densities picks the per-component source
// model, defaulting to laplace.
//
// curve entries carry loss = -LL and heldout = LL (exact mean
// log-likelihood per point over the full dataset).
EstimatorResult train_mle(const Dataset& ds, const TrainConfig& cfg);

// Exact mean log-likelihood per point of x under the square invertible
// model g: (1/T) sum_t [ sum_i log p_i(g_i(x(t))) + log|det Jg(x(t))| ].
// Every layer of g must be square with an identity or smooth-leaky
// activation; NumericError if a layer weight is singular (|det| < 1e-12).
double mle_loglik(const Mlp& g, const Tensor& x, const std::vector<SourceDensity>& densities);

// log|det Jg(x)| at one point (x_row is 1 x d), from the layerwise
// decomposition. Same layer requirements as mle_loglik.
double mle_logdet_at(const Mlp& g, const Tensor& x_row);

}  // namespace nlica
