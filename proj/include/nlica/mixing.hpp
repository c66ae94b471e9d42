// Invertible mixing networks: square weights with condition-number control,
// leaky-relu hidden activations, identity output layer. The closed-form
// inverse is the oracle the estimators are judged against.
#pragma once

#include <cstdint>

#include "nlica/activations.hpp"
#include "nlica/dataset.hpp"
#include "nlica/tensor.hpp"

namespace nlica {

struct MixingLayer {
    Tensor w;  // d x d, acts on row vectors: h -> h * w
    Act act = Act::leaky_relu;
    double alpha = 0.2;
};

struct MixingNetwork {
    int d = 0;
    double condition_bound = 10.0;
    std::vector<MixingLayer> layers;  // empty = identity mixing

    // Applies every layer to each row of s (T x d). DimensionError on width
    // mismatch.
    Tensor forward(const Tensor& s) const;
    // Exact inverse: undoes activations and solves each linear map.
    Tensor inverse(const Tensor& x) const;
    void validate() const;
};

// Samples layer weights with condition number <= condition_bound (rejection,
// at most 1000 draws per layer; ConfigError on exhaustion), normalized to
// unit |det| so signal scale is stable through depth. condition_bound <= 1
// requests orthogonal weights, which are constructed directly. Hidden layers
// get leaky-relu (slope alpha), the final layer identity; n_layers = 0 gives
// the identity map, n_layers = 1 a purely linear mixing.
MixingNetwork build_mixing(int d, int n_layers, double condition_bound, std::uint64_t seed,
                           double alpha = 0.2);

// x = forward(s_true) pointwise in t; everything else carried over.
Dataset apply_mixing(const MixingNetwork& net, const Dataset& ds);

}  // namespace nlica
