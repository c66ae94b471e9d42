// Multilayer perceptron over Tensor batches (rows = samples), plus the glue
// for running one on a Tape during training.
#pragma once

#include <vector>

#include "nlica/tape.hpp"
#include "nlica/tensor.hpp"

namespace nlica {

struct Layer {
    Tensor W;            // in x out
    Tensor b;            // 1 x out
    Act act = Act::identity;
    double alpha = 0.2;  // leaky / smooth-leaky slope
};

struct Mlp {
    std::vector<Layer> layers;

    int input_dim() const;
    int output_dim() const;

    // Pure evaluation; throws NumericError naming the layer if a
    // non-finite value appears.
    Tensor forward(const Tensor& batch) const;

    void validate() const;  // chain-compatible dimensions, finite weights

    // He-style scaled Gaussian init; hidden layers use hidden_act, the
    // output layer is linear.
    static Mlp make(Rng& rng, int input_dim, const std::vector<int>& hidden, int output_dim,
                    Act hidden_act = Act::leaky_relu, double alpha = 0.2);
};

// Parameter node handles for an Mlp registered on a tape.
struct TapeMlp {
    std::vector<Tape::Node> w;
    std::vector<Tape::Node> b;
};

TapeMlp register_mlp(Tape& tape, const Mlp& mlp);
Tape::Node mlp_forward(Tape& tape, const TapeMlp& nodes, const Mlp& mlp, Tape::Node in);

// Pointers to all parameter tensors, layer order (W then b per layer).
std::vector<Tensor*> mlp_params(Mlp& mlp);
// Gradients in the same order, after tape.backward().
std::vector<const Tensor*> mlp_grads(const Tape& tape, const TapeMlp& nodes);

}  // namespace nlica
