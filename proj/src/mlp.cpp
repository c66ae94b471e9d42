#include "nlica/mlp.hpp"

#include <cmath>

namespace nlica {

int Mlp::input_dim() const {
    if (layers.empty()) throw ContractError("empty MLP");
    return layers.front().W.rows();
}

int Mlp::output_dim() const {
    if (layers.empty()) throw ContractError("empty MLP");
    return layers.back().W.cols();
}

void Mlp::validate() const {
    if (layers.empty()) throw ContractError("empty MLP");
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const Layer& ly = layers[l];
        if (ly.b.rows() != 1 || ly.b.cols() != ly.W.cols())
            throw DimensionError("layer " + std::to_string(l + 1) + ": bias shape mismatch");
        if (l > 0 && layers[l - 1].W.cols() != ly.W.rows())
            throw DimensionError("layer " + std::to_string(l + 1) + ": not chain-compatible");
        if (!ly.W.all_finite() || !ly.b.all_finite())
            throw NumericError("layer " + std::to_string(l + 1) + ": non-finite weights");
    }
}

Tensor Mlp::forward(const Tensor& batch) const {
    if (batch.cols() != input_dim())
        throw DimensionError("forward: batch has " + std::to_string(batch.cols()) +
                             " columns, MLP expects " + std::to_string(input_dim()));
    Tensor h = batch;
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const Layer& ly = layers[l];
        h = h.matmul(ly.W).add_row_broadcast(ly.b);
        if (ly.act != Act::identity)
            h = h.map([&](double v) { return act_eval(ly.act, ly.alpha, v); });
        if (!h.all_finite())
            throw NumericError("forward: non-finite value at layer " + std::to_string(l + 1));
    }
    return h;
}

Mlp Mlp::make(Rng& rng, int input_dim, const std::vector<int>& hidden, int output_dim,
              Act hidden_act, double alpha) {
    if (input_dim <= 0 || output_dim <= 0) throw ContractError("Mlp::make: dims must be positive");
    Mlp m;
    int in = input_dim;
    for (int width : hidden) {
        if (width <= 0) throw ContractError("Mlp::make: hidden width must be positive");
        Layer ly;
        ly.W = Tensor::randn(rng, in, width, std::sqrt(2.0 / in));
        ly.b = Tensor::zeros(1, width);
        ly.act = hidden_act;
        ly.alpha = alpha;
        m.layers.push_back(std::move(ly));
        in = width;
    }
    Layer out;
    out.W = Tensor::randn(rng, in, output_dim, std::sqrt(1.0 / in));
    out.b = Tensor::zeros(1, output_dim);
    out.act = Act::identity;
    m.layers.push_back(std::move(out));
    return m;
}

TapeMlp register_mlp(Tape& tape, const Mlp& mlp) {
    TapeMlp n;
    for (const Layer& ly : mlp.layers) {
        n.w.push_back(tape.param(ly.W));
        n.b.push_back(tape.param(ly.b));
    }
    return n;
}

Tape::Node mlp_forward(Tape& tape, const TapeMlp& nodes, const Mlp& mlp, Tape::Node in) {
    Tape::Node h = in;
    for (std::size_t l = 0; l < mlp.layers.size(); ++l) {
        h = tape.add_bias(tape.matmul(h, nodes.w[l]), nodes.b[l]);
        const Layer& ly = mlp.layers[l];
        if (ly.act != Act::identity) h = tape.activation(h, ly.act, ly.alpha);
        if (!tape.value(h).all_finite())
            throw NumericError("forward: non-finite value at layer " + std::to_string(l + 1));
    }
    return h;
}

std::vector<Tensor*> mlp_params(Mlp& mlp) {
    std::vector<Tensor*> p;
    for (Layer& ly : mlp.layers) {
        p.push_back(&ly.W);
        p.push_back(&ly.b);
    }
    return p;
}

std::vector<const Tensor*> mlp_grads(const Tape& tape, const TapeMlp& nodes) {
    std::vector<const Tensor*> g;
    for (std::size_t l = 0; l < nodes.w.size(); ++l) {
        g.push_back(&tape.grad(nodes.w[l]));
        g.push_back(&tape.grad(nodes.b[l]));
    }
    return g;
}

}  // namespace nlica
