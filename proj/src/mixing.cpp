#include "nlica/mixing.hpp"

#include <cmath>

#include "nlica/errors.hpp"
#include "nlica/linalg.hpp"
#include "nlica/rng.hpp"

namespace nlica {

void MixingNetwork::validate() const {
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const MixingLayer& layer = layers[l];
        layer.w.check_shape(d, d, "mixing layer " + std::to_string(l + 1) + " weight");
        if (layer.act != Act::identity && layer.act != Act::leaky_relu)
            throw ContractError("mixing layer " + std::to_string(l + 1) +
                                ": only identity and leaky-relu are invertible in closed form");
        if (layer.act == Act::leaky_relu && !(layer.alpha > 0.0 && layer.alpha < 1.0))
            throw ContractError("mixing layer " + std::to_string(l + 1) +
                                ": leaky-relu slope must lie in (0,1)");
    }
}

Tensor MixingNetwork::forward(const Tensor& s) const {
    if (s.cols() != d)
        throw DimensionError("mixing forward: input has " + std::to_string(s.cols()) +
                             " columns, network is " + std::to_string(d) + "-dimensional");
    Tensor h = s;
    for (const MixingLayer& layer : layers) {
        h = h.matmul(layer.w);
        if (layer.act != Act::identity)
            for (std::size_t i = 0; i < h.size(); ++i)
                h.data()[i] = act_eval(layer.act, layer.alpha, h.data()[i]);
    }
    return h;
}

Tensor MixingNetwork::inverse(const Tensor& x) const {
    if (x.cols() != d)
        throw DimensionError("mixing inverse: input has " + std::to_string(x.cols()) +
                             " columns, network is " + std::to_string(d) + "-dimensional");
    Tensor h = x;
    for (std::size_t li = layers.size(); li-- > 0;) {
        const MixingLayer& layer = layers[li];
        if (layer.act == Act::leaky_relu)
            for (std::size_t i = 0; i < h.size(); ++i)
                h.data()[i] = leaky_relu_inverse(layer.alpha, h.data()[i]);
        // Row convention h_out = h_in * w, so h_in^T = solve(w^T, h_out^T).
        Lu lu = lu_factor(layer.w.transpose());
        h = lu_solve(lu, h.transpose()).transpose();
    }
    return h;
}

MixingNetwork build_mixing(int d, int n_layers, double condition_bound, std::uint64_t seed,
                           double alpha) {
    if (d < 1) throw ConfigError("build_mixing: d must be >= 1, got " + std::to_string(d));
    if (n_layers < 0)
        throw ConfigError("build_mixing: n_layers must be >= 0, got " +
                          std::to_string(n_layers));
    if (!(condition_bound >= 1.0))
        throw ConfigError("build_mixing: condition_bound must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw ConfigError("build_mixing: leaky-relu slope must lie in (0,1)");

    MixingNetwork net;
    net.d = d;
    net.condition_bound = condition_bound;
    Rng rng = Rng::stream(seed, 0);

    for (int l = 0; l < n_layers; ++l) {
        Tensor w;
        if (condition_bound <= 1.0 + 1e-9) {
            // cond = 1 means scaled-orthogonal; sample one directly instead
            // of rejecting forever.
            w = random_orthogonal(rng, d);
        } else {
            bool accepted = false;
            for (int attempt = 0; attempt < 1000; ++attempt) {
                Tensor cand = Tensor::randn(rng, d, d);
                if (condition_number(cand) <= condition_bound) {
                    w = cand;
                    accepted = true;
                    break;
                }
            }
            if (!accepted)
                throw ConfigError("build_mixing: no weight with condition number <= " +
                                  std::to_string(condition_bound) + " in 1000 draws (d = " +
                                  std::to_string(d) + ")");
            // Normalize to |det| = 1: keeps the layer volume-preserving so
            // signals neither explode nor vanish with depth. Condition
            // number is scale-invariant, so the bound still holds.
            const double scale = std::exp(-lu_log_abs_det(lu_factor(w)) / d);
            w *= scale;
        }
        MixingLayer layer;
        layer.w = w;
        layer.alpha = alpha;
        layer.act = (l == n_layers - 1) ? Act::identity : Act::leaky_relu;
        net.layers.push_back(layer);
    }
    net.validate();
    return net;
}

Dataset apply_mixing(const MixingNetwork& net, const Dataset& ds) {
    if (!ds.has_sources())
        throw ContractError("apply_mixing: dataset has no ground-truth sources");
    if (ds.s_true.cols() != net.d)
        throw DimensionError("apply_mixing: sources have " + std::to_string(ds.s_true.cols()) +
                             " components, network is " + std::to_string(net.d) +
                             "-dimensional");
    Dataset out = ds;
    out.x = net.forward(ds.s_true);
    return out;
}

}  // namespace nlica
