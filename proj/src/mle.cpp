#include "nlica/mle.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "nlica/errors.hpp"
#include "nlica/linalg.hpp"
#include "nlica/tape.hpp"

namespace nlica {

namespace {

constexpr double kSingularDet = 1e-12;

// Sum of log|det W_l| over layers; false when a layer is singular or the
// result would not be finite (used for line-search trials, which must not
// throw).
bool layer_logdets(const std::vector<Layer>& layers, double& out) {
    out = 0.0;
    for (const Layer& l : layers) {
        double ld;
        try {
            ld = lu_log_abs_det(lu_factor(l.W));
        } catch (const NumericError&) {
            return false;  // exactly singular pivot
        }
        if (!std::isfinite(ld) || ld < std::log(kSingularDet)) return false;
        out += ld;
    }
    return true;
}

// Mean log-likelihood per point; false on singular weights or non-finite
// intermediate values.
bool try_loglik(const std::vector<Layer>& layers, const Tensor& x,
                const std::vector<SourceDensity>& densities, double& out) {
    double logdet_static;
    if (!layer_logdets(layers, logdet_static)) return false;

    const int T = x.rows();
    double acc = static_cast<double>(T) * logdet_static;
    Tensor h = x;
    for (const Layer& l : layers) {
        Tensor pre = h.matmul(l.W).add_row_broadcast(l.b);
        if (l.act != Act::identity) {
            for (int t = 0; t < pre.rows(); ++t) {
                for (int j = 0; j < pre.cols(); ++j) {
                    acc += act_log_deriv(l.act, l.alpha, pre(t, j));
                }
            }
            h = pre.map([&](double v) { return act_eval(l.act, l.alpha, v); });
        } else {
            h = std::move(pre);
        }
    }
    for (int t = 0; t < T; ++t) {
        for (int j = 0; j < h.cols(); ++j) {
            acc += log_density(densities[j], h(t, j));
        }
    }
    if (!std::isfinite(acc)) return false;
    out = acc / static_cast<double>(T);
    return true;
}

void check_square_invertible(const Mlp& g, int d) {
    for (std::size_t l = 0; l < g.layers.size(); ++l) {
        const Layer& layer = g.layers[l];
        if (layer.W.rows() != d || layer.W.cols() != d) {
            throw ContractError("likelihood needs square layers: layer " +
                                std::to_string(l + 1) + " is " +
                                std::to_string(layer.W.rows()) + " x " +
                                std::to_string(layer.W.cols()) + " for d = " +
                                std::to_string(d));
        }
        if (layer.act != Act::identity && layer.act != Act::smooth_leaky) {
            throw ContractError("likelihood needs an invertible smooth activation, layer " +
                                std::to_string(l + 1) + " uses " + act_name(layer.act));
        }
    }
}

}  // namespace

double mle_loglik(const Mlp& g, const Tensor& x, const std::vector<SourceDensity>& densities) {
    if (g.layers.empty()) throw ContractError("likelihood of an empty model");
    check_square_invertible(g, x.cols());
    if (static_cast<int>(densities.size()) != x.cols()) {
        throw ContractError("need one source density per column: " +
                            std::to_string(densities.size()) + " densities for " +
                            std::to_string(x.cols()) + " columns");
    }
    for (std::size_t l = 0; l < g.layers.size(); ++l) {
        double ld;
        if (!layer_logdets({g.layers[l]}, ld)) {
            throw NumericError("layer " + std::to_string(l + 1) +
                               " weight is singular (|det| < 1e-12)");
        }
    }
    double ll;
    if (!try_loglik(g.layers, x, densities, ll)) {
        throw NumericError("log-likelihood is not finite for this model and data");
    }
    return ll;
}

double mle_logdet_at(const Mlp& g, const Tensor& x_row) {
    if (g.layers.empty()) throw ContractError("log-det of an empty model");
    x_row.check_shape(1, g.layers.front().W.rows(), "log-det evaluation point");
    check_square_invertible(g, x_row.cols());
    double acc = 0.0;
    Tensor h = x_row;
    for (std::size_t l = 0; l < g.layers.size(); ++l) {
        const Layer& layer = g.layers[l];
        double ld;
        if (!layer_logdets({layer}, ld)) {
            throw NumericError("layer " + std::to_string(l + 1) +
                               " weight is singular (|det| < 1e-12)");
        }
        acc += ld;
        Tensor pre = h.matmul(layer.W).add_row_broadcast(layer.b);
        for (int j = 0; j < pre.cols(); ++j) {
            acc += act_log_deriv(layer.act, layer.alpha, pre(0, j));
        }
        h = pre.map([&](double v) { return act_eval(layer.act, layer.alpha, v); });
    }
    return acc;
}

EstimatorResult train_mle(const Dataset& ds, const TrainConfig& cfg) {
    ds.validate();
    const int d = ds.x.cols();
    const int T = ds.T();
    cfg.validate(d);
    const int dp = cfg.resolved_output_dim(d);
    if (dp != d) {
        throw ContractError("maximum-likelihood unmixing is square: d' = " +
                            std::to_string(dp) + " but d = " + std::to_string(d));
    }
    if (T < 2 * d) {
        throw ContractError("need at least 2d samples to fit a square unmixing, got " +
                            std::to_string(T));
    }
    std::vector<SourceDensity> densities = cfg.densities;
    if (densities.empty()) densities.assign(d, SourceDensity::laplace);

    // Fixed centering layer so the trained stack sees zero-mean data.
    Layer centering;
    centering.W = Tensor::identity(d);
    centering.b = Tensor(1, d);
    {
        const auto mu = ds.x.col_mean();
        for (int j = 0; j < d; ++j) centering.b(0, j) = -mu[j];
    }
    const Tensor xc = ds.x.add_row_broadcast(centering.b);

    // Trained stack: cfg.hidden.size() blocks of (linear, smooth-leaky)
    // then a final plain linear layer. Biases stay zero; the sources are
    // modeled as centered.
    const int n_linear = static_cast<int>(cfg.hidden.size()) + 1;
    Rng wrng = Rng::stream(cfg.seed, 41);
    std::vector<Layer> layers(n_linear);
    for (int l = 0; l < n_linear; ++l) {
        layers[l].W = Tensor::identity(d) + Tensor::randn(wrng, d, d, 0.05 / std::sqrt(d));
        layers[l].b = Tensor(1, d);
        layers[l].act = l + 1 < n_linear ? Act::smooth_leaky : Act::identity;
    }

    double ll;
    if (!try_loglik(layers, xc, densities, ll)) {
        throw NumericError("initial model has a singular layer or non-finite likelihood");
    }

    EstimatorResult res;
    res.method = "mle";
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        // Gradient of the data terms (source log-density + activation
        // log-derivatives) of the mean log-likelihood; the log|det W| terms
        // are folded in analytically by the relative-gradient form below.
        Tape tape;
        std::vector<Tape::Node> wnodes(n_linear);
        Tape::Node h = tape.input(xc);
        Tape::Node data_sum = -1;
        for (int l = 0; l < n_linear; ++l) {
            wnodes[l] = tape.param(layers[l].W);
            const Tape::Node pre = tape.matmul(h, wnodes[l]);
            if (layers[l].act != Act::identity) {
                const Tape::Node ld =
                    tape.sum_all(tape.log_act_deriv(pre, layers[l].act, layers[l].alpha));
                data_sum = data_sum < 0 ? ld : tape.add(data_sum, ld);
                h = tape.activation(pre, layers[l].act, layers[l].alpha);
            } else {
                h = pre;
            }
        }
        for (int j = 0; j < d; ++j) {
            const Tape::Node lp =
                tape.sum_all(tape.log_density_of(tape.select_col(h, j), densities[j]));
            data_sum = data_sum < 0 ? lp : tape.add(data_sum, lp);
        }
        const Tape::Node objective = tape.scale(data_sum, 1.0 / static_cast<double>(T));
        tape.backward(objective);

        // Relative-gradient ascent direction per layer (rows act on the
        // right, so the column-convention update (G W^T + I) W transposes
        // to W W^T G + W).
        std::vector<Tensor> direction(n_linear);
        for (int l = 0; l < n_linear; ++l) {
            const Tensor& W = layers[l].W;
            direction[l] = W.matmul(W.transpose()).matmul(tape.grad(wnodes[l])) + W;
        }

        // Backtracking step: halve until the exact likelihood improves.
        double eps = cfg.learning_rate;
        bool stepped = false;
        for (int attempt = 0; attempt < 40; ++attempt) {
            std::vector<Layer> trial = layers;
            for (int l = 0; l < n_linear; ++l) trial[l].W += direction[l].scaled(eps);
            double trial_ll;
            if (try_loglik(trial, xc, densities, trial_ll) &&
                trial_ll >= ll - 1e-12 * (1.0 + std::fabs(ll))) {
                layers = std::move(trial);
                ll = trial_ll;
                stepped = true;
                break;
            }
            eps *= 0.5;
        }
        res.curve.push_back({epoch, -ll, ll});
        if (!stepped) break;  // ascent direction exhausted: at a stationary point
    }

    res.extractor.layers.push_back(std::move(centering));
    for (Layer& l : layers) res.extractor.layers.push_back(std::move(l));
    res.z = res.extractor.forward(ds.x);
    res.pretext_metric = 0.0;  // likelihood training has no pretext task
    return res;
}

}  // namespace nlica
