#include <algorithm>
#include <string>
#include <vector>

#include "nlica/adam.hpp"
#include "nlica/contrastive.hpp"
#include "nlica/errors.hpp"
#include "train_detail.hpp"

namespace nlica {

namespace {

double segment_accuracy(const Mlp& h, const Mlp& head, const Tensor& x,
                        const std::vector<int>& labels, const std::vector<int>& rows) {
    const Tensor logits = head.forward(h.forward(x.take_rows(rows)));
    int hits = 0;
    for (int r = 0; r < logits.rows(); ++r) {
        int arg = 0;
        for (int c = 1; c < logits.cols(); ++c) {
            if (logits(r, c) > logits(r, arg)) arg = c;
        }
        if (arg == labels[rows[r]]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(rows.size());
}

void check_tcl_preconditions(const Dataset& ds, const TrainConfig& cfg) {
    ds.validate();
    if (!ds.has_segments() || ds.n_segments < 2) {
        throw ContractError("TCL needs segment labels with at least 2 segments, got " +
                            std::to_string(ds.n_segments));
    }
    cfg.validate(ds.x.cols());
    std::vector<int> seg_count(ds.n_segments + 1, 0);
    for (int s : ds.segments) ++seg_count[s];
    for (int k = 1; k <= ds.n_segments; ++k) {
        if (seg_count[k] < cfg.batch_size) {
            throw ContractError("segment " + std::to_string(k) + " has " +
                                std::to_string(seg_count[k]) +
                                " points, fewer than the batch size " +
                                std::to_string(cfg.batch_size));
        }
    }
}

}  // namespace

EstimatorResult train_tcl(const Dataset& ds, const TrainConfig& cfg) {
    check_tcl_preconditions(ds, cfg);
    const int d = ds.x.cols();
    const int dp = cfg.resolved_output_dim(d);
    Rng wrng = Rng::stream(cfg.seed, 11);
    Mlp h = Mlp::make(wrng, d, cfg.hidden, dp);
    Mlp head = Mlp::make(wrng, dp, {}, ds.n_segments);

    std::vector<int> labels(ds.T());
    for (int t = 0; t < ds.T(); ++t) labels[t] = ds.segments[t] - 1;

    std::vector<int> train_idx, held_idx;
    detail::stratified_split(ds.segments, train_idx, held_idx);

    std::vector<Tensor*> params = mlp_params(h);
    for (Tensor* p : mlp_params(head)) params.push_back(p);
    AdamState opt;
    opt.cfg.learning_rate = cfg.learning_rate;
    Rng order_rng = Rng::stream(cfg.seed, 12);
    detail::EarlyStop stop;
    stop.patience = cfg.patience;

    EstimatorResult res;
    res.method = "tcl";
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        order_rng.shuffle(train_idx);
        double loss_sum = 0.0;
        int n_batches = 0;
        for (std::size_t start = 0; start < train_idx.size(); start += cfg.batch_size) {
            const std::size_t end = std::min(start + cfg.batch_size, train_idx.size());
            const std::vector<int> rows(train_idx.begin() + start, train_idx.begin() + end);
            std::vector<int> batch_labels(rows.size());
            for (std::size_t r = 0; r < rows.size(); ++r) batch_labels[r] = labels[rows[r]];

            Tape tape;
            const TapeMlp th = register_mlp(tape, h);
            const TapeMlp thead = register_mlp(tape, head);
            const Tape::Node feat = mlp_forward(tape, th, h, tape.input(ds.x.take_rows(rows)));
            const Tape::Node logits = mlp_forward(tape, thead, head, feat);
            const Tape::Node loss = tape.softmax_cross_entropy(logits, batch_labels);
            tape.backward(loss);

            std::vector<const Tensor*> grads = mlp_grads(tape, th);
            for (const Tensor* g : mlp_grads(tape, thead)) grads.push_back(g);
            adam_step(params, grads, opt);
            loss_sum += tape.value(loss)(0, 0);
            ++n_batches;
        }
        const double acc = segment_accuracy(h, head, ds.x, labels, held_idx);
        res.curve.push_back({epoch, loss_sum / n_batches, acc});
        if (stop.observe(acc, params)) break;
    }
    stop.finish(params);

    res.pretext_metric = segment_accuracy(h, head, ds.x, labels, held_idx);
    res.extractor = std::move(h);
    res.z = res.extractor.forward(ds.x);
    return res;
}

EstimatorResult compose_linear_ica(const EstimatorResult& base, const Dataset& ds,
                                   std::uint64_t seed) {
    const IcaResult ica = linear_ica(base.z, base.z.cols(), seed);
    EstimatorResult out = base;
    Layer lin;
    lin.W = ica.unmixing.transpose();
    lin.b = ica.mean.matmul(lin.W).scaled(-1.0);
    lin.act = Act::identity;
    out.extractor.layers.push_back(std::move(lin));
    out.z = out.extractor.forward(ds.x);  // keeps z = extractor(x) exact
    out.method = base.method + "+ica";
    out.converged = base.converged && ica.converged;
    return out;
}

EstimatorResult tcl_pipeline(const Dataset& ds, const TrainConfig& cfg) {
    return compose_linear_ica(train_tcl(ds, cfg), ds, cfg.seed);
}

Mlp tcl_initial_extractor(const Dataset& ds, const TrainConfig& cfg) {
    check_tcl_preconditions(ds, cfg);
    const int d = ds.x.cols();
    Rng wrng = Rng::stream(cfg.seed, 11);
    return Mlp::make(wrng, d, cfg.hidden, cfg.resolved_output_dim(d));
}

}  // namespace nlica
