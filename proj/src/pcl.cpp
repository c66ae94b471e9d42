#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "nlica/adam.hpp"
#include "nlica/contrastive.hpp"
#include "nlica/errors.hpp"
#include "train_detail.hpp"

namespace nlica {

namespace {

// r(a, b) = sum_i psi_i(h_i(a), h_i(b)) for whole batches at once.
std::vector<double> pair_scores(const Mlp& h, const std::vector<Mlp>& psi, const Tensor& xa,
                                const Tensor& xb) {
    const Tensor fa = h.forward(xa);
    const Tensor fb = h.forward(xb);
    const int n = xa.rows();
    std::vector<double> s(n, 0.0);
    for (std::size_t i = 0; i < psi.size(); ++i) {
        Tensor in(n, 2);
        for (int r = 0; r < n; ++r) {
            in(r, 0) = fa(r, static_cast<int>(i));
            in(r, 1) = fb(r, static_cast<int>(i));
        }
        const Tensor out = psi[i].forward(in);
        for (int r = 0; r < n; ++r) s[r] += out(r, 0);
    }
    return s;
}

int draw_partner(Rng& rng, int T, int t) {
    int v;
    do {
        v = rng.below(T);
    } while (v == t || v == t - 1);
    return v;
}

}  // namespace

EstimatorResult train_pcl(const Dataset& ds, const TrainConfig& cfg) {
    ds.validate();
    const int T = ds.T();
    const int d = ds.x.cols();
    if (T < 3) {
        throw ContractError("PCL needs at least 3 time points to form shuffled pairs, got " +
                            std::to_string(T));
    }
    cfg.validate(d);
    {
        const auto sd = ds.x.col_std();
        const auto mu = ds.x.col_mean();
        for (int j = 0; j < d; ++j) {
            if (!(sd[j] > 1e-12 * (1.0 + std::fabs(mu[j])))) {
                throw NumericError("observation column " + std::to_string(j + 1) +
                                   " is (nearly) constant; temporal pairs are degenerate");
            }
        }
    }

    const int dp = cfg.resolved_output_dim(d);
    Rng wrng = Rng::stream(cfg.seed, 21);
    Mlp h = Mlp::make(wrng, d, cfg.hidden, dp);
    std::vector<Mlp> psi;
    psi.reserve(dp);
    for (int i = 0; i < dp; ++i) psi.push_back(Mlp::make(wrng, 2, {16}, 1));

    // Positive pair p has anchor t = p + 1 and true partner t - 1.
    std::vector<int> train_p, held_p;
    detail::tail_split(T - 1, train_p, held_p);

    // Fixed evaluation pairs: held-out anchors with negatives drawn once.
    Rng eval_rng = Rng::stream(cfg.seed, 23);
    std::vector<int> held_anchor(held_p.size()), held_true(held_p.size()),
        held_neg(held_p.size());
    for (std::size_t i = 0; i < held_p.size(); ++i) {
        const int t = held_p[i] + 1;
        held_anchor[i] = t;
        held_true[i] = t - 1;
        held_neg[i] = draw_partner(eval_rng, T, t);
    }
    const Tensor xa_held = ds.x.take_rows(held_anchor);
    const Tensor xb_held = ds.x.take_rows(held_true);
    const Tensor xn_held = ds.x.take_rows(held_neg);

    std::vector<Tensor*> params = mlp_params(h);
    for (Mlp& m : psi) {
        for (Tensor* p : mlp_params(m)) params.push_back(p);
    }
    AdamState opt;
    opt.cfg.learning_rate = cfg.learning_rate;
    Rng order_rng = Rng::stream(cfg.seed, 22);
    Rng neg_rng = Rng::stream(cfg.seed, 24);
    detail::EarlyStop stop;
    stop.patience = cfg.patience;

    auto heldout_auc = [&] {
        return rank_auc(pair_scores(h, psi, xa_held, xb_held),
                        pair_scores(h, psi, xa_held, xn_held));
    };

    EstimatorResult res;
    res.method = "pcl";
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        order_rng.shuffle(train_p);
        double loss_sum = 0.0;
        int n_batches = 0;
        for (std::size_t start = 0; start < train_p.size(); start += cfg.batch_size) {
            const std::size_t end = std::min(start + cfg.batch_size, train_p.size());
            const int B = static_cast<int>(end - start);
            std::vector<int> anchor(B), truep(B), negp(B);
            for (int r = 0; r < B; ++r) {
                const int t = train_p[start + r] + 1;
                anchor[r] = t;
                truep[r] = t - 1;
                negp[r] = draw_partner(neg_rng, T, t);  // fresh negatives every epoch
            }

            Tape tape;
            const TapeMlp th = register_mlp(tape, h);
            std::vector<TapeMlp> tpsi;
            tpsi.reserve(psi.size());
            for (const Mlp& m : psi) tpsi.push_back(register_mlp(tape, m));

            const Tape::Node fa = mlp_forward(tape, th, h, tape.input(ds.x.take_rows(anchor)));
            const Tape::Node fb = mlp_forward(tape, th, h, tape.input(ds.x.take_rows(truep)));
            const Tape::Node fn = mlp_forward(tape, th, h, tape.input(ds.x.take_rows(negp)));

            Tape::Node score_pos = -1, score_neg = -1;
            for (int i = 0; i < dp; ++i) {
                const Tape::Node pi = mlp_forward(
                    tape, tpsi[i], psi[i],
                    tape.concat_cols(tape.select_col(fa, i), tape.select_col(fb, i)));
                const Tape::Node ni = mlp_forward(
                    tape, tpsi[i], psi[i],
                    tape.concat_cols(tape.select_col(fa, i), tape.select_col(fn, i)));
                score_pos = i == 0 ? pi : tape.add(score_pos, pi);
                score_neg = i == 0 ? ni : tape.add(score_neg, ni);
            }
            const Tape::Node loss =
                tape.scale(tape.add(tape.logistic_loss(score_pos, 1.0),
                                    tape.logistic_loss(score_neg, -1.0)),
                           0.5);
            tape.backward(loss);

            std::vector<const Tensor*> grads = mlp_grads(tape, th);
            for (const TapeMlp& tm : tpsi) {
                for (const Tensor* g : mlp_grads(tape, tm)) grads.push_back(g);
            }
            adam_step(params, grads, opt);
            loss_sum += tape.value(loss)(0, 0);
            ++n_batches;
        }
        const double auc = heldout_auc();
        res.curve.push_back({epoch, loss_sum / n_batches, auc});
        if (stop.observe(auc, params)) break;
    }
    stop.finish(params);

    res.pretext_metric = heldout_auc();
    res.extractor = std::move(h);
    res.z = res.extractor.forward(ds.x);
    return res;
}

}  // namespace nlica
