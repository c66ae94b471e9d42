#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "nlica/adam.hpp"
#include "nlica/contrastive.hpp"
#include "nlica/errors.hpp"
#include "train_detail.hpp"

namespace nlica {

namespace {

// r(x, u) = sum_i psi_i(h_i(x), u) for a batch; u rows are supplied
// separately so negatives reuse the same features.
std::vector<double> aux_scores(const Mlp& h, const std::vector<Mlp>& psi, const Tensor& x,
                               const Tensor& u) {
    const Tensor f = h.forward(x);
    const int n = x.rows();
    const int k = u.cols();
    std::vector<double> s(n, 0.0);
    for (std::size_t i = 0; i < psi.size(); ++i) {
        Tensor in(n, 1 + k);
        for (int r = 0; r < n; ++r) {
            in(r, 0) = f(r, static_cast<int>(i));
            for (int c = 0; c < k; ++c) in(r, 1 + c) = u(r, c);
        }
        const Tensor out = psi[i].forward(in);
        for (int r = 0; r < n; ++r) s[r] += out(r, 0);
    }
    return s;
}

}  // namespace

EstimatorResult train_gcl(const Dataset& ds, const TrainConfig& cfg) {
    ds.validate();
    if (!ds.has_aux()) {
        throw ContractError("GCL needs auxiliary variables; attach them with "
                            "attach_auxiliary() or provide them in the dataset");
    }
    const int T = ds.T();
    const int d = ds.x.cols();
    const int k = ds.aux.cols();
    cfg.validate(d);

    const int dp = cfg.resolved_output_dim(d);
    Rng wrng = Rng::stream(cfg.seed, 31);
    Mlp h = Mlp::make(wrng, d, cfg.hidden, dp);
    std::vector<Mlp> psi;
    psi.reserve(dp);
    for (int i = 0; i < dp; ++i) psi.push_back(Mlp::make(wrng, 1 + k, {16}, 1));

    std::vector<int> train_t, held_t;
    detail::tail_split(T, train_t, held_t);

    // Fixed evaluation set: held-out rows with one aux permutation drawn once.
    Rng eval_rng = Rng::stream(cfg.seed, 33);
    std::vector<int> eval_perm(T);
    std::iota(eval_perm.begin(), eval_perm.end(), 0);
    eval_rng.shuffle(eval_perm);
    std::vector<int> held_negrow(held_t.size());
    for (std::size_t i = 0; i < held_t.size(); ++i) held_negrow[i] = eval_perm[held_t[i]];
    const Tensor x_held = ds.x.take_rows(held_t);
    const Tensor u_held = ds.aux.take_rows(held_t);
    const Tensor u_held_neg = ds.aux.take_rows(held_negrow);

    std::vector<Tensor*> params = mlp_params(h);
    for (Mlp& m : psi) {
        for (Tensor* p : mlp_params(m)) params.push_back(p);
    }
    AdamState opt;
    opt.cfg.learning_rate = cfg.learning_rate;
    Rng order_rng = Rng::stream(cfg.seed, 32);
    Rng neg_rng = Rng::stream(cfg.seed, 34);
    detail::EarlyStop stop;
    stop.patience = cfg.patience;

    auto heldout_auc = [&] {
        return rank_auc(aux_scores(h, psi, x_held, u_held),
                        aux_scores(h, psi, x_held, u_held_neg));
    };

    EstimatorResult res;
    res.method = "gcl";
    std::vector<int> perm(T);
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        order_rng.shuffle(train_t);
        std::iota(perm.begin(), perm.end(), 0);
        neg_rng.shuffle(perm);  // fresh within-dataset aux shuffle every epoch

        double loss_sum = 0.0;
        int n_batches = 0;
        for (std::size_t start = 0; start < train_t.size(); start += cfg.batch_size) {
            const std::size_t end = std::min(start + cfg.batch_size, train_t.size());
            const std::vector<int> rows(train_t.begin() + start, train_t.begin() + end);
            std::vector<int> negrow(rows.size());
            for (std::size_t r = 0; r < rows.size(); ++r) negrow[r] = perm[rows[r]];

            Tape tape;
            const TapeMlp th = register_mlp(tape, h);
            std::vector<TapeMlp> tpsi;
            tpsi.reserve(psi.size());
            for (const Mlp& m : psi) tpsi.push_back(register_mlp(tape, m));

            const Tape::Node f = mlp_forward(tape, th, h, tape.input(ds.x.take_rows(rows)));
            const Tape::Node up = tape.input(ds.aux.take_rows(rows));
            const Tape::Node un = tape.input(ds.aux.take_rows(negrow));

            Tape::Node score_pos = -1, score_neg = -1;
            for (int i = 0; i < dp; ++i) {
                const Tape::Node pi = mlp_forward(tape, tpsi[i], psi[i],
                                                  tape.concat_cols(tape.select_col(f, i), up));
                const Tape::Node ni = mlp_forward(tape, tpsi[i], psi[i],
                                                  tape.concat_cols(tape.select_col(f, i), un));
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
