#include "nlica/tape.hpp"

#include <cmath>

namespace nlica {

Tape::Node Tape::push(Rec r) {
    nodes_.push_back(std::move(r));
    return static_cast<Node>(nodes_.size() - 1);
}

Tensor& Tape::adj(Node n) {
    Rec& rec = nodes_[n];
    if (rec.adj.empty()) rec.adj = Tensor::zeros(rec.val.rows(), rec.val.cols());
    return rec.adj;
}

Tape::Node Tape::input(Tensor value) {
    Rec r;
    r.val = std::move(value);
    return push(std::move(r));
}

Tape::Node Tape::param(Tensor value) {
    Rec r;
    r.val = std::move(value);
    r.is_param = true;
    return push(std::move(r));
}

Tape::Node Tape::matmul(Node a, Node b) {
    Rec r;
    r.op = Op::matmul;
    r.a = a;
    r.b = b;
    r.val = nodes_[a].val.matmul(nodes_[b].val);
    return push(std::move(r));
}

Tape::Node Tape::add(Node a, Node b) {
    Rec r;
    r.op = Op::add;
    r.a = a;
    r.b = b;
    r.val = nodes_[a].val + nodes_[b].val;
    return push(std::move(r));
}

Tape::Node Tape::add_bias(Node x, Node bias) {
    Rec r;
    r.op = Op::add_bias;
    r.a = x;
    r.b = bias;
    r.val = nodes_[x].val.add_row_broadcast(nodes_[bias].val);
    return push(std::move(r));
}

Tape::Node Tape::scale(Node x, double c) {
    Rec r;
    r.op = Op::scale;
    r.a = x;
    r.c = c;
    r.val = nodes_[x].val.scaled(c);
    return push(std::move(r));
}

Tape::Node Tape::activation(Node x, Act act, double alpha) {
    Rec r;
    r.op = Op::act;
    r.a = x;
    r.act = act;
    r.c = alpha;
    r.val = nodes_[x].val.map([&](double v) { return act_eval(act, alpha, v); });
    return push(std::move(r));
}

Tape::Node Tape::log_act_deriv(Node x, Act act, double alpha) {
    Rec r;
    r.op = Op::log_act_deriv;
    r.a = x;
    r.act = act;
    r.c = alpha;
    r.val = nodes_[x].val.map([&](double v) { return nlica::act_log_deriv(act, alpha, v); });
    return push(std::move(r));
}

Tape::Node Tape::log_density_of(Node x, SourceDensity d) {
    Rec r;
    r.op = Op::log_pdf;
    r.a = x;
    r.pdf = d;
    r.val = nodes_[x].val.map([&](double v) { return log_density(d, v); });
    return push(std::move(r));
}

Tape::Node Tape::select_col(Node x, int j) {
    Rec r;
    r.op = Op::select_col;
    r.a = x;
    r.col = j;
    r.val = nodes_[x].val.col(j);
    return push(std::move(r));
}

Tape::Node Tape::concat_cols(Node a, Node b) {
    Rec r;
    r.op = Op::concat_cols;
    r.a = a;
    r.b = b;
    r.val = nodes_[a].val.hstack(nodes_[b].val);
    return push(std::move(r));
}

Tape::Node Tape::sum_all(Node x) {
    Rec r;
    r.op = Op::sum_all;
    r.a = x;
    r.val = Tensor::full(1, 1, nodes_[x].val.sum());
    return push(std::move(r));
}

Tape::Node Tape::softmax_cross_entropy(Node logits, std::vector<int> labels) {
    const Tensor& z = nodes_[logits].val;
    if (static_cast<int>(labels.size()) != z.rows())
        throw DimensionError("softmax_cross_entropy: one label per row required");
    Rec r;
    r.op = Op::softmax_xent;
    r.a = logits;
    r.labels = std::move(labels);
    r.cache = Tensor(z.rows(), z.cols());
    double loss = 0.0;
    for (int i = 0; i < z.rows(); ++i) {
        const double* zi = z.row(i);
        double m = zi[0];
        for (int j = 1; j < z.cols(); ++j) m = std::max(m, zi[j]);
        double denom = 0.0;
        for (int j = 0; j < z.cols(); ++j) denom += std::exp(zi[j] - m);
        const double log_denom = std::log(denom) + m;
        for (int j = 0; j < z.cols(); ++j) r.cache(i, j) = std::exp(zi[j] - log_denom);
        const int y = r.labels[i];
        if (y < 0 || y >= z.cols())
            throw ContractError("softmax_cross_entropy: label out of range");
        loss -= zi[y] - log_denom;
    }
    r.val = Tensor::full(1, 1, loss / z.rows());
    return push(std::move(r));
}

Tape::Node Tape::logistic_loss(Node scores, double label_sign) {
    const Tensor& s = nodes_[scores].val;
    if (s.cols() != 1) throw DimensionError("logistic_loss: expected a score column");
    Rec r;
    r.op = Op::logistic;
    r.a = scores;
    r.c = label_sign;
    double loss = 0.0;
    for (int i = 0; i < s.rows(); ++i) loss += softplus(-label_sign * s(i, 0));
    r.val = Tensor::full(1, 1, loss / s.rows());
    return push(std::move(r));
}

const Tensor& Tape::grad(Node n) const {
    if (!ran_backward_) throw ContractError("grad() before backward()");
    if (nodes_[n].adj.empty()) throw ContractError("node has no adjoint (unreached leaf?)");
    return nodes_[n].adj;
}

void Tape::backward(Node loss) {
    const Rec& top = nodes_[loss];
    if (top.val.rows() != 1 || top.val.cols() != 1)
        throw ContractError("backward: loss node must be scalar (1x1)");
    // every parameter ends up with a defined adjoint, reachable or not
    for (auto& rec : nodes_)
        if (rec.is_param && rec.adj.empty()) rec.adj = Tensor::zeros(rec.val.rows(), rec.val.cols());
    adj(loss)(0, 0) = 1.0;

    for (Node n = loss; n >= 0; --n) {
        Rec& rec = nodes_[n];
        if (rec.adj.empty()) continue;  // not on a path to the loss
        const Tensor& g = rec.adj;
        switch (rec.op) {
            case Op::leaf:
                break;
            case Op::matmul: {
                const Tensor& a = nodes_[rec.a].val;
                const Tensor& b = nodes_[rec.b].val;
                adj(rec.a) += g.matmul(b.transpose());
                adj(rec.b) += a.transpose().matmul(g);
                break;
            }
            case Op::add:
                adj(rec.a) += g;
                adj(rec.b) += g;
                break;
            case Op::add_bias: {
                adj(rec.a) += g;
                Tensor& gb = adj(rec.b);
                for (int i = 0; i < g.rows(); ++i)
                    for (int j = 0; j < g.cols(); ++j) gb(0, j) += g(i, j);
                break;
            }
            case Op::scale:
                adj(rec.a) += g.scaled(rec.c);
                break;
            case Op::act: {
                const Tensor& x = nodes_[rec.a].val;
                Tensor& gx = adj(rec.a);
                for (int i = 0; i < x.rows(); ++i)
                    for (int j = 0; j < x.cols(); ++j)
                        gx(i, j) += g(i, j) * act_deriv(rec.act, rec.c, x(i, j));
                break;
            }
            case Op::log_act_deriv: {
                const Tensor& x = nodes_[rec.a].val;
                Tensor& gx = adj(rec.a);
                for (int i = 0; i < x.rows(); ++i)
                    for (int j = 0; j < x.cols(); ++j)
                        gx(i, j) += g(i, j) * act_log_deriv_grad(rec.act, rec.c, x(i, j));
                break;
            }
            case Op::log_pdf: {
                const Tensor& x = nodes_[rec.a].val;
                Tensor& gx = adj(rec.a);
                for (int i = 0; i < x.rows(); ++i)
                    for (int j = 0; j < x.cols(); ++j)
                        gx(i, j) += g(i, j) * log_density_grad(rec.pdf, x(i, j));
                break;
            }
            case Op::select_col: {
                Tensor& gx = adj(rec.a);
                for (int i = 0; i < g.rows(); ++i) gx(i, rec.col) += g(i, 0);
                break;
            }
            case Op::concat_cols: {
                Tensor& ga = adj(rec.a);
                Tensor& gb = adj(rec.b);
                const int ca = ga.cols();
                for (int i = 0; i < g.rows(); ++i) {
                    for (int j = 0; j < ca; ++j) ga(i, j) += g(i, j);
                    for (int j = 0; j < gb.cols(); ++j) gb(i, j) += g(i, ca + j);
                }
                break;
            }
            case Op::sum_all: {
                const double s = g(0, 0);
                Tensor& gx = adj(rec.a);
                for (int i = 0; i < gx.rows(); ++i)
                    for (int j = 0; j < gx.cols(); ++j) gx(i, j) += s;
                break;
            }
            case Op::softmax_xent: {
                const double s = g(0, 0) / rec.cache.rows();
                Tensor& gx = adj(rec.a);
                for (int i = 0; i < rec.cache.rows(); ++i) {
                    for (int j = 0; j < rec.cache.cols(); ++j)
                        gx(i, j) += s * rec.cache(i, j);
                    gx(i, rec.labels[i]) -= s;
                }
                break;
            }
            case Op::logistic: {
                const Tensor& s = nodes_[rec.a].val;
                const double w = g(0, 0) / s.rows();
                Tensor& gx = adj(rec.a);
                for (int i = 0; i < s.rows(); ++i)
                    gx(i, 0) += w * (-rec.c) * sigmoid(-rec.c * s(i, 0));
                break;
            }
        }
    }
    ran_backward_ = true;
}

}  // namespace nlica
