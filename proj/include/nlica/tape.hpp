// Define-by-run reverse-mode autodiff. A Tape is rebuilt per batch: leaves
// are copied in, ops evaluate eagerly, backward() fills adjoints in reverse
// topological order (which is just tape order).
#pragma once

#include <vector>

#include "nlica/activations.hpp"
#include "nlica/tensor.hpp"

namespace nlica {

class Tape {
public:
    using Node = int;

    // Leaves. Parameters are tracked so backward() can guarantee each has
    // an adjoint of matching shape afterwards.
    Node input(Tensor value);
    Node param(Tensor value);

    Node matmul(Node a, Node b);
    Node add(Node a, Node b);                    // same shape
    Node add_bias(Node x, Node bias);            // bias is 1 x c, broadcast over rows
    Node scale(Node x, double c);
    Node activation(Node x, Act act, double alpha = 0.2);
    Node log_act_deriv(Node x, Act act, double alpha);   // elementwise log f'(x)
    Node log_density_of(Node x, SourceDensity d);        // elementwise log p(x)
    Node select_col(Node x, int j);              // n x 1 view copy
    Node concat_cols(Node a, Node b);            // horizontal stack
    Node sum_all(Node x);                        // 1 x 1

    // Mean softmax cross-entropy over rows; labels are 0-based class ids.
    Node softmax_cross_entropy(Node logits, std::vector<int> labels);

    // Mean logistic loss softplus(-sign * s) for a score column whose rows
    // all carry the same label sign (+1 or -1).
    Node logistic_loss(Node scores, double label_sign);

    const Tensor& value(Node n) const { return nodes_[n].val; }
    const Tensor& grad(Node n) const;

    // Seeds the loss adjoint with 1 and sweeps the tape in reverse.
    // ContractError unless the loss node is 1x1.
    void backward(Node loss);

    int size() const { return static_cast<int>(nodes_.size()); }

private:
    enum class Op {
        leaf,
        matmul,
        add,
        add_bias,
        scale,
        act,
        log_act_deriv,
        log_pdf,
        select_col,
        concat_cols,
        sum_all,
        softmax_xent,
        logistic
    };

    struct Rec {
        Op op = Op::leaf;
        int a = -1, b = -1;
        double c = 0.0;      // scale factor / alpha / label sign
        Act act = Act::identity;
        SourceDensity pdf = SourceDensity::laplace;
        int col = 0;
        bool is_param = false;
        Tensor val;
        Tensor adj;          // allocated during backward
        Tensor cache;        // softmax probabilities
        std::vector<int> labels;
    };

    Node push(Rec r);
    Tensor& adj(Node n);

    std::vector<Rec> nodes_;
    bool ran_backward_ = false;
};

}  // namespace nlica
