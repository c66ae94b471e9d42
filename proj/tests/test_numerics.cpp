#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "nlica/adam.hpp"
#include "nlica/errors.hpp"
#include "nlica/linalg.hpp"
#include "nlica/mlp.hpp"
#include "nlica/rng.hpp"
#include "nlica/tape.hpp"
#include "nlica/tensor.hpp"

using namespace nlica;

namespace {

// Floored relative error between an autodiff and a finite-difference value.
double rel_err(double a, double b) {
    const double denom = std::max({std::fabs(a), std::fabs(b), 1e-3});
    return std::fabs(a - b) / denom;
}

// Central finite differences of a scalar loss with respect to every entry of
// every parameter tensor of an Mlp. Step 1e-5.
template <class LossFn>
double max_gradcheck_error(Mlp& mlp, LossFn loss_of_model) {
    // Autodiff gradients once.
    Tape tape;
    TapeMlp tm = register_mlp(tape, mlp);
    Tape::Node loss = loss_of_model(tape, tm);
    tape.backward(loss);
    std::vector<const Tensor*> grads = mlp_grads(tape, tm);
    std::vector<Tensor*> params = mlp_params(mlp);

    const double h = 1e-5;
    double worst = 0.0;
    for (std::size_t p = 0; p < params.size(); ++p) {
        Tensor& w = *params[p];
        for (std::size_t i = 0; i < w.size(); ++i) {
            const double keep = w.data()[i];
            w.data()[i] = keep + h;
            Tape tp;
            TapeMlp tmp = register_mlp(tp, mlp);
            const double fp = tp.value(loss_of_model(tp, tmp))(0, 0);
            w.data()[i] = keep - h;
            Tape tn;
            TapeMlp tmn = register_mlp(tn, mlp);
            const double fn = tn.value(loss_of_model(tn, tmn))(0, 0);
            w.data()[i] = keep;
            const double fd = (fp - fn) / (2.0 * h);
            worst = std::max(worst, rel_err(grads[p]->data()[i], fd));
        }
    }
    return worst;
}

}  // namespace

// ---------------------------------------------------------------------------
// Tensor

TEST_CASE("matmul matches hand arithmetic") {
    Tensor a = Tensor::from_rows({{1, 2, 3}, {4, 5, 6}});
    Tensor b = Tensor::from_rows({{7, 8}, {9, 10}, {11, 12}});
    Tensor c = a.matmul(b);
    // Row 0: (1*7+2*9+3*11, 1*8+2*10+3*12) = (58, 64); row 1: (139, 154).
    CHECK(c(0, 0) == 58.0);
    CHECK(c(0, 1) == 64.0);
    CHECK(c(1, 0) == 139.0);
    CHECK(c(1, 1) == 154.0);
}

TEST_CASE("matmul rejects incompatible shapes") {
    Tensor a = Tensor::zeros(2, 3);
    Tensor b = Tensor::zeros(2, 3);
    CHECK_THROWS_AS(a.matmul(b), DimensionError);
}

TEST_CASE("transpose, hadamard, broadcast add") {
    Tensor a = Tensor::from_rows({{1, 2}, {3, 4}});
    Tensor at = a.transpose();
    CHECK(at(0, 1) == 3.0);
    CHECK(at(1, 0) == 2.0);
    Tensor h = a.hadamard(a);
    CHECK(h(1, 1) == 16.0);
    Tensor row = Tensor::from_rows({{10, 20}});
    Tensor s = a.add_row_broadcast(row);
    CHECK(s(0, 0) == 11.0);
    CHECK(s(1, 1) == 24.0);
}

TEST_CASE("column statistics match hand values") {
    Tensor a = Tensor::from_rows({{1, 10}, {2, 20}, {3, 30}});
    auto mean = a.col_mean();
    CHECK(mean[0] == doctest::Approx(2.0));
    CHECK(mean[1] == doctest::Approx(20.0));
    auto sd = a.col_std();
    CHECK(sd[0] == doctest::Approx(1.0));  // sample sd of {1,2,3}
    CHECK(sd[1] == doctest::Approx(10.0));
}

TEST_CASE("ranks average ties") {
    std::vector<double> v = {3, 1, 4, 1, 5};
    std::vector<double> r = ranks(v);
    CHECK(r[0] == doctest::Approx(3.0));
    CHECK(r[1] == doctest::Approx(1.5));
    CHECK(r[2] == doctest::Approx(4.0));
    CHECK(r[3] == doctest::Approx(1.5));
    CHECK(r[4] == doctest::Approx(5.0));
}

TEST_CASE("pearson and spearman on known sequences") {
    std::vector<double> x = {1, 2, 3, 4, 5};
    std::vector<double> y = {2, 4, 6, 8, 10};
    CHECK(pearson(x, y) == doctest::Approx(1.0));
    std::vector<double> yr(y.rbegin(), y.rend());
    CHECK(pearson(x, yr) == doctest::Approx(-1.0));
    // Monotone nonlinear map: Spearman stays 1, Pearson drops below.
    std::vector<double> ycube;
    for (double v : x) ycube.push_back(v * v * v);
    CHECK(spearman(x, ycube) == doctest::Approx(1.0));
    CHECK(pearson(x, ycube) < 1.0);
    std::vector<double> z = {1, 1, 1, 1, 1};
    CHECK_THROWS_AS(pearson(x, z), NumericError);
}

// ---------------------------------------------------------------------------
// Rng

TEST_CASE("identical seeds give identical streams") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("derived streams differ") {
    Rng a = Rng::stream(42, 0);
    Rng b = Rng::stream(42, 1);
    int same = 0;
    for (int i = 0; i < 64; ++i) same += (a.next_u64() == b.next_u64());
    CHECK(same == 0);
}

TEST_CASE("sampler moments match their distributions") {
    // Sample statistics vs. configured parameters; n = 20000 keeps the
    // standard error of each mean below ~0.01.
    Rng rng(7);
    const int n = 20000;
    double su = 0, sn = 0, sn2 = 0, sl2 = 0;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        su += u;
        const double g = rng.normal();
        sn += g;
        sn2 += g * g;
        const double l = rng.laplace(2.0);
        sl2 += l * l;
    }
    CHECK(su / n == doctest::Approx(0.5).epsilon(0.02));
    CHECK(std::fabs((sn / n) - (0.0)) <= 0.03);
    CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.05));
    CHECK(sl2 / n == doctest::Approx(8.0).epsilon(0.10));  // var = 2 b^2
}

TEST_CASE("shuffle permutes") {
    Rng rng(3);
    std::vector<int> v = {1, 2, 3, 4, 5, 6, 7, 8};
    std::vector<int> orig = v;
    rng.shuffle(v);
    std::vector<int> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == orig);
}

// ---------------------------------------------------------------------------
// Linear algebra

TEST_CASE("determinants match cofactor expansion") {
    Tensor a = Tensor::from_rows({{4, 3}, {6, 3}});
    CHECK(lu_det(lu_factor(a)) == doctest::Approx(-6.0));
    // det = 2*(3*1-2*1) - 0 + 1*(1*1-3*0) = 3
    Tensor b = Tensor::from_rows({{2, 0, 1}, {1, 3, 2}, {0, 1, 1}});
    CHECK(lu_det(lu_factor(b)) == doctest::Approx(3.0));
    CHECK(lu_log_abs_det(lu_factor(b)) == doctest::Approx(std::log(3.0)));
}

TEST_CASE("singular matrix reports a zero pivot") {
    Tensor s = Tensor::from_rows({{1, 2}, {2, 4}});
    CHECK_THROWS_AS(lu_log_abs_det(lu_factor(s)), NumericError);
}

TEST_CASE("lu_solve and inverse reproduce identities") {
    Rng rng(11);
    Tensor a = Tensor::randn(rng, 5, 5);
    Tensor x_true = Tensor::randn(rng, 5, 3);
    Tensor b = a.matmul(x_true);
    Tensor x = lu_solve(lu_factor(a), b);
    CHECK((x - x_true).abs_max() < 1e-10);
    Tensor ainv = inverse(a);
    Tensor eye = a.matmul(ainv);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) CHECK(std::fabs((eye(i, j)) - (i == j ? 1.0 : 0.0)) <= 1e-10);
}

TEST_CASE("symmetric eigensolver on a known matrix") {
    // [[2,1],[1,2]] has eigenvalues 3 and 1.
    Tensor a = Tensor::from_rows({{2, 1}, {1, 2}});
    Tensor v;
    std::vector<double> w;
    sym_eig(a, v, w);
    CHECK(w[0] == doctest::Approx(3.0));
    CHECK(w[1] == doctest::Approx(1.0));
    // A v_k = w_k v_k, columns orthonormal.
    for (int k = 0; k < 2; ++k) {
        for (int i = 0; i < 2; ++i) {
            double av = 0;
            for (int j = 0; j < 2; ++j) av += a(i, j) * v(j, k);
            CHECK(std::fabs((av) - (w[static_cast<std::size_t>(k)] * v(i, k))) <= 1e-10);
        }
    }
    const double dot = v(0, 0) * v(0, 1) + v(1, 0) * v(1, 1);
    CHECK(std::fabs((dot) - (0.0)) <= 1e-12);
}

TEST_CASE("singular values and condition numbers") {
    Tensor d = Tensor::from_rows({{3, 0}, {0, 2}});
    auto sv = singular_values(d);
    CHECK(sv[0] == doctest::Approx(3.0));
    CHECK(sv[1] == doctest::Approx(2.0));
    CHECK(condition_number(d) == doctest::Approx(1.5));
    Tensor s = Tensor::from_rows({{1, 2}, {2, 4}});
    CHECK(std::isinf(condition_number(s)));
}

TEST_CASE("random orthogonal matrices are orthogonal") {
    Rng rng(5);
    for (int n : {2, 4, 7}) {
        Tensor q = random_orthogonal(rng, n);
        Tensor qtq = q.transpose().matmul(q);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                CHECK(std::fabs((qtq(i, j)) - (i == j ? 1.0 : 0.0)) <= 1e-10);
    }
}

TEST_CASE("sym_inv_sqrt inverts the square root") {
    Rng rng(9);
    Tensor m = Tensor::randn(rng, 4, 4);
    Tensor spd = m.transpose().matmul(m);
    for (int i = 0; i < 4; ++i) spd(i, i) += 0.5;
    Tensor b = sym_inv_sqrt(spd);
    Tensor should_be_eye = b.matmul(spd).matmul(b);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(std::fabs((should_be_eye(i, j)) - (i == j ? 1.0 : 0.0)) <= 1e-9);
}

// ---------------------------------------------------------------------------
// Activations and densities

TEST_CASE("activation derivatives match finite differences") {
    const double h = 1e-6;
    for (Act a : {Act::identity, Act::leaky_relu, Act::tanh_fn, Act::smooth_leaky}) {
        for (double x : {-2.0, -0.5, 0.7, 3.0}) {  // away from the leaky kink
            const double fd = (act_eval(a, 0.2, x + h) - act_eval(a, 0.2, x - h)) / (2 * h);
            CHECK(act_deriv(a, 0.2, x) == doctest::Approx(fd).epsilon(1e-6));
        }
    }
}

TEST_CASE("log-derivative helpers agree with their definitions") {
    for (double x : {-3.0, -1.0, 0.0, 2.0}) {
        CHECK(act_log_deriv(Act::smooth_leaky, 0.2, x) ==
              doctest::Approx(std::log(act_deriv(Act::smooth_leaky, 0.2, x))));
        const double h = 1e-6;
        const double fd = (act_log_deriv(Act::smooth_leaky, 0.2, x + h) -
                           act_log_deriv(Act::smooth_leaky, 0.2, x - h)) /
                          (2 * h);
        CHECK(act_log_deriv_grad(Act::smooth_leaky, 0.2, x) == doctest::Approx(fd).epsilon(1e-5));
    }
    CHECK_THROWS_AS(act_log_deriv(Act::leaky_relu, 0.2, 1.0), ContractError);
}

TEST_CASE("leaky-relu inverse round-trips") {
    for (double x : {-5.0, -0.1, 0.0, 0.3, 8.0}) {
        const double y = act_eval(Act::leaky_relu, 0.2, x);
        CHECK(std::fabs((leaky_relu_inverse(0.2, y)) - (x)) <= 1e-15);
    }
}

TEST_CASE("log densities integrate to one") {
    // Trapezoid quadrature as the oracle for the normalization constants.
    auto integrate = [](SourceDensity d, double lo, double hi, int n) {
        double acc = 0.0;
        const double step = (hi - lo) / n;
        for (int i = 0; i <= n; ++i) {
            const double z = lo + i * step;
            const double w = (i == 0 || i == n) ? 0.5 : 1.0;
            acc += w * std::exp(log_density(d, z));
        }
        return acc * step;
    };
    CHECK(integrate(SourceDensity::laplace, -40, 40, 40000) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(integrate(SourceDensity::gauss_mix2, -40, 40, 40000) ==
          doctest::Approx(1.0).epsilon(1e-6));
    CHECK(integrate(SourceDensity::student3, -2000, 2000, 400000) ==
          doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("density score functions match finite differences") {
    const double h = 1e-6;
    for (SourceDensity d :
         {SourceDensity::laplace, SourceDensity::gauss_mix2, SourceDensity::student3}) {
        for (double z : {-2.5, -0.7, 0.4, 1.9}) {
            const double fd = (log_density(d, z + h) - log_density(d, z - h)) / (2 * h);
            CHECK(log_density_grad(d, z) == doctest::Approx(fd).epsilon(1e-5));
        }
    }
}

// ---------------------------------------------------------------------------
// Tape

TEST_CASE("gradient of sum(W x) is the input spread across rows") {
    // loss = sum_ij (W x)_ij has d/dW_ab = sum_j x_bj.
    Tape tape;
    Tensor wv = Tensor::from_rows({{1, 2}, {3, 4}});
    Tensor xv = Tensor::from_rows({{5, 6, 7}, {8, 9, 10}});
    Tape::Node w = tape.param(wv);
    Tape::Node x = tape.input(xv);
    Tape::Node loss = tape.sum_all(tape.matmul(w, x));
    tape.backward(loss);
    const Tensor& g = tape.grad(w);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            double expect = 0;
            for (int j = 0; j < 3; ++j) expect += xv(b, j);
            CHECK(g(a, b) == doctest::Approx(expect));
        }
}

TEST_CASE("gradient of tanh(w x) at w = 0 is x") {
    Tape tape;
    Tensor wv = Tensor::zeros(1, 3);
    Tensor xv = Tensor::from_rows({{0.4}, {-1.2}, {2.5}});
    Tape::Node w = tape.param(wv);
    Tape::Node x = tape.input(xv);
    Tape::Node loss = tape.sum_all(tape.activation(tape.matmul(w, x), Act::tanh_fn));
    tape.backward(loss);
    const Tensor& g = tape.grad(w);
    for (int j = 0; j < 3; ++j) CHECK(g(0, j) == doctest::Approx(xv(j, 0)));
}

TEST_CASE("backward requires a scalar loss") {
    Tape tape;
    Tape::Node x = tape.param(Tensor::from_rows({{1, 2}}));
    CHECK_THROWS_AS(tape.backward(x), ContractError);
}

TEST_CASE("grad before backward is a contract violation") {
    Tape tape;
    Tape::Node x = tape.param(Tensor::from_rows({{1}}));
    CHECK_THROWS_AS(tape.grad(x), ContractError);
}

TEST_CASE("softmax cross-entropy rejects out-of-range labels") {
    Tape tape;
    Tape::Node logits = tape.input(Tensor::zeros(2, 3));
    CHECK_THROWS_AS(tape.softmax_cross_entropy(logits, {0, 3}), ContractError);
}

TEST_CASE("logistic loss gradient matches finite differences") {
    Rng rng(21);
    Mlp mlp = Mlp::make(rng, 4, {8, 6}, 1);
    Tensor batch = Tensor::randn(rng, 10, 4);
    auto loss_fn = [&](Tape& tape, TapeMlp& tm) {
        Tape::Node in = tape.input(batch);
        Tape::Node out = mlp_forward(tape, tm, mlp, in);
        return tape.logistic_loss(out, 1.0);
    };
    CHECK(max_gradcheck_error(mlp, loss_fn) <= 1e-5);
}

TEST_CASE("softmax cross-entropy gradient matches finite differences") {
    Rng rng(22);
    Mlp mlp = Mlp::make(rng, 3, {10}, 4);
    Tensor batch = Tensor::randn(rng, 12, 3);
    std::vector<int> labels;
    for (int i = 0; i < 12; ++i) labels.push_back(i % 4);
    auto loss_fn = [&](Tape& tape, TapeMlp& tm) {
        Tape::Node in = tape.input(batch);
        Tape::Node out = mlp_forward(tape, tm, mlp, in);
        return tape.softmax_cross_entropy(out, labels);
    };
    CHECK(max_gradcheck_error(mlp, loss_fn) <= 1e-5);
}

TEST_CASE("composite tape ops differentiate correctly") {
    // Exercise select_col, concat_cols, add, scale, log_act_deriv and
    // log_density_of in one scalar objective against finite differences.
    Rng rng(23);
    Mlp mlp = Mlp::make(rng, 3, {6}, 3, Act::smooth_leaky);
    Tensor batch = Tensor::randn(rng, 9, 3);
    auto loss_fn = [&](Tape& tape, TapeMlp& tm) {
        Tape::Node in = tape.input(batch);
        Tape::Node out = mlp_forward(tape, tm, mlp, in);
        Tape::Node c0 = tape.select_col(out, 0);
        Tape::Node c2 = tape.select_col(out, 2);
        Tape::Node pair = tape.concat_cols(c0, c2);
        Tape::Node lp = tape.log_density_of(pair, SourceDensity::gauss_mix2);
        Tape::Node ld = tape.log_act_deriv(pair, Act::smooth_leaky, 0.2);
        Tape::Node both = tape.add(lp, ld);
        return tape.scale(tape.sum_all(both), 1.0 / 9.0);
    };
    CHECK(max_gradcheck_error(mlp, loss_fn) <= 1e-5);
}

TEST_CASE("random small MLPs pass the gradient check") {
    // Property over random architectures: <= 3 layers, <= 16 units.
    Rng rng(31);
    for (int trial = 0; trial < 6; ++trial) {
        const int in_dim = 1 + rng.below(5);
        std::vector<int> hidden;
        const int n_hidden = rng.below(3);
        for (int l = 0; l < n_hidden; ++l) hidden.push_back(1 + rng.below(16));
        const int out_dim = 1 + rng.below(4);
        const Act hact = (trial % 2 == 0) ? Act::tanh_fn : Act::smooth_leaky;
        Mlp mlp = Mlp::make(rng, in_dim, hidden, out_dim, hact);
        Tensor batch = Tensor::randn(rng, 7, in_dim);
        std::vector<int> labels;
        for (int i = 0; i < 7; ++i) labels.push_back(i % out_dim);
        auto loss_fn = [&](Tape& tape, TapeMlp& tm) {
            Tape::Node in = tape.input(batch);
            Tape::Node out = mlp_forward(tape, tm, mlp, in);
            if (out_dim == 1) return tape.logistic_loss(out, -1.0);
            return tape.softmax_cross_entropy(out, labels);
        };
        CHECK(max_gradcheck_error(mlp, loss_fn) <= 1e-5);
    }
}

// ---------------------------------------------------------------------------
// Mlp forward

TEST_CASE("identity layer passes input through") {
    Mlp mlp;
    mlp.layers.push_back({Tensor::identity(3), Tensor::zeros(1, 3), Act::identity, 0.2});
    Rng rng(1);
    Tensor x = Tensor::randn(rng, 5, 3);
    Tensor y = mlp.forward(x);
    CHECK((y - x).abs_max() == 0.0);
}

TEST_CASE("scalar affine layer computes 2*3 + 1") {
    Mlp mlp;
    mlp.layers.push_back({Tensor::from_rows({{2}}), Tensor::from_rows({{1}}), Act::identity, 0.2});
    Tensor y = mlp.forward(Tensor::from_rows({{3}}));
    CHECK(y(0, 0) == 7.0);
}

TEST_CASE("forward matches a straight-line hand evaluation") {
    // Independent oracle: evaluate the same weights with bare loops.
    Rng rng(17);
    Mlp mlp = Mlp::make(rng, 3, {4}, 2, Act::leaky_relu, 0.2);
    Tensor x = Tensor::randn(rng, 6, 3);
    Tensor y = mlp.forward(x);
    for (int r = 0; r < 6; ++r) {
        double h[4];
        for (int j = 0; j < 4; ++j) {
            double acc = mlp.layers[0].b(0, j);
            for (int k = 0; k < 3; ++k) acc += x(r, k) * mlp.layers[0].W(k, j);
            h[j] = acc >= 0 ? acc : 0.2 * acc;
        }
        for (int j = 0; j < 2; ++j) {
            double acc = mlp.layers[1].b(0, j);
            for (int k = 0; k < 4; ++k) acc += h[k] * mlp.layers[1].W(k, j);
            CHECK(std::fabs((y(r, j)) - (acc)) <= 1e-14);
        }
    }
}

TEST_CASE("forward is bit-deterministic") {
    Rng rng(19);
    Mlp mlp = Mlp::make(rng, 5, {7, 7}, 3, Act::tanh_fn);
    Tensor x = Tensor::randn(rng, 11, 5);
    Tensor y1 = mlp.forward(x);
    Tensor y2 = mlp.forward(x);
    for (std::size_t i = 0; i < y1.size(); ++i) CHECK(y1.data()[i] == y2.data()[i]);
}

TEST_CASE("pure linear network is a matrix product") {
    Rng rng(20);
    Mlp mlp = Mlp::make(rng, 4, {5}, 3, Act::identity);
    Tensor x = Tensor::randn(rng, 8, 4);
    Tensor direct = x.matmul(mlp.layers[0].W).add_row_broadcast(mlp.layers[0].b);
    direct = direct.matmul(mlp.layers[1].W).add_row_broadcast(mlp.layers[1].b);
    CHECK((mlp.forward(x) - direct).abs_max() == 0.0);
}

TEST_CASE("forward rejects wrong widths and reports non-finite layers") {
    Rng rng(2);
    Mlp mlp = Mlp::make(rng, 3, {4}, 2);
    CHECK_THROWS_AS(mlp.forward(Tensor::zeros(5, 2)), DimensionError);
    mlp.layers[1].W(0, 0) = std::numeric_limits<double>::quiet_NaN();
    try {
        mlp.forward(Tensor::zeros(5, 3));
        FAIL("expected NumericError");
    } catch (const NumericError& e) {
        CHECK(std::string(e.what()).find("layer 2") != std::string::npos);
    }
}

// ---------------------------------------------------------------------------
// Adam

TEST_CASE("zero gradient is a fixed point that still counts steps") {
    Tensor p = Tensor::from_rows({{1, 2}, {3, 4}});
    Tensor before = p;
    Tensor g = Tensor::zeros(2, 2);
    AdamState st;
    adam_step({&p}, {&g}, st);
    CHECK((p - before).abs_max() == 0.0);
    CHECK(st.step == 1);
    adam_step({&p}, {&g}, st);
    CHECK(st.step == 2);
}

TEST_CASE("first step moves by about the learning rate") {
    // Hand calculation: m1 = (1-b1) g, v1 = (1-b2) g^2; after bias
    // correction mhat = g, vhat = g^2, so the update is lr * g / (|g| + eps).
    Tensor p = Tensor::from_rows({{0.0}});
    Tensor g = Tensor::from_rows({{3.0}});
    AdamState st;
    st.cfg.learning_rate = 0.01;
    adam_step({&p}, {&g}, st);
    const double expect = -0.01 * 3.0 / (3.0 + 1e-8);
    CHECK(std::fabs((p(0, 0)) - (expect)) <= 1e-15);
}

TEST_CASE("identical parameters receive identical updates") {
    Tensor p1 = Tensor::from_rows({{0.5, -0.25}});
    Tensor p2 = p1;
    Tensor g = Tensor::from_rows({{0.3, -1.7}});
    AdamState st;
    adam_step({&p1, &p2}, {&g, &g}, st);
    CHECK((p1 - p2).abs_max() == 0.0);
}

TEST_CASE("non-finite gradients are rejected") {
    Tensor p = Tensor::from_rows({{1.0}});
    Tensor g = Tensor::from_rows({{std::numeric_limits<double>::infinity()}});
    AdamState st;
    CHECK_THROWS_AS(adam_step({&p}, {&g}, st), NumericError);
}

TEST_CASE("adam enforces matching shapes") {
    Tensor p = Tensor::zeros(2, 2);
    Tensor g = Tensor::zeros(2, 3);
    AdamState st;
    CHECK_THROWS_AS(adam_step({&p}, {&g}, st), DimensionError);
}
