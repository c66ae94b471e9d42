#include "nlica/fastica.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "nlica/errors.hpp"
#include "nlica/linalg.hpp"

namespace nlica {

namespace {

constexpr int kMaxIterations = 500;
constexpr double kTolerance = 1e-6;

void check_input(const Tensor& x, int n_components) {
    if (x.rows() < 2 || x.cols() < 1) {
        throw DimensionError("ICA input must have >= 2 rows and >= 1 column, got " +
                             std::to_string(x.rows()) + " x " + std::to_string(x.cols()));
    }
    if (n_components < 1 || n_components > x.cols()) {
        throw DimensionError("n_components must be in [1, " + std::to_string(x.cols()) +
                             "], got " + std::to_string(n_components));
    }
    if (!x.all_finite()) throw NumericError("ICA input contains a non-finite value");
    if (x.rows() <= x.cols()) {
        throw ContractError("ICA needs more samples than dimensions (" +
                            std::to_string(x.rows()) + " x " + std::to_string(x.cols()) + ")");
    }
}

Tensor centered(const Tensor& x, Tensor& mean_out) {
    const std::vector<double> mu = x.col_mean();
    mean_out = Tensor(1, x.cols());
    for (int j = 0; j < x.cols(); ++j) mean_out(0, j) = mu[j];
    Tensor xc = x;
    for (int i = 0; i < x.rows(); ++i) {
        for (int j = 0; j < x.cols(); ++j) xc(i, j) -= mu[j];
    }
    return xc;
}

// Principal directions of centered data: eigenvectors (columns) and
// eigenvalues of the sample covariance, descending. Throws when the
// requested subspace is degenerate.
void pca_of_centered(const Tensor& xc, int n_components, Tensor& vectors,
                     std::vector<double>& values) {
    const double denom = static_cast<double>(xc.rows() - 1);
    Tensor cov = xc.transpose().matmul(xc);
    cov *= 1.0 / denom;
    sym_eig(cov, vectors, values);
    const double scale = std::fabs(values.front());
    for (int j = 0; j < n_components; ++j) {
        if (!(values[j] > 1e-12 * (1.0 + scale))) {
            throw NumericError("degenerate covariance: principal direction " +
                               std::to_string(j + 1) + " has vanishing variance");
        }
    }
}

}  // namespace

IcaResult linear_ica(const Tensor& x, int n_components, std::uint64_t seed) {
    check_input(x, n_components);
    const int T = x.rows();
    const int d = x.cols();
    const int n = n_components;

    IcaResult res;
    Tensor xc = centered(x, res.mean);

    Tensor evec;
    std::vector<double> eval;
    pca_of_centered(xc, n, evec, eval);

    // Whitening map K (n x d): y = xc * K^T has identity covariance.
    Tensor K(n, d);
    for (int i = 0; i < n; ++i) {
        const double s = 1.0 / std::sqrt(eval[i]);
        for (int j = 0; j < d; ++j) K(i, j) = evec(j, i) * s;
    }
    const Tensor y = xc.matmul(K.transpose());  // T x n

    Rng rng = Rng::stream(seed, 0x1caU);
    Tensor W = random_orthogonal(rng, n);  // rows are the unmixing directions

    res.converged = false;
    for (int iter = 1; iter <= kMaxIterations; ++iter) {
        const Tensor u = y.matmul(W.transpose());  // T x n scores
        Tensor g = u.map([](double v) { return std::tanh(v); });

        // w_i^+ = E[y g(u_i)] - E[g'(u_i)] w_i, all rows at once.
        Tensor wplus = g.transpose().matmul(y);  // n x d' (d' = n)
        wplus *= 1.0 / static_cast<double>(T);
        for (int i = 0; i < n; ++i) {
            double mean_gprime = 0.0;
            for (int t = 0; t < T; ++t) {
                const double gv = g(t, i);
                mean_gprime += 1.0 - gv * gv;
            }
            mean_gprime /= static_cast<double>(T);
            for (int j = 0; j < n; ++j) wplus(i, j) -= mean_gprime * W(i, j);
        }

        // Symmetric orthonormalization: W <- (W W^T)^{-1/2} W.
        const Tensor wwT = wplus.matmul(wplus.transpose());
        Tensor w_new = sym_inv_sqrt(wwT).matmul(wplus);

        double delta = 0.0;
        for (int i = 0; i < n; ++i) {
            double dot = 0.0;
            for (int j = 0; j < n; ++j) dot += w_new(i, j) * W(i, j);
            delta = std::max(delta, std::fabs(1.0 - std::fabs(dot)));
        }
        W = std::move(w_new);
        res.iterations = iter;
        if (delta < kTolerance) {
            res.converged = true;
            break;
        }
    }

    res.unmixing = W.matmul(K);  // n x d, applies to centered x
    res.z = xc.matmul(res.unmixing.transpose());
    return res;
}

Tensor pca_baseline(const Tensor& x, int n_components) {
    check_input(x, n_components);
    Tensor mean;
    Tensor xc = centered(x, mean);
    Tensor evec;
    std::vector<double> eval;
    pca_of_centered(xc, n_components, evec, eval);
    Tensor proj(n_components, x.cols());
    for (int i = 0; i < n_components; ++i) {
        const double s = 1.0 / std::sqrt(eval[i]);
        for (int j = 0; j < x.cols(); ++j) proj(i, j) = evec(j, i) * s;
    }
    return xc.matmul(proj.transpose());
}

}  // namespace nlica
