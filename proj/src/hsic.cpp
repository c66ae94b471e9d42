#include "nlica/hsic.hpp"

#include <algorithm>
#include <cmath>

#include "nlica/errors.hpp"
#include "nlica/rng.hpp"

namespace nlica {
namespace {

// Median of pairwise absolute differences (i < j), the kernel bandwidth.
double median_distance(const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<double> dist;
    dist.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) dist.push_back(std::fabs(v[i] - v[j]));
    auto mid = dist.begin() + static_cast<std::ptrdiff_t>(dist.size() / 2);
    std::nth_element(dist.begin(), mid, dist.end());
    return *mid;
}

// Doubly centered Gaussian Gram matrix H K H.
Tensor centered_gram(const std::vector<double>& v, double bandwidth) {
    const int n = static_cast<int>(v.size());
    Tensor k = Tensor::zeros(n, n);
    const double inv = -1.0 / (2.0 * bandwidth * bandwidth);
    for (int i = 0; i < n; ++i) {
        k(i, i) = 1.0;
        for (int j = i + 1; j < n; ++j) {
            const double d = v[static_cast<std::size_t>(i)] - v[static_cast<std::size_t>(j)];
            const double val = std::exp(inv * d * d);
            k(i, j) = val;
            k(j, i) = val;
        }
    }
    std::vector<double> row_mean(static_cast<std::size_t>(n), 0.0);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += k(i, j);
        row_mean[static_cast<std::size_t>(i)] = s / n;
        total += s;
    }
    total /= static_cast<double>(n) * n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            k(i, j) += total - row_mean[static_cast<std::size_t>(i)] -
                       row_mean[static_cast<std::size_t>(j)];
    return k;
}

}  // namespace

HsicResult hsic_independence(const std::vector<double>& a, const std::vector<double>& b,
                             int n_permutations, std::uint64_t seed, int max_points) {
    if (a.size() != b.size())
        throw DimensionError("hsic: columns have different lengths (" + std::to_string(a.size()) +
                             " vs " + std::to_string(b.size()) + ")");
    if (a.size() < 500) throw ContractError("hsic: need at least 500 samples");
    if (n_permutations < 200) throw ContractError("hsic: need at least 200 permutations");
    if (max_points < 100) throw ContractError("hsic: max_points too small");

    // Evenly spaced, deterministic subsample once T exceeds the cap.
    std::vector<double> x = a, y = b;
    if (static_cast<int>(a.size()) > max_points) {
        x.clear();
        y.clear();
        const double stride = static_cast<double>(a.size()) / max_points;
        for (int i = 0; i < max_points; ++i) {
            const std::size_t idx = static_cast<std::size_t>(i * stride);
            x.push_back(a[idx]);
            y.push_back(b[idx]);
        }
    }
    const int n = static_cast<int>(x.size());

    const double bx = median_distance(x);
    const double by = median_distance(y);
    if (!(bx > 0.0)) throw NumericError("hsic: first column is (nearly) constant");
    if (!(by > 0.0)) throw NumericError("hsic: second column is (nearly) constant");

    const Tensor kc = centered_gram(x, bx);
    const Tensor lc = centered_gram(y, by);

    const double norm = 1.0 / (static_cast<double>(n) * n);
    double stat = 0.0;
    for (int i = 0; i < n; ++i) {
        const double* krow = kc.row(i);
        const double* lrow = lc.row(i);
        for (int j = 0; j < n; ++j) stat += krow[j] * lrow[j];
    }
    stat *= norm;

    // Permutation null: relabeling one variable breaks any dependence, and
    // centering commutes with permutation, so permuted statistics come from
    // gathering rows/columns of the centered matrices.
    Rng rng = Rng::stream(seed, 0x451c);
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::vector<double> null_stats(static_cast<std::size_t>(n_permutations));
    for (int p = 0; p < n_permutations; ++p) {
        for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
        rng.shuffle(perm);
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            const double* krow = kc.row(perm[static_cast<std::size_t>(i)]);
            const double* lrow = lc.row(i);
            for (int j = 0; j < n; ++j) s += krow[perm[static_cast<std::size_t>(j)]] * lrow[j];
        }
        null_stats[static_cast<std::size_t>(p)] = s * norm;
    }
    std::sort(null_stats.begin(), null_stats.end());
    const int idx = static_cast<int>(std::ceil(0.95 * n_permutations)) - 1;

    HsicResult res;
    res.statistic = stat;
    res.threshold = null_stats[static_cast<std::size_t>(idx)];
    res.reject = stat > res.threshold;
    res.n_used = n;
    res.n_permutations = n_permutations;
    return res;
}

std::vector<HsicResult> hsic_all_pairs(const Tensor& z, int n_permutations, std::uint64_t seed,
                                       int max_points) {
    if (z.cols() < 2) throw DimensionError("hsic_all_pairs: need at least two columns");
    std::vector<HsicResult> out;
    for (int i = 0; i < z.cols(); ++i) {
        std::vector<double> a(static_cast<std::size_t>(z.rows()));
        for (int t = 0; t < z.rows(); ++t) a[static_cast<std::size_t>(t)] = z(t, i);
        for (int j = i + 1; j < z.cols(); ++j) {
            std::vector<double> b(static_cast<std::size_t>(z.rows()));
            for (int t = 0; t < z.rows(); ++t) b[static_cast<std::size_t>(t)] = z(t, j);
            out.push_back(hsic_independence(a, b, n_permutations,
                                            derive_stream(seed, static_cast<std::uint64_t>(
                                                                    i * z.cols() + j)),
                                            max_points));
        }
    }
    return out;
}

}  // namespace nlica
