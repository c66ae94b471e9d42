// Hilbert-Schmidt independence criterion with Gaussian kernels,
// median-heuristic bandwidths, and a permutation null.
#pragma once

#include <cstdint>
#include <vector>

#include "nlica/tensor.hpp"

namespace nlica {

struct HsicResult {
    double statistic = 0.0;
    double threshold = 0.0;  // 95th percentile of the permutation null
    bool reject = false;
    int n_used = 0;          // sample size after the subsampling cap
    int n_permutations = 0;
};

// Tests independence of two scalar columns of equal length T >= 500. The
// null distribution comes from n_permutations >= 200 random permutations of
// the second column's time indices (deterministic given seed). Samples
// beyond max_points are reduced by an evenly spaced subsample so the
// quadratic-cost kernel matrices stay tractable. NumericError on a constant
// column (median-heuristic bandwidth would vanish).
HsicResult hsic_independence(const std::vector<double>& a, const std::vector<double>& b,
                             int n_permutations = 200, std::uint64_t seed = 0,
                             int max_points = 2000);

// Convenience for d >= 2 columns: runs every pair, returns results in
// (0,1), (0,2), ..., (d-2,d-1) order.
std::vector<HsicResult> hsic_all_pairs(const Tensor& z, int n_permutations = 200,
                                       std::uint64_t seed = 0, int max_points = 2000);

}  // namespace nlica
