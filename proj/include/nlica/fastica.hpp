// Linear ICA via symmetric FastICA with a tanh contrast, plus a plain PCA
// baseline. Both operate on observation matrices with samples in rows.
#pragma once

#include <cstdint>

#include "nlica/tensor.hpp"

namespace nlica {

struct IcaResult {
    Tensor unmixing;   // n_components x d; z = (x - mean) * unmixing^T
    Tensor z;          // T x n_components, unit variance, independent-ish
    Tensor mean;       // 1 x d column means removed before unmixing
    bool converged = true;
    int iterations = 0;
};

// Centers, PCA-whitens, then runs the symmetric fixed-point iteration with
// the tanh contrast and symmetric orthonormalization. Stops when the largest
// |1 - |<w_new, w_old>|| drops below 1e-6 or after 500 sweeps; a run that
// hits the cap still returns its last iterate with converged = false.
IcaResult linear_ica(const Tensor& x, int n_components, std::uint64_t seed = 0);

// Centered projection onto the top principal directions, scaled to unit
// variance per component.
Tensor pca_baseline(const Tensor& x, int n_components);

}  // namespace nlica
