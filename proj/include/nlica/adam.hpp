// Adam with bias correction. Moment tensors are lazily shaped on the first
// step and must match their parameters afterwards.
#pragma once

#include <cstdint>
#include <vector>

#include "nlica/tensor.hpp"

namespace nlica {

struct AdamConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

struct AdamState {
    AdamConfig cfg;
    std::int64_t step = 0;
    std::vector<Tensor> m;
    std::vector<Tensor> v;
};

// In-place update of params given grads. Deterministic; NumericError on a
// non-finite gradient or if a parameter turns non-finite.
void adam_step(const std::vector<Tensor*>& params, const std::vector<const Tensor*>& grads,
               AdamState& state);

}  // namespace nlica
