// Darmois-style construction for two observed variables: component 1 is the
// marginal CDF of x1, component 2 the kernel-estimated conditional CDF of
// x2 given x1. The output components are close to independent Uniform(0,1)
// by construction, whatever the true sources were — the canonical negative
// example for unidentifiable nonlinear unmixing.
#pragma once

#include "nlica/tensor.hpp"

namespace nlica {

// x is T x 2 with T >= 1000 (the conditional-CDF estimate needs enough
// neighbors per conditioning point). Returns T x 2 with entries in (0, 1).
Tensor darmois_transform(const Tensor& x);

}  // namespace nlica
