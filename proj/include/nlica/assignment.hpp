// Maximum-weight bipartite assignment via shortest augmenting paths with
// potentials (Jonker-Volgenant style), O(n^3).
#pragma once

#include <vector>

#include "nlica/tensor.hpp"

namespace nlica {

// weights is rows x cols with rows <= cols; returns for each row the column
// it is assigned to (all distinct), maximizing the total weight.
std::vector<int> max_weight_assignment(const Tensor& weights);

}  // namespace nlica
